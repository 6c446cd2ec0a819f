"""Match attack patterns to STRIDE security-pattern groups with a feed-forward network."""

from pathlib import Path

from ._core import (
    Catalog,
    Dataset,
    Error,
    Model,
    ParseError,
    Stride,
    TargetMode,
    build_dataset,
    decode_output,
    encode_target,
    evaluate,
    load_catalog,
    parse_pattern,
    read_csv,
    recommend,
    run_cli,
    run_sweep,
    split,
    train_model,
    write_csv,
)

DATA_DIR = Path(__file__).resolve().parent / "data"


def shipped_catalog() -> Catalog:
    """The catalog and component registry bundled with the package."""
    return load_catalog(
        (DATA_DIR / "patterns.txt").read_text(),
        (DATA_DIR / "components.csv").read_text(),
    )


__all__ = [
    "Catalog",
    "DATA_DIR",
    "Dataset",
    "Error",
    "Model",
    "ParseError",
    "Stride",
    "TargetMode",
    "build_dataset",
    "decode_output",
    "encode_target",
    "evaluate",
    "load_catalog",
    "parse_pattern",
    "read_csv",
    "recommend",
    "run_cli",
    "run_sweep",
    "shipped_catalog",
    "split",
    "train_model",
    "write_csv",
]
