#!/usr/bin/env python3
"""Regenerate data/components.csv and data/patterns.txt.

Only pattern 1 is a fixed reference record; every other record
is synthesized so that the catalog has 51 patterns, STRIDE assignment counts
S=1 T=2 R=0 I=6 D=21 E=27 and expands to exactly 226 samples. The output is
deterministic (fixed seed), so rerunning this script reproduces the shipped
files byte for byte.

    python3 tools/synthesize_catalog.py data/
"""

import random
import sys
from pathlib import Path

# IDs are grouped by component kind: actors and tiers, identity artefacts,
# data and input channels, shared system resources, privileged facilities.
COMPONENTS = [
    ("User", 1), ("Attacker", 2), ("Client", 3), ("Browser", 4),
    ("Server", 5), ("WebServer", 6), ("AppServer", 7),
    ("Credential", 10), ("Password", 11), ("Session", 12), ("Cookie", 13),
    ("Certificate", 14), ("Email", 15), ("DNS", 16),
    ("Database", 20), ("Query", 21), ("Form", 22), ("Request", 23),
    ("File", 24), ("Directory", 25), ("Cache", 26), ("Config", 27),
    ("ErrorMessage", 28), ("TempFile", 29),
    ("Memory", 36), ("CPU", 38), ("Network", 39), ("Socket", 40),
    ("Router", 41), ("HardDrive", 42), ("Queue", 44), ("FileSystem", 46),
    ("Thread", 48), ("Buffer", 50), ("Firewall", 52), ("Log", 58),
    ("Process", 80), ("Kernel", 82), ("Shell", 84), ("Command", 86),
    ("Library", 88), ("Service", 90), ("Registry", 92), ("AdminAccount", 94),
    ("Script", 96),
]

# (resource, vector, attack type) building blocks per STRIDE category.
PATHS = {
    "S": [("Credential", "Cookie", "I"), ("Session", "Cookie", "I"),
          ("Credential", "Email", "I"), ("Session", "Request", "I"),
          ("Certificate", "DNS", "I"), ("Password", "Form", "I")],
    "T": [("Database", "Query", "I"), ("File", "Request", "I"),
          ("Config", "Form", "I"), ("Cache", "DNS", "I"),
          ("Database", "Form", "I"), ("File", "Directory", "I")],
    "I": [("Database", "Query", "C"), ("File", "Directory", "C"),
          ("Password", "ErrorMessage", "C"), ("Cache", "Request", "C"),
          ("Config", "ErrorMessage", "C"), ("Credential", "Network", "C"),
          ("TempFile", "Directory", "C"), ("Session", "Network", "C")],
    "D": [("HardDrive", "Log", "A"), ("Memory", "Request", "A"),
          ("CPU", "Thread", "A"), ("Network", "Socket", "A"),
          ("Router", "Network", "A"), ("Queue", "Email", "A"),
          ("FileSystem", "TempFile", "A"), ("HardDrive", "File", "A"),
          ("Memory", "Buffer", "A"), ("Socket", "Request", "A"),
          ("Firewall", "Network", "A"), ("CPU", "Request", "A")],
    "E": [("Kernel", "Buffer", "I"), ("Shell", "Command", "I"),
          ("AdminAccount", "Script", "I"), ("Process", "Library", "I"),
          ("Service", "Config", "I"), ("Registry", "Command", "I"),
          ("AdminAccount", "Password", "I"), ("Kernel", "Library", "I"),
          ("Shell", "Script", "I"), ("Process", "Buffer", "I"),
          ("Service", "Request", "I"), ("Process", "Thread", "C")],
}

FRONT = ["User", "Attacker"]
MIDDLE = ["Client", "Browser", "Server", "WebServer", "AppServer"]

GROUPS = {
    1: [("Authentication Enforcer", "Steel2005"),
        ("Single Sign-On Delegator", "Steel2005"),
        ("Credential Tokenizer", "Steel2005"),
        ("Assertion Builder", "Steel2005"),
        ("Authenticator", "Blakley2004"),
        ("Subject Descriptor", "Blakley2004"),
        ("Password Authentication", "KienzleElder2003"),
        ("Account Lockout", "KienzleElder2003"),
        ("Authenticated Session", "KienzleElder2003")],
    2: [("Intercepting Validator", "Steel2005"),
        ("Message Inspector", "Steel2005"),
        ("Secure Pipe", "Steel2005"),
        ("Secure Communication", "Blakley2004"),
        ("Client Input Filters", "KienzleElder2003"),
        ("Validated Transaction", "KienzleElder2003")],
    3: [("Secure Logger", "Steel2005"),
        ("Audit Interceptor", "Steel2005"),
        ("Security Context", "Blakley2004"),
        ("Secure Assertion", "KienzleElder2003")],
    4: [("Obfuscated Transfer Object", "Steel2005"),
        ("Secure Pipe", "Steel2005"),
        ("Secure Communication", "Blakley2004"),
        ("Security Association", "Blakley2004"),
        ("Encrypted Storage", "KienzleElder2003"),
        ("Client Data Storage", "KienzleElder2003"),
        ("Hidden Implementation", "KienzleElder2003")],
    5: [("Message Interceptor Gateway", "Steel2005"),
        ("Dynamic Service Management", "Steel2005"),
        ("Checkpointed System", "Blakley2004"),
        ("Standby", "Blakley2004"),
        ("Comparator-Checked Fault-Tolerant System", "Blakley2004"),
        ("Replicated System", "Blakley2004"),
        ("Error Detection/Correction", "Blakley2004"),
        ("Network Address Blacklist", "KienzleElder2003")],
    6: [("Authorization Enforcer", "Steel2005"),
        ("Policy Delegate", "Steel2005"),
        ("Container Managed Security", "Steel2005"),
        ("Secure Base Action", "Steel2005"),
        ("Secure Service Facade", "Steel2005"),
        ("Secure Session Object", "Steel2005"),
        ("Secure Service Proxy", "Steel2005"),
        ("Protected System", "Blakley2004"),
        ("Policy", "Blakley2004"),
        ("Secure Proxy", "Blakley2004"),
        ("Server Sandbox", "KienzleElder2003"),
        ("Partitioned Application", "KienzleElder2003"),
        ("Minefield", "KienzleElder2003"),
        ("Directed Session", "KienzleElder2003")],
}
GROUP_NAMES = {1: "Spoofing", 2: "Tampering", 3: "Repudiation",
               4: "Information disclosure", 5: "Denial of service",
               6: "Elevation of privilege"}


def build_patterns(rng):
    # Category layout: 45 single-category patterns plus 6 two-category
    # patterns whose categories are adjacent group IDs.
    singles = ["T"] + ["I"] * 4 + ["D"] * 15 + ["E"] * 24  # pattern 1 (D) apart
    doubles = ["DE"] * 3 + ["ID"] * 2 + ["ST"]
    rest = singles + doubles
    rng.shuffle(rest)
    cats = ["D"] + rest

    single_ids = [i for i, c in enumerate(cats) if len(c) == 1 and i > 0]
    # 213 samples over 44 single-category patterns (pattern 1 contributes 1).
    counts = {i: 5 for i in single_ids}
    for i in rng.sample(single_ids, 7):
        counts[i] = 4

    records = []
    for index, cat in enumerate(cats):
        attack_id = index + 1
        if attack_id == 1:
            records.append(dict(id=1, regex="(User+)(Server+)(Log+)(HardDrive+)",
                                stride="D", paths=[("HardDrive", "Log", "A")],
                                provenance="fixed reference record"))
            continue
        if len(cat) == 2:
            paths = [rng.choice(PATHS[cat[0]])]
        else:
            paths = rng.sample(PATHS[cat], counts[index])
        comps = []
        for r, v, _ in paths:
            for c in (v, r):
                if c not in comps:
                    comps.append(c)
        head = [rng.choice(FRONT), rng.choice(MIDDLE)]
        seq = head + [c for c in comps if c not in head]
        regex = "".join("(%s%s)" % (c, "+" if rng.random() < 0.6 else "") for c in seq)
        records.append(dict(id=attack_id, regex=regex, stride=cat, paths=paths,
                            provenance="synthesized"))
    return records


def main(out_dir):
    out = Path(out_dir)
    rng = random.Random(20130501)
    with open(out / "components.csv", "w", newline="\n") as f:
        f.write("# Attack component registry: name,id\n")
        f.write("# HardDrive=42 and Log=58 are fixed reference encodings; other IDs are assigned by component kind.\n")
        for name, cid in COMPONENTS:
            f.write("%s,%d\n" % (name, cid))

    records = build_patterns(rng)
    samples = sum(len(r["paths"]) * len(r["stride"]) for r in records)
    assert len(records) == 51 and samples == 226, (len(records), samples)

    with open(out / "patterns.txt", "w", newline="\n") as f:
        f.write("# Regularly expressed attack patterns and STRIDE security-pattern groups.\n")
        f.write("# Generated by tools/synthesize_catalog.py; see README for the layout.\n")
        f.write("# 51 patterns, %d samples.\n\n" % samples)
        for r in records:
            f.write("# provenance: %s\n" % r["provenance"])
            f.write("pattern: %d\n" % r["id"])
            f.write("regex: %s\n" % r["regex"])
            f.write("stride: %s\n" % r["stride"])
            for res, vec, typ in r["paths"]:
                f.write("path: %s,%s,%s\n" % (res, vec, typ))
            f.write("\n")
        for gid in sorted(GROUPS):
            f.write("# %s\n" % GROUP_NAMES[gid])
            f.write("group: %d\n" % gid)
            for name, source in GROUPS[gid]:
                f.write("member: %s,%s\n" % (name, source))
            f.write("\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data")
