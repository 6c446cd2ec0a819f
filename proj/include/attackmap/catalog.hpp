#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "attackmap/error.hpp"

namespace attackmap {

// ---------------------------------------------------------------------------
// Attack pattern notation: (User+)(Server+)(Log+)(HardDrive+)

enum class Quantifier { One, OneOrMore };

struct PatternStep {
  std::string component;
  Quantifier quantifier = Quantifier::One;

  bool operator==(const PatternStep&) const = default;
};

struct AttackPatternExpr {
  std::vector<PatternStep> steps;

  bool operator==(const AttackPatternExpr&) const = default;
};

/// Parses a sequence of parenthesized component terms, each optionally
/// followed by `+`. Whitespace between terms is allowed. Throws ParseError
/// whose position() is the offending character offset.
AttackPatternExpr parse_pattern(std::string_view text);

/// Canonical form: `(Name+)` / `(Name)` terms with no whitespace.
std::string render_pattern(const AttackPatternExpr& expr);

// ---------------------------------------------------------------------------
// STRIDE categories and their security-pattern group IDs (S=1 ... E=6).

enum class Stride {
  Spoofing = 1,
  Tampering = 2,
  Repudiation = 3,
  InformationDisclosure = 4,
  DenialOfService = 5,
  ElevationOfPrivilege = 6,
};

inline constexpr int kGroupCount = 6;

inline constexpr std::array<Stride, kGroupCount> kAllStride = {
    Stride::Spoofing,        Stride::Tampering,       Stride::Repudiation,
    Stride::InformationDisclosure, Stride::DenialOfService, Stride::ElevationOfPrivilege};

constexpr int group_id(Stride s) { return static_cast<int>(s); }

/// Throws Error unless 1 <= id <= 6.
Stride stride_from_group(int id);
char stride_letter(Stride s);
std::optional<Stride> stride_from_letter(char c);
std::string_view stride_name(Stride s);

// ---------------------------------------------------------------------------

enum class AttackType { Availability = 1, Integrity = 2, Confidentiality = 3 };

constexpr int type_value(AttackType t) { return static_cast<int>(t); }
char attack_type_letter(AttackType t);
std::optional<AttackType> attack_type_from_letter(char c);

/// Name -> ID map for attack components. Names are case-sensitive; both
/// names and IDs are unique and IDs are positive.
class ComponentRegistry {
 public:
  struct Entry {
    std::string name;
    int id;
  };

  /// Throws Error on a duplicate name or ID, an empty name or a non-positive ID.
  void add(std::string name, int id);

  std::optional<int> find(std::string_view name) const;
  /// Throws Error if the name is not registered.
  int id_of(std::string_view name) const;
  bool contains(std::string_view name) const { return find(name).has_value(); }

  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<Entry> entries_;
};

/// One `name,id` record per line; blank lines and `#` comments are skipped.
ComponentRegistry load_registry(std::string_view text);

struct AttackPath {
  std::string resource;
  std::string vector;
  AttackType type = AttackType::Availability;

  bool operator==(const AttackPath&) const = default;
};

struct AttackPatternRecord {
  int attack_id = 0;
  AttackPatternExpr expr;
  std::vector<Stride> categories;  // sorted by group ID, no duplicates
  std::vector<AttackPath> paths;
};

enum class PatternSource { Steel2005, Blakley2004, KienzleElder2003 };

std::string_view source_name(PatternSource s);
std::optional<PatternSource> source_from_name(std::string_view name);

struct SecurityPattern {
  std::string name;
  PatternSource source = PatternSource::Steel2005;

  bool operator==(const SecurityPattern&) const = default;
};

struct SecurityPatternGroup {
  int group_id = 0;
  Stride category = Stride::Spoofing;
  std::vector<SecurityPattern> members;
};

/// Immutable once built. Holds exactly one group per STRIDE category, and
/// every component referenced by a pattern resolves in the registry.
class Catalog {
 public:
  /// Validates every invariant and throws Error describing the first violation.
  /// `groups` may be given in any order; they are stored by group ID.
  Catalog(std::vector<AttackPatternRecord> patterns, std::vector<SecurityPatternGroup> groups,
          ComponentRegistry registry);

  const std::vector<AttackPatternRecord>& patterns() const { return patterns_; }
  const std::array<SecurityPatternGroup, kGroupCount>& groups() const { return groups_; }
  const ComponentRegistry& registry() const { return registry_; }

  /// Throws Error when group_id is outside 1..6.
  const std::vector<SecurityPattern>& group_members(int group_id) const;

 private:
  std::vector<AttackPatternRecord> patterns_;
  std::array<SecurityPatternGroup, kGroupCount> groups_;
  ComponentRegistry registry_;
};

/// Parses the line-oriented catalog format:
///
///   pattern: 1
///   regex: (User+)(Server+)(Log+)(HardDrive+)
///   stride: D
///   path: HardDrive,Log,A
///
///   group: 5
///   member: Standby,Blakley2004
///
/// Errors carry the offending line number.
Catalog load_catalog(std::string_view text, ComponentRegistry registry);

using StrideHistogram = std::array<std::size_t, kGroupCount>;

/// Number of (pattern, category) assignments per category, indexed by group ID - 1.
StrideHistogram stride_histogram(const Catalog& catalog);

}  // namespace attackmap
