#pragma once

#include "fieldnorm/baseline.hpp"
#include "fieldnorm/classify.hpp"
#include "fieldnorm/corpus.hpp"
#include "fieldnorm/rational.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fieldnorm {

/// How 0/0 per-paper and oeuvre ratios are treated.
struct ZeroConventions {
  /// true: c = 0 over e = 0 counts as ratio 1 (flagged).
  /// false: such papers leave the averaged ratio and a 0/0 globalized
  /// ratio is an error.
  bool zero_over_zero_is_one = true;
};

/// Everything a score is computed against. All referenced objects must
/// outlive the call; none is modified.
struct ScoringInputs {
  const Corpus& corpus;
  const AssignmentTable& assignments;
  const BaselineTable& table;
  ZeroConventions conventions{};
};

inline constexpr std::string_view kFlagZeroOverZero = "0/0 taken as 1";
inline constexpr std::string_view kFlagZeroExpected = "zero expected";

struct TraceLine {
  std::string id;
  std::uint64_t citations = 0;
  Rational expected;
  std::optional<Rational> ratio;  // c / e, or 1 under the 0/0 convention
  std::string flag;
  Method method = Method::JournalCategories;
  std::map<std::string, Rational> weights;
};

struct Exclusion {
  std::string id;
  std::string reason;
};

struct GlobalizedRatio {
  Rational value;
  bool zero_over_zero = false;
};

struct AveragedRatio {
  std::optional<Rational> value;  // nullopt when no paper contributes
  std::size_t contributing = 0;   // n_A
  std::size_t zero_over_zero = 0;
  std::size_t zero_expected = 0;  // c > 0, e = 0: left out of the mean
};

/// Ratios restricted to one category. Each paper's c and e enter scaled by
/// its weight in the category; e uses that category's own cell rate.
struct FieldScore {
  Rational weight;  // n_c
  Rational citations;
  Rational expected;
  std::optional<Rational> globalized;
  std::optional<Rational> averaged;
  Rational averaged_weight;  // weight of papers contributing to `averaged`
  std::string flag;
};

struct OeuvreScore {
  std::string group_id;
  std::string baseline_fingerprint;
  std::size_t oeuvre_size = 0;
  std::size_t n_scored = 0;
  std::uint64_t sum_citations = 0;
  Rational sum_expected;
  GlobalizedRatio globalized;
  AveragedRatio averaged;
  std::map<std::string, FieldScore> breakdown;
  std::vector<TraceLine> trace;     // sorted by id
  std::vector<Exclusion> excluded;  // sorted by id
};

/// Sum of actual over sum of expected citations across the scored papers.
/// Throws Error("zero expected, positive actual") when the ratio is
/// undefined and Error("no scorable papers") when nothing survives.
GlobalizedRatio globalized_ratio(const Oeuvre& oeuvre, const ScoringInputs& inputs);

/// Mean of per-paper c/e.
AveragedRatio averaged_ratio(const Oeuvre& oeuvre, const ScoringInputs& inputs);

std::map<std::string, FieldScore> per_field_breakdown(const Oeuvre& oeuvre,
                                                      const ScoringInputs& inputs);

/// Both ratios, breakdown, per-paper trace and exclusions in one record.
OeuvreScore score(const Oeuvre& oeuvre, const ScoringInputs& inputs);

}  // namespace fieldnorm
