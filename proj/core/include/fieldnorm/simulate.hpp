#pragma once

#include "fieldnorm/classify.hpp"
#include "fieldnorm/corpus.hpp"
#include "fieldnorm/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace fieldnorm::sim {

/// P(k) proportional to (k + 1)^-alpha on k = 0..max_count.
struct PowerLaw {
  double alpha = 2.5;
  std::uint64_t max_count = 10000;
};

/// round(exp(N(mu, sigma))).
struct Lognormal {
  double mu = 1.0;
  double sigma = 1.0;
};

/// Uniform integer on 0..max.
struct Uniform {
  std::uint64_t max = 10;
};

using SkewModel = std::variant<PowerLaw, Lognormal, Uniform>;

/// "powerlaw:ALPHA[:MAX]", "lognormal:MU:SIGMA", "uniform:MAX".
SkewModel parse_skew_model(std::string_view text);
std::string to_string(const SkewModel& model);

enum class Scenario { Random, Adversarial };

struct SimConfig {
  std::uint64_t seed = 1;
  std::size_t n_groups = 20;
  std::size_t oeuvre_min = 5;
  std::size_t oeuvre_max = 30;
  SkewModel skew = PowerLaw{};
  std::size_t n_fields = 2;
  double field_rate_spread = 1.0;  // scale of the last field relative to the first
  std::size_t papers_per_field = 500;
  std::size_t replicates = 5;
  unsigned threads = 1;
  Scenario scenario = Scenario::Random;

  /// Throws Error("invalid config") on violated bounds and on
  /// degenerate combinations such as a spread with a single field.
  void validate() const;
};

/// A named configuration point, as read from a config file.
struct SimPoint {
  std::string label;
  SimConfig config;
};

/// Key-value file: "key = value" lines, '#' comments. Keys before the first
/// "[name]" header are defaults for every point; each header starts a point.
/// With no headers the file describes one point called "default".
std::vector<SimPoint> read_sim_config(std::istream& in);

/// Discrete power law by inverse CDF over the truncated, normalized pmf.
class PowerLawSampler {
 public:
  explicit PowerLawSampler(const PowerLaw& model);

  std::uint64_t operator()(std::mt19937_64& rng) const;
  double mean() const { return mean_; }
  double variance() const { return variance_; }

 private:
  std::vector<double> cdf_;
  double mean_ = 0;
  double variance_ = 0;
};

/// Synthetic universe: one single-category specialist journal per field, so
/// every paper sits in exactly one cell.
struct World {
  Corpus corpus;  // frozen
  CategoryMap map;
  std::vector<Oeuvre> oeuvres;
};

/// Deterministic in (config.seed, replicate).
World generate_corpus(const SimConfig& config, std::size_t replicate = 0);

/// Two fields with rates 1 and `spread`; one oeuvre whose paper cited
/// `spread` times sits in the low field and whose paper cited once sits in
/// the high one, so G = 1 while A = (spread + 1/spread) / 2.
World adversarial_world(std::uint64_t spread);

struct DivergenceRecord {
  std::string label;
  std::size_t replicate = 0;
  std::string group_id;
  Rational globalized;
  Rational averaged;
  Rational delta;  // A - G
};

struct DivergenceSummary {
  std::string label;
  std::size_t records = 0;
  std::size_t undefined_averaged = 0;
  double mean_delta = 0;
  double median_delta = 0;
  Rational max_abs_delta;
  double fraction_averaged_above = 0;
};

struct DivergenceStats {
  std::vector<DivergenceRecord> records;
  DivergenceSummary summary;
};

/// Scores every oeuvre of every replicate and summarizes A - G. Replicates
/// run in parallel when config.threads > 1 with identical results.
DivergenceStats run_divergence(const SimConfig& config, std::string label = "default");

/// Scores the oeuvres of one prepared world.
std::vector<DivergenceRecord> divergence_of(const World& world, const std::string& label,
                                            std::size_t replicate, std::size_t* undefined = nullptr);

DivergenceSummary summarize(std::string label, const std::vector<DivergenceRecord>& records,
                            std::size_t undefined_averaged);

void write_records(std::ostream& out, const std::vector<DivergenceRecord>& records);
void write_summaries(std::ostream& out, const std::vector<DivergenceSummary>& summaries);

}  // namespace fieldnorm::sim
