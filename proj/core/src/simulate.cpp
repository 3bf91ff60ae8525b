#include "fieldnorm/simulate.hpp"

#include "fieldnorm/baseline.hpp"
#include "fieldnorm/error.hpp"
#include "fieldnorm/indicators.hpp"
#include "fieldnorm/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <future>
#include <istream>
#include <ostream>
#include <set>

namespace fieldnorm::sim {

namespace {

[[noreturn]] void invalid(const std::string& detail) { throw Error("invalid config", detail); }

double parse_double(std::string_view s, std::string_view key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(std::string(s), &used);
    if (used == s.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  invalid(std::string(key) + ": not a number '" + std::string(s) + "'");
}

std::uint64_t parse_count(std::string_view s, std::string_view key) {
  const auto v = text::parse_int(s);
  if (!v || *v < 0) invalid(std::string(key) + ": not a non-negative integer '" + std::string(s) + "'");
  return static_cast<std::uint64_t>(*v);
}

// Uniform double in [0, 1) from the top 53 bits.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

std::uint64_t pick(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return std::uniform_int_distribution<std::uint64_t>(lo, hi)(rng);
}

}  // namespace

SkewModel parse_skew_model(std::string_view text) {
  const auto parts = text::split(text, ':');
  if (parts[0] == "powerlaw" && (parts.size() == 2 || parts.size() == 3)) {
    PowerLaw m{parse_double(parts[1], "skew"), PowerLaw{}.max_count};
    if (parts.size() == 3) m.max_count = parse_count(parts[2], "skew");
    return m;
  }
  if (parts[0] == "lognormal" && parts.size() == 3)
    return Lognormal{parse_double(parts[1], "skew"), parse_double(parts[2], "skew")};
  if (parts[0] == "uniform" && parts.size() == 2) return Uniform{parse_count(parts[1], "skew")};
  invalid("unknown skew model '" + std::string(text) + "'");
}

std::string to_string(const SkewModel& model) {
  struct Visitor {
    std::string operator()(const PowerLaw& m) const {
      return fmt::format("powerlaw:{}:{}", m.alpha, m.max_count);
    }
    std::string operator()(const Lognormal& m) const {
      return fmt::format("lognormal:{}:{}", m.mu, m.sigma);
    }
    std::string operator()(const Uniform& m) const { return fmt::format("uniform:{}", m.max); }
  };
  return std::visit(Visitor{}, model);
}

void SimConfig::validate() const {
  if (n_groups < 1 || replicates < 1 || n_fields < 1 || papers_per_field < 1 || oeuvre_min < 1)
    invalid("counts must be >= 1");
  if (oeuvre_min > oeuvre_max) invalid("oeuvre_min > oeuvre_max");
  if (threads < 1) invalid("threads must be >= 1");
  if (!(field_rate_spread >= 1.0)) invalid("spread must be >= 1");
  if (const auto* p = std::get_if<PowerLaw>(&skew); p && !(p->alpha > 1.0))
    invalid("power-law alpha must be > 1");
  if (const auto* l = std::get_if<Lognormal>(&skew); l && !(l->sigma >= 0.0))
    invalid("lognormal sigma must be >= 0");
  if (scenario == Scenario::Adversarial) {
    if (field_rate_spread != std::floor(field_rate_spread))
      invalid("adversarial scenario needs an integer spread");
    return;
  }
  if (n_fields == 1 && field_rate_spread != 1.0)
    invalid("spread requested but n_fields = 1");
  if (oeuvre_max > n_fields * papers_per_field) invalid("oeuvre_max exceeds corpus size");
}

std::vector<SimPoint> read_sim_config(std::istream& in) {
  std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> sections;
  std::vector<std::pair<std::string, std::string>> defaults;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = text::trim(view);
    if (view.empty()) continue;
    if (view.front() == '[') {
      if (view.back() != ']' || view.size() < 3) invalid("line " + std::to_string(line_no) + ": bad section");
      sections.emplace_back(std::string(text::trim(view.substr(1, view.size() - 2))),
                            std::vector<std::pair<std::string, std::string>>{});
      continue;
    }
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) invalid("line " + std::to_string(line_no) + ": expected key = value");
    auto kv = std::make_pair(std::string(text::trim(view.substr(0, eq))),
                             std::string(text::trim(view.substr(eq + 1))));
    (sections.empty() ? defaults : sections.back().second).push_back(std::move(kv));
  }
  if (sections.empty()) sections.emplace_back("default", std::vector<std::pair<std::string, std::string>>{});

  std::vector<SimPoint> points;
  for (auto& [label, overrides] : sections) {
    SimPoint point{label, {}};
    SimConfig& c = point.config;
    auto apply = [&](const std::string& key, const std::string& value) {
      if (key == "seed") c.seed = parse_count(value, key);
      else if (key == "groups") c.n_groups = parse_count(value, key);
      else if (key == "oeuvre_min") c.oeuvre_min = parse_count(value, key);
      else if (key == "oeuvre_max") c.oeuvre_max = parse_count(value, key);
      else if (key == "skew") c.skew = parse_skew_model(value);
      else if (key == "fields") c.n_fields = parse_count(value, key);
      else if (key == "spread") c.field_rate_spread = parse_double(value, key);
      else if (key == "papers_per_field") c.papers_per_field = parse_count(value, key);
      else if (key == "replicates") c.replicates = parse_count(value, key);
      else if (key == "threads") c.threads = static_cast<unsigned>(parse_count(value, key));
      else if (key == "scenario") {
        if (value == "random") c.scenario = Scenario::Random;
        else if (value == "adversarial") c.scenario = Scenario::Adversarial;
        else invalid("scenario must be random or adversarial");
      } else invalid("unknown key '" + key + "'");
    };
    for (const auto& [k, v] : defaults) apply(k, v);
    for (const auto& [k, v] : overrides) apply(k, v);
    c.validate();
    points.push_back(std::move(point));
  }
  return points;
}

PowerLawSampler::PowerLawSampler(const PowerLaw& model) {
  if (!(model.alpha > 1.0)) invalid("power-law alpha must be > 1");
  std::vector<double> pmf(model.max_count + 1);
  double total = 0;
  for (std::size_t k = 0; k < pmf.size(); ++k) total += pmf[k] = std::pow(double(k + 1), -model.alpha);

  cdf_.resize(pmf.size());
  double running = 0, second = 0;
  for (std::size_t k = 0; k < pmf.size(); ++k) {
    pmf[k] /= total;
    running += pmf[k];
    cdf_[k] = running;
    mean_ += double(k) * pmf[k];
    second += double(k) * double(k) * pmf[k];
  }
  cdf_.back() = 1.0;
  variance_ = second - mean_ * mean_;
}

std::uint64_t PowerLawSampler::operator()(std::mt19937_64& rng) const {
  const double u = unit(rng);
  return static_cast<std::uint64_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
}

World generate_corpus(const SimConfig& config, std::size_t replicate) {
  config.validate();
  if (config.scenario == Scenario::Adversarial)
    return adversarial_world(static_cast<std::uint64_t>(config.field_rate_spread));

  std::seed_seq seq{static_cast<std::uint32_t>(config.seed), static_cast<std::uint32_t>(config.seed >> 32),
                    static_cast<std::uint32_t>(replicate), static_cast<std::uint32_t>(replicate >> 32)};
  std::mt19937_64 rng(seq);

  std::optional<PowerLawSampler> power;
  if (const auto* p = std::get_if<PowerLaw>(&config.skew)) power.emplace(*p);
  auto draw = [&]() -> double {
    if (power) return double((*power)(rng));
    if (const auto* l = std::get_if<Lognormal>(&config.skew))
      return std::exp(std::normal_distribution<double>(l->mu, l->sigma)(rng));
    return double(pick(rng, 0, std::get<Uniform>(config.skew).max));
  };

  World world;
  std::vector<Publication> pubs;
  pubs.reserve(config.n_fields * config.papers_per_field);
  for (std::size_t f = 0; f < config.n_fields; ++f) {
    const std::string field = fmt::format("F{:02}", f);
    world.map.add("J-" + field, JournalKind::Specialist, {field});
    const double scale = config.n_fields > 1
                             ? std::pow(config.field_rate_spread, double(f) / double(config.n_fields - 1))
                             : 1.0;
    for (std::size_t i = 0; i < config.papers_per_field; ++i) {
      const double c = std::round(scale * draw());
      pubs.push_back({fmt::format("{}-{:06}", field, i), "J-" + field, 2000, DocType::Article,
                      static_cast<std::uint64_t>(std::max(0.0, c)), {}});
    }
  }

  for (std::size_t g = 0; g < config.n_groups; ++g) {
    const auto size = pick(rng, config.oeuvre_min, config.oeuvre_max);
    std::set<std::size_t> chosen;
    while (chosen.size() < size) {
      const auto field = pick(rng, 0, config.n_fields - 1);
      const auto paper = pick(rng, 0, config.papers_per_field - 1);
      chosen.insert(field * config.papers_per_field + paper);
    }
    Oeuvre oeuvre{fmt::format("G{:04}", g), {}};
    for (auto index : chosen) oeuvre.publication_ids.push_back(pubs[index].id);
    std::sort(oeuvre.publication_ids.begin(), oeuvre.publication_ids.end());
    world.oeuvres.push_back(std::move(oeuvre));
  }
  world.corpus = freeze(Corpus(std::move(pubs), CitationWindow{}));
  return world;
}

World adversarial_world(std::uint64_t spread) {
  if (spread < 1) invalid("adversarial spread must be >= 1");
  World world;
  world.map.add("J-LOW", JournalKind::Specialist, {"LOW"});
  world.map.add("J-HIGH", JournalKind::Specialist, {"HIGH"});

  std::vector<Publication> pubs;
  // LOW: `spread` papers, `spread` citations in total -> rate 1.
  pubs.push_back({"LOW-0", "J-LOW", 2000, DocType::Article, spread, {}});
  for (std::uint64_t i = 1; i < spread; ++i)
    pubs.push_back({fmt::format("LOW-{}", i), "J-LOW", 2000, DocType::Article, 0, {}});
  // HIGH: two papers, 2 * spread citations -> rate spread.
  pubs.push_back({"HIGH-0", "J-HIGH", 2000, DocType::Article, 1, {}});
  pubs.push_back({"HIGH-1", "J-HIGH", 2000, DocType::Article, 2 * spread - 1, {}});

  world.oeuvres.push_back({"ADVERSARIAL", {"HIGH-0", "LOW-0"}});
  world.corpus = freeze(Corpus(std::move(pubs), CitationWindow{}));
  return world;
}

std::vector<DivergenceRecord> divergence_of(const World& world, const std::string& label,
                                            std::size_t replicate, std::size_t* undefined) {
  const Classification classification = classify_corpus(world.corpus, world.map, {});
  const BaselineTable table = build_baselines(world.corpus, classification.assignments);
  const ScoringInputs inputs{world.corpus, classification.assignments, table};

  std::vector<DivergenceRecord> records;
  for (const auto& oeuvre : world.oeuvres) {
    const OeuvreScore s = score(oeuvre, inputs);
    if (!s.averaged.value) {
      if (undefined) ++*undefined;
      continue;
    }
    const Rational& g = s.globalized.value;
    const Rational& a = *s.averaged.value;
    records.push_back({label, replicate, oeuvre.group_id, g, a, a - g});
  }
  return records;
}

DivergenceSummary summarize(std::string label, const std::vector<DivergenceRecord>& records,
                            std::size_t undefined_averaged) {
  DivergenceSummary s;
  s.label = std::move(label);
  s.records = records.size();
  s.undefined_averaged = undefined_averaged;
  if (records.empty()) return s;

  std::vector<double> deltas;
  std::size_t above = 0;
  for (const auto& r : records) {
    deltas.push_back(to_double(r.delta));
    if (abs(r.delta) > s.max_abs_delta) s.max_abs_delta = abs(r.delta);
    if (r.delta > 0) ++above;
  }
  double sum = 0;
  for (double d : deltas) sum += d;
  s.mean_delta = sum / double(deltas.size());
  std::sort(deltas.begin(), deltas.end());
  const std::size_t mid = deltas.size() / 2;
  s.median_delta = deltas.size() % 2 ? deltas[mid] : (deltas[mid - 1] + deltas[mid]) / 2;
  s.fraction_averaged_above = double(above) / double(records.size());
  return s;
}

DivergenceStats run_divergence(const SimConfig& config, std::string label) {
  config.validate();

  struct ReplicateResult {
    std::vector<DivergenceRecord> records;
    std::size_t undefined = 0;
  };
  auto run_one = [&](std::size_t replicate) {
    ReplicateResult r;
    r.records = divergence_of(generate_corpus(config, replicate), label, replicate, &r.undefined);
    return r;
  };

  std::vector<ReplicateResult> results(config.replicates);
  if (config.threads <= 1) {
    for (std::size_t i = 0; i < config.replicates; ++i) results[i] = run_one(i);
  } else {
    for (std::size_t begin = 0; begin < config.replicates; begin += config.threads) {
      std::vector<std::future<ReplicateResult>> batch;
      const std::size_t end = std::min(config.replicates, begin + config.threads);
      for (std::size_t i = begin; i < end; ++i) batch.push_back(std::async(std::launch::async, run_one, i));
      for (std::size_t i = begin; i < end; ++i) results[i] = batch[i - begin].get();
    }
  }

  DivergenceStats stats;
  std::size_t undefined = 0;
  for (auto& r : results) {
    undefined += r.undefined;
    std::move(r.records.begin(), r.records.end(), std::back_inserter(stats.records));
  }
  stats.summary = summarize(std::move(label), stats.records, undefined);
  return stats;
}

void write_records(std::ostream& out, const std::vector<DivergenceRecord>& records) {
  out << "point\treplicate\tgroup\tG\tA\tdelta\tA_over_G\n";
  for (const auto& r : records) {
    out << r.label << '\t' << r.replicate << '\t' << r.group_id << '\t' << to_fixed(r.globalized) << '\t'
        << to_fixed(r.averaged) << '\t' << to_fixed(r.delta) << '\t'
        << (r.globalized > 0 ? to_fixed(r.averaged / r.globalized) : std::string()) << '\n';
  }
}

void write_summaries(std::ostream& out, const std::vector<DivergenceSummary>& summaries) {
  out << "point\trecords\tundefined_averaged\tmean_delta\tmedian_delta\tmax_abs_delta\t"
         "fraction_averaged_above\n";
  for (const auto& s : summaries)
    out << fmt::format("{}\t{}\t{}\t{:.12f}\t{:.12f}\t{}\t{:.12f}\n", s.label, s.records,
                       s.undefined_averaged, s.mean_delta, s.median_delta, to_fixed(s.max_abs_delta),
                       s.fraction_averaged_above);
}

}  // namespace fieldnorm::sim
