#include "commands.hpp"

#include "run_config.hpp"

#include "fieldnorm/baseline.hpp"
#include "fieldnorm/classify.hpp"
#include "fieldnorm/corpus.hpp"
#include "fieldnorm/digest.hpp"
#include "fieldnorm/error.hpp"
#include "fieldnorm/indicators.hpp"
#include "fieldnorm/report.hpp"
#include "fieldnorm/simulate.hpp"
#include "fieldnorm/text.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace fieldnorm::cli {

namespace fs = std::filesystem;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Context {
  RunConfig config;
  bool quiet = false;
  std::ostream& out;
  std::ostream& err;

  void info(const std::string& line) const {
    if (!quiet) out << line << '\n';
  }
  void warn(const std::string& line) const {
    if (!quiet) err << "warning: " << line << '\n';
  }
};

const fs::path& require(const std::optional<fs::path>& path, const char* flag) {
  if (!path) throw UsageError(std::string("missing required --") + flag);
  return *path;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << content)) throw Error("io error", "cannot write " + path.string());
}

template <typename Writer>
void write_with(const fs::path& path, Writer&& writer) {
  std::ostringstream buffer;
  writer(buffer);
  write_file(path, buffer.str());
}

IngestResult load_corpus(const Context& ctx, std::optional<CitationWindow> window = std::nullopt) {
  IngestOptions options = ctx.config.ingest_options();
  if (window) options.window = *window;
  IngestResult result = ingest_file(require(ctx.config.corpus, "corpus"), options);
  result.corpus = freeze(std::move(result.corpus));
  if (!result.rejected.empty())
    ctx.warn(std::to_string(result.rejected.size()) + " publication rows rejected (first: line " +
             std::to_string(result.rejected.front().line) + ", " + result.rejected.front().reason + ")");
  return result;
}

struct Pipeline {
  Corpus corpus;
  CategoryMap map;
  Classification classification;
  BaselineTable table;
};

Pipeline load_pipeline(const Context& ctx, const ReclassifyParams& params, const NormalizationScope& scope,
                       std::optional<CitationWindow> window = std::nullopt) {
  Pipeline p;
  p.corpus = load_corpus(ctx, window).corpus;
  p.map = CategoryMap::read_file(require(ctx.config.categories, "categories"), ctx.config.delimiter_char());
  p.classification = classify_corpus(p.corpus, p.map, params, ctx.config.threads.value_or(1));
  p.table = build_baselines(p.corpus, p.classification.assignments, scope);
  return p;
}

int cmd_ingest(const Context& ctx) {
  const IngestResult result = load_corpus(ctx);
  const fs::path dir = ctx.config.output_dir();
  const char delimiter = ctx.config.delimiter_char();
  write_with(dir / "corpus.tsv", [&](std::ostream& o) { write_corpus(o, result.corpus, delimiter); });
  write_with(dir / "rejections.tsv", [&](std::ostream& o) { write_rejections(o, result.rejected); });
  ctx.info("ingested " + std::to_string(result.corpus.size()) + " publications, rejected " +
           std::to_string(result.rejected.size()) + " rows, window " + result.corpus.window().to_string());
  return kOk;
}

int cmd_classify(const Context& ctx) {
  const Corpus corpus = load_corpus(ctx).corpus;
  const CategoryMap map =
      CategoryMap::read_file(require(ctx.config.categories, "categories"), ctx.config.delimiter_char());
  const Classification c =
      classify_corpus(corpus, map, ctx.config.reclassify_params(), ctx.config.threads.value_or(1));
  const fs::path dir = ctx.config.output_dir();
  write_with(dir / "assignments.tsv", [&](std::ostream& o) { write_assignments(o, c.assignments); });
  write_with(dir / "coverage.tsv", [&](std::ostream& o) { write_coverage(o, c.coverage); });
  for (const auto& id : c.coverage.unclassified_ids)
    ctx.warn("unclassified " + id + ": " + c.assignments.find(id)->note);
  ctx.info("classified " + std::to_string(corpus.size()) + " publications: " +
           std::to_string(c.coverage.journal_categories) + " by journal, " +
           std::to_string(c.coverage.reference_analysis) + " by references, " +
           std::to_string(c.coverage.unclassified) + " unclassified");
  return kOk;
}

int cmd_baseline(const Context& ctx) {
  const Pipeline p = load_pipeline(ctx, ctx.config.reclassify_params(), ctx.config.scope());
  write_with(ctx.config.output_dir() / "baselines.tsv", [&](std::ostream& o) { write_baselines(o, p.table); });
  ctx.info("built " + std::to_string(p.table.cells().size()) + " cells from " +
           std::to_string(p.table.in_scope_papers()) + " papers; fingerprint " + p.table.fingerprint());
  return kOk;
}

int cmd_score(const Context& ctx) {
  const RunConfig& cfg = ctx.config;
  const fs::path& oeuvre_path = require(cfg.oeuvre, "oeuvre");
  const Pipeline p = load_pipeline(ctx, cfg.reclassify_params(), cfg.scope());

  if (cfg.baseline) {
    std::ifstream in(*cfg.baseline);
    if (!in) throw Error("missing input file", cfg.baseline->string());
    const std::string recorded = read_baseline_fingerprint(in);
    if (recorded != p.table.fingerprint())
      throw Error("baseline universe changed", cfg.baseline->string() + " has " + recorded);
  }

  std::ifstream oeuvre_in(oeuvre_path);
  if (!oeuvre_in) throw Error("missing input file", oeuvre_path.string());
  const auto ids = read_oeuvre_ids(oeuvre_in);
  const std::string group = cfg.group.value_or(oeuvre_path.stem().string());
  const OeuvreSelection selection = select_oeuvre(p.corpus, group, ids);
  for (const auto& id : selection.unresolved) ctx.warn("oeuvre id not in corpus: " + id);

  const ScoringInputs inputs{p.corpus, p.classification.assignments, p.table, cfg.conventions()};
  const OeuvreScore s = score(selection.oeuvre, inputs);

  ReportMeta meta;
  meta.generated_at = utc_timestamp();
  meta.input_digests = {{"categories", sha256_file(*cfg.categories)},
                        {"corpus", sha256_file(*cfg.corpus)},
                        {"oeuvre", sha256_file(oeuvre_path)}};
  meta.params = cfg.reclassify_params();
  meta.scope = cfg.scope();
  meta.conventions = inputs.conventions;
  meta.window = p.corpus.window();
  meta.summary = summarize_corpus(p.corpus, p.classification, p.table);
  const ReportBundle bundle = render(s, meta);

  const fs::path dir = cfg.output_dir();
  write_file(dir / "score.json", bundle.machine());
  write_file(dir / "score.txt", bundle.human());
  ctx.info("group " + group + ": G = " + to_fixed(s.globalized.value) + ", A = " +
           (s.averaged.value ? to_fixed(*s.averaged.value) : std::string("undefined")) + " (" +
           std::to_string(s.n_scored) + " scored, " + std::to_string(s.excluded.size()) + " excluded)");
  ctx.info("wrote " + (dir / "score.json").string() + " and " + (dir / "score.txt").string());
  return kOk;
}

int cmd_verify(const Context& ctx) {
  const RunConfig& cfg = ctx.config;
  const ReportBundle bundle = parse_report(text::read_file(require(cfg.report, "report")));
  const std::string window = bundle.document().at("parameters").at("citation_window").get<std::string>();
  const Pipeline p = load_pipeline(ctx, bundle.params(), bundle.scope(), CitationWindow::parse(window));

  VerificationResult result = verify_bundle(bundle, p.corpus, p.map, p.table);
  if (result) {
    const std::map<std::string, const std::optional<fs::path>*> inputs{
        {"corpus", &cfg.corpus}, {"categories", &cfg.categories}, {"oeuvre", &cfg.oeuvre}};
    for (const auto& [name, digest] : bundle.input_digests()) {
      const auto it = inputs.find(name);
      if (it == inputs.end() || !*it->second) continue;
      if (sha256_file(**it->second) != digest) {
        result = {false, "input_digests." + name, "file differs from the one scored"};
        break;
      }
    }
  }
  if (!result) throw Error("verification failed", result.field + ": " + result.detail);
  ctx.info("verification passed: " + bundle.group_id() + " (" + bundle.baseline_fingerprint() + ")");
  return kOk;
}

int cmd_report(const Context& ctx) {
  const ReportBundle bundle = parse_report(text::read_file(require(ctx.config.report, "report")));
  const fs::path path = ctx.config.output_dir() / "score.txt";
  write_file(path, bundle.human());
  ctx.info("wrote " + path.string());
  return kOk;
}

int cmd_simulate(const Context& ctx) {
  const fs::path& path = require(ctx.config.sim_config, "sim-config");
  std::ifstream in(path);
  if (!in) throw Error("missing input file", path.string());
  auto points = sim::read_sim_config(in);

  std::vector<sim::DivergenceRecord> records;
  std::vector<sim::DivergenceSummary> summaries;
  for (auto& point : points) {
    if (ctx.config.threads) point.config.threads = *ctx.config.threads;
    sim::DivergenceStats stats = sim::run_divergence(point.config, point.label);
    ctx.info(point.label + ": " + std::to_string(stats.summary.records) + " records, max |A-G| = " +
             to_fixed(stats.summary.max_abs_delta) + ", mean A-G = " + std::to_string(stats.summary.mean_delta));
    std::move(stats.records.begin(), stats.records.end(), std::back_inserter(records));
    summaries.push_back(std::move(stats.summary));
  }
  const fs::path dir = ctx.config.output_dir();
  write_with(dir / "divergence.tsv", [&](std::ostream& o) { sim::write_records(o, records); });
  write_with(dir / "divergence_summary.tsv", [&](std::ostream& o) { sim::write_summaries(o, summaries); });
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"fieldnorm: field-normalized citation impact indicators"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string output;
  bool quiet = false;
  RunConfig flags;
  std::string corpus, categories, oeuvre, baseline, report, sim_config;
  std::uint64_t min_refs = 0;
  int year_min = 0, year_max = 0;
  unsigned threads = 1;
  std::string group, citable, min_share, zero, window, delimiter;

  app.add_option("--config", config_path, "key = value config file; flags override it");
  app.add_option("--output", output, "output directory (default: out)");
  app.add_flag("--quiet", quiet, "suppress progress messages and warnings");
  std::vector<CLI::Option*> opts{
      app.add_option("--corpus", corpus, "publication file"),
      app.add_option("--categories", categories, "journal category map"),
      app.add_option("--oeuvre", oeuvre, "oeuvre id list"),
      app.add_option("--baseline", baseline, "baseline export to check against"),
      app.add_option("--report", report, "machine report (score.json)"),
      app.add_option("--sim-config", sim_config, "simulation config file"),
      app.add_option("--group", group, "group id (default: oeuvre file stem)"),
      app.add_option("--citable", citable, "comma-separated citable doc types"),
      app.add_option("--min-refs", min_refs, "reference analysis: minimum specialist references"),
      app.add_option("--min-share", min_share, "reference analysis: minimum category share"),
      app.add_option("--zero-over-zero", zero, "one | exclude"),
      app.add_option("--window", window, "citation window: open | fixed:N"),
      app.add_option("--delimiter", delimiter, "tab | comma | single character"),
      app.add_option("--year-min", year_min, "first accepted publication year"),
      app.add_option("--year-max", year_max, "last accepted publication year"),
      app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber),
  };

  using Handler = int (*)(const Context&);
  const std::vector<std::tuple<const char*, const char*, Handler>> commands{
      {"ingest", "validate a publication file", cmd_ingest},
      {"classify", "assign publications to categories", cmd_classify},
      {"baseline", "build expected citation rates per cell", cmd_baseline},
      {"score", "compute globalized and averaged ratios for an oeuvre", cmd_score},
      {"simulate", "run the divergence simulation", cmd_simulate},
      {"verify", "recompute a report from its inputs", cmd_verify},
      {"report", "render the human report from a machine report", cmd_report},
  };
  for (const auto& [name, description, handler] : commands) app.add_subcommand(name, description);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kUsage;
  }

  try {
    Context ctx{{}, quiet, out, err};
    if (!config_path.empty()) ctx.config = read_run_config_file(config_path);

    if (opts[0]->count()) flags.corpus = corpus;
    if (opts[1]->count()) flags.categories = categories;
    if (opts[2]->count()) flags.oeuvre = oeuvre;
    if (opts[3]->count()) flags.baseline = baseline;
    if (opts[4]->count()) flags.report = report;
    if (opts[5]->count()) flags.sim_config = sim_config;
    if (opts[6]->count()) flags.group = group;
    if (opts[7]->count()) flags.citable = citable;
    if (opts[8]->count()) flags.min_refs = min_refs;
    if (opts[9]->count()) flags.min_share = min_share;
    if (opts[10]->count()) flags.zero_over_zero = zero;
    if (opts[11]->count()) flags.window = window;
    if (opts[12]->count()) flags.delimiter = delimiter;
    if (opts[13]->count()) flags.year_min = year_min;
    if (opts[14]->count()) flags.year_max = year_max;
    if (opts[15]->count()) flags.threads = threads;
    if (!output.empty()) flags.output = output;
    ctx.config.merge(flags);

    for (const auto& [name, description, handler] : commands)
      if (app.got_subcommand(name)) return handler(ctx);
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: usage: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  } catch (const fs::filesystem_error& e) {
    err << "error: io error: " << e.what() << '\n';
    return kFailure;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace fieldnorm::cli
