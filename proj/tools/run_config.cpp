#include "run_config.hpp"

#include "fieldnorm/error.hpp"
#include "fieldnorm/text.hpp"

#include <fstream>
#include <istream>

namespace fieldnorm::cli {

namespace {

[[noreturn]] void bad(const std::string& detail) { throw Error("malformed config", detail); }

template <typename T>
void take(std::optional<T>& mine, const std::optional<T>& theirs) {
  if (theirs) mine = theirs;
}

std::int64_t integer(const std::string& key, const std::string& value) {
  const auto v = text::parse_int(value);
  if (!v) bad(key + ": expected an integer, got '" + value + "'");
  return *v;
}

}  // namespace

void RunConfig::merge(const RunConfig& o) {
  take(corpus, o.corpus);
  take(categories, o.categories);
  take(oeuvre, o.oeuvre);
  take(output, o.output);
  take(baseline, o.baseline);
  take(report, o.report);
  take(sim_config, o.sim_config);
  take(group, o.group);
  take(citable, o.citable);
  take(min_refs, o.min_refs);
  take(min_share, o.min_share);
  take(zero_over_zero, o.zero_over_zero);
  take(window, o.window);
  take(delimiter, o.delimiter);
  take(year_min, o.year_min);
  take(year_max, o.year_max);
  take(threads, o.threads);
}

char RunConfig::delimiter_char() const {
  const std::string d = delimiter.value_or("tab");
  if (d == "tab" || d == "\\t") return '\t';
  if (d == "comma") return ',';
  if (d == "semicolon") bad("delimiter ';' is reserved for list columns");
  if (d.size() == 1 && d != ";") return d.front();
  bad("unsupported delimiter '" + d + "'");
}

IngestOptions RunConfig::ingest_options() const {
  IngestOptions o;
  if (window) o.window = CitationWindow::parse(*window);
  if (year_min) o.years.first = *year_min;
  if (year_max) o.years.last = *year_max;
  if (o.years.first > o.years.last) bad("year_min > year_max");
  o.delimiter = delimiter_char();
  return o;
}

NormalizationScope RunConfig::scope() const {
  NormalizationScope s;
  if (!citable) return s;
  s.citable.clear();
  for (auto token : text::split(*citable, ',')) {
    const auto type = parse_doc_type(text::trim(token));
    if (!type) bad("citable: unknown doc_type '" + std::string(token) + "'");
    s.citable.insert(*type);
  }
  if (s.citable.empty()) bad("citable: empty set");
  return s;
}

ReclassifyParams RunConfig::reclassify_params() const {
  ReclassifyParams p;
  if (min_refs) p.min_refs = *min_refs;
  if (min_share) {
    try {
      p.min_share = parse_decimal(*min_share);
    } catch (const Error&) {
      bad("min_share: not a decimal '" + *min_share + "'");
    }
    if (p.min_share < 0 || p.min_share > 1) bad("min_share must lie in [0, 1]");
  }
  return p;
}

ZeroConventions RunConfig::conventions() const {
  const std::string z = zero_over_zero.value_or("one");
  if (z == "one") return {true};
  if (z == "exclude") return {false};
  bad("zero_over_zero must be 'one' or 'exclude'");
}

RunConfig read_run_config(std::istream& in) {
  RunConfig c;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = text::trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) bad("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(text::trim(view.substr(0, eq)));
    const std::string value(text::trim(view.substr(eq + 1)));

    if (key == "corpus") c.corpus = value;
    else if (key == "categories") c.categories = value;
    else if (key == "oeuvre") c.oeuvre = value;
    else if (key == "output") c.output = value;
    else if (key == "baseline") c.baseline = value;
    else if (key == "report") c.report = value;
    else if (key == "sim_config") c.sim_config = value;
    else if (key == "group") c.group = value;
    else if (key == "citable") c.citable = value;
    else if (key == "min_refs") {
      const auto v = integer(key, value);
      if (v < 0) bad("min_refs must be >= 0");
      c.min_refs = static_cast<std::uint64_t>(v);
    } else if (key == "min_share") c.min_share = value;
    else if (key == "zero_over_zero") c.zero_over_zero = value;
    else if (key == "window") c.window = value;
    else if (key == "delimiter") c.delimiter = value;
    else if (key == "year_min") c.year_min = static_cast<int>(integer(key, value));
    else if (key == "year_max") c.year_max = static_cast<int>(integer(key, value));
    else if (key == "threads") {
      const auto v = integer(key, value);
      if (v < 1) bad("threads must be >= 1");
      c.threads = static_cast<unsigned>(v);
    } else bad("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return c;
}

RunConfig read_run_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("missing input file", path.string());
  RunConfig c = read_run_config(in);
  // Relative paths in a config file are relative to the file itself.
  const auto base = path.parent_path();
  for (auto* p : {&c.corpus, &c.categories, &c.oeuvre, &c.output, &c.baseline, &c.report, &c.sim_config})
    if (*p && p->value().is_relative()) *p = base / p->value();
  return c;
}

}  // namespace fieldnorm::cli
