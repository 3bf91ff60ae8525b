#include "fieldnorm/report.hpp"

#include "fieldnorm/digest.hpp"
#include "fieldnorm/error.hpp"
#include "fieldnorm/text.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <set>

namespace fieldnorm {

using json = nlohmann::ordered_json;

CorpusSummary summarize_corpus(const Corpus& corpus, const Classification& classification,
                               const BaselineTable& table) {
  CorpusSummary s;
  s.publications = corpus.size();
  s.citable = static_cast<std::size_t>(
      std::count_if(corpus.publications().begin(), corpus.publications().end(),
                    [&](const Publication& p) { return table.scope().is_citable(p.doc_type); }));
  s.journal_categories = classification.coverage.journal_categories;
  s.reference_analysis = classification.coverage.reference_analysis;
  s.unclassified = classification.coverage.unclassified;
  s.baseline_papers = table.in_scope_papers();
  s.baseline_cells = table.cells().size();
  s.sparse_cells = table.sparse_cells();
  return s;
}

std::string default_caveat() {
  return "Citation indicators condense one kind of evidence about research and should be read "
         "together with expert knowledge of the field and the context of the assessment. Every "
         "publication, citation count and expected rate behind the figures is listed below so "
         "that the assessed group can check the underlying data and supply corrections or "
         "background information. Normalized ratios depend on the subject classification, "
         "document types and publication years that define the baselines; small oeuvres and "
         "sparse fields give unstable values. The figures are meant to inform discussion, not "
         "to be plugged into allocation or ranking formulas.";
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

namespace {

json optional_fixed(const std::optional<Rational>& value) {
  return value ? json(to_fixed(*value)) : json(nullptr);
}

json summary_json(const CorpusSummary& s) {
  return {{"publications", s.publications},
          {"citable", s.citable},
          {"journal_categories", s.journal_categories},
          {"reference_analysis", s.reference_analysis},
          {"unclassified", s.unclassified},
          {"baseline_papers", s.baseline_papers},
          {"baseline_cells", s.baseline_cells},
          {"sparse_cells", s.sparse_cells}};
}

}  // namespace

ReportBundle render(const OeuvreScore& score, const ReportMeta& meta) {
  if (text::trim(meta.caveat).empty()) throw Error("invalid report", "caveat text is empty");

  json doc;
  doc["format"] = kReportFormat;
  doc["generated_at"] = meta.generated_at;
  doc["digest_algorithm"] = kDigestAlgorithm;
  doc["input_digests"] = json::object();
  for (const auto& [name, digest] : meta.input_digests) doc["input_digests"][name] = digest;
  doc["caveat"] = meta.caveat;
  doc["baseline_fingerprint"] = score.baseline_fingerprint;

  json citable = json::array();
  for (DocType t : meta.scope.citable) citable.push_back(to_string(t));
  doc["parameters"] = {{"citable", citable},
                       {"min_refs", meta.params.min_refs},
                       {"min_share", to_exact(meta.params.min_share)},
                       {"zero_over_zero_is_one", meta.conventions.zero_over_zero_is_one},
                       {"citation_window", meta.window.to_string()},
                       {"own_papers_in_baselines", true}};
  doc["corpus_summary"] = summary_json(meta.summary);
  doc["oeuvre"] = {{"group_id", score.group_id}, {"size", score.oeuvre_size}};
  doc["indicators"] = {{"n_scored", score.n_scored},
                       {"n_averaged", score.averaged.contributing},
                       {"zero_over_zero", score.averaged.zero_over_zero},
                       {"zero_expected", score.averaged.zero_expected},
                       {"sum_citations", score.sum_citations},
                       {"sum_expected", to_fixed(score.sum_expected)},
                       {"globalized", to_fixed(score.globalized.value)},
                       {"globalized_flag", score.globalized.zero_over_zero ? kFlagZeroOverZero : ""},
                       {"averaged", optional_fixed(score.averaged.value)}};

  doc["breakdown"] = json::array();
  for (const auto& [category, f] : score.breakdown)
    doc["breakdown"].push_back({{"category", category},
                                {"weight", to_fixed(f.weight)},
                                {"citations", to_fixed(f.citations)},
                                {"expected", to_fixed(f.expected)},
                                {"globalized", optional_fixed(f.globalized)},
                                {"averaged", optional_fixed(f.averaged)},
                                {"flag", f.flag}});

  doc["trace"] = json::array();
  for (const auto& t : score.trace) {
    json weights = json::object();
    for (const auto& [category, w] : t.weights) weights[category] = to_fixed(w);
    doc["trace"].push_back({{"id", t.id},
                            {"citations", t.citations},
                            {"expected", to_fixed(t.expected)},
                            {"ratio", optional_fixed(t.ratio)},
                            {"flag", t.flag},
                            {"method", to_string(t.method)},
                            {"weights", weights}});
  }

  doc["excluded"] = json::array();
  for (const auto& e : score.excluded) doc["excluded"].push_back({{"id", e.id}, {"reason", e.reason}});

  return ReportBundle(std::move(doc));
}

ReportBundle parse_report(std::string_view machine_text) {
  json doc;
  try {
    doc = json::parse(machine_text);
  } catch (const json::parse_error& e) {
    throw Error("malformed report", e.what());
  }
  if (!doc.is_object() || doc.value("format", "") != kReportFormat)
    throw Error("malformed report", "unknown format");
  for (const char* key : {"baseline_fingerprint", "parameters", "corpus_summary", "oeuvre",
                          "indicators", "breakdown", "trace", "excluded", "caveat"})
    if (!doc.contains(key)) throw Error("malformed report", std::string("missing ") + key);
  ReportBundle bundle(std::move(doc));
  try {
    (void)bundle.params();
    (void)bundle.scope();
    (void)bundle.conventions();
    (void)bundle.oeuvre_ids();
    (void)bundle.group_id();
  } catch (const json::exception& e) {
    throw Error("malformed report", e.what());
  }
  return bundle;
}

std::string ReportBundle::machine() const { return document_.dump(2) + "\n"; }

std::string ReportBundle::group_id() const {
  return document_.at("oeuvre").at("group_id").get<std::string>();
}

std::string ReportBundle::baseline_fingerprint() const {
  return document_.at("baseline_fingerprint").get<std::string>();
}

std::vector<std::string> ReportBundle::oeuvre_ids() const {
  std::set<std::string> ids;
  for (const auto& t : document_.at("trace")) ids.insert(t.at("id").get<std::string>());
  for (const auto& e : document_.at("excluded")) ids.insert(e.at("id").get<std::string>());
  return {ids.begin(), ids.end()};
}

std::map<std::string, std::string> ReportBundle::input_digests() const {
  std::map<std::string, std::string> out;
  if (document_.contains("input_digests"))
    for (const auto& [name, digest] : document_.at("input_digests").items())
      out[name] = digest.get<std::string>();
  return out;
}

ReclassifyParams ReportBundle::params() const {
  const auto& p = document_.at("parameters");
  return {p.at("min_refs").get<std::uint64_t>(), parse_exact(p.at("min_share").get<std::string>())};
}

NormalizationScope ReportBundle::scope() const {
  NormalizationScope scope;
  scope.citable.clear();
  for (const auto& t : document_.at("parameters").at("citable")) {
    const auto type = parse_doc_type(t.get<std::string>());
    if (!type) throw Error("malformed report", "unknown doc_type in parameters.citable");
    scope.citable.insert(*type);
  }
  return scope;
}

ZeroConventions ReportBundle::conventions() const {
  return {document_.at("parameters").at("zero_over_zero_is_one").get<bool>()};
}

// ---------------------------------------------------------------------------
// Human rendering

namespace {

std::string scalar(const json& v) {
  if (v.is_null()) return "undefined";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "yes" : "no";
  return v.dump();
}

// Emits a line as-is when it fits; otherwise wraps with a hanging indent.
void emit(std::string& out, const std::string& line) {
  if (line.size() <= kHumanReportWidth) {
    out += line + "\n";
    return;
  }
  const std::size_t indent = std::min<std::size_t>(line.find_first_not_of(' '), 8);
  const auto pieces = text::wrap(line, kHumanReportWidth - indent - 4);
  for (std::size_t i = 0; i < pieces.size(); ++i)
    out += std::string(i ? indent + 4 : indent, ' ') + pieces[i] + "\n";
}

// Aligned table; falls back to one "header: value" line per cell when a row
// would not fit the report width.
void table(std::string& out, const std::vector<std::string>& headers,
           const std::vector<std::vector<std::string>>& rows, const std::vector<bool>& right_align) {
  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    width[c] = headers[c].size();
    for (const auto& row : rows) width[c] = std::max(width[c], row[c].size());
  }
  std::size_t total = 2;
  for (auto w : width) total += w + 2;

  if (total - 2 > kHumanReportWidth) {
    std::size_t label = 0;
    for (const auto& h : headers) label = std::max(label, h.size());
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < headers.size(); ++c) {
        emit(out, fmt::format("  {:<{}}  {}", headers[c], label, row[c]));
      }
      out += "\n";
    }
    return;
  }

  auto emit = [&](const std::vector<std::string>& cells) {
    std::string line = " ";
    for (std::size_t c = 0; c < cells.size(); ++c)
      line += right_align[c] ? fmt::format(" {:>{}} ", cells[c], width[c])
                             : fmt::format(" {:<{}} ", cells[c], width[c]);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  };
  emit(headers);
  std::vector<std::string> rule;
  for (auto w : width) rule.emplace_back(w, '-');
  emit(rule);
  for (const auto& row : rows) emit(row);
}

void section(std::string& out, std::string_view title) {
  out += "\n";
  out += title;
  out += "\n";
  out += std::string(title.size(), '=');
  out += "\n";
}

void field(std::string& out, std::string_view label, std::string_view value) {
  emit(out, fmt::format("  {:<30}{}", label, value));
}

}  // namespace

std::string ReportBundle::human() const {
  const json& d = document_;
  std::string out;
  out += "FIELD-NORMALIZED CITATION IMPACT REPORT\n";
  out += std::string(39, '=') + "\n\n";
  for (const auto& line : text::wrap(d.at("caveat").get<std::string>(), kHumanReportWidth))
    out += line + "\n";

  section(out, "Assessment");
  field(out, "group", scalar(d.at("oeuvre").at("group_id")));
  field(out, "generated at", scalar(d.at("generated_at")));
  out += "  baseline fingerprint\n";
  emit(out, "    " + scalar(d.at("baseline_fingerprint")));
  out += "  input digests (" + scalar(d.at("digest_algorithm")) + ")\n";
  for (const auto& [name, digest] : d.at("input_digests").items())
    emit(out, fmt::format("    {:<12}{}", name, scalar(digest)));

  section(out, "Parameters");
  const auto& p = d.at("parameters");
  std::vector<std::string> citable;
  for (const auto& t : p.at("citable")) citable.push_back(t.get<std::string>());
  field(out, "citable document types", text::join(citable, ", "));
  field(out, "reference analysis min_refs", scalar(p.at("min_refs")));
  field(out, "reference analysis min_share", scalar(p.at("min_share")));
  field(out, "0/0 counted as ratio 1", scalar(p.at("zero_over_zero_is_one")));
  field(out, "citation window", scalar(p.at("citation_window")));
  field(out, "group's papers in baselines",
        p.value("own_papers_in_baselines", true) ? "included" : "excluded");

  section(out, "Baseline universe");
  const auto& s = d.at("corpus_summary");
  field(out, "publications", scalar(s.at("publications")));
  field(out, "citable publications", scalar(s.at("citable")));
  field(out, "classified by journal", scalar(s.at("journal_categories")));
  field(out, "classified by references", scalar(s.at("reference_analysis")));
  field(out, "unclassified", scalar(s.at("unclassified")));
  field(out, "papers in baselines", scalar(s.at("baseline_papers")));
  field(out, "baseline cells", scalar(s.at("baseline_cells")));
  field(out, "cells with weight below 1", scalar(s.at("sparse_cells")));

  section(out, "Indicators");
  const auto& ind = d.at("indicators");
  field(out, "papers in oeuvre", scalar(d.at("oeuvre").at("size")));
  field(out, "papers scored", scalar(ind.at("n_scored")));
  field(out, "papers excluded", std::to_string(d.at("excluded").size()));
  field(out, "sum of citations", scalar(ind.at("sum_citations")));
  field(out, "sum of expected citations", scalar(ind.at("sum_expected")));
  std::string g = scalar(ind.at("globalized"));
  if (!ind.at("globalized_flag").get<std::string>().empty())
    g += "  [" + ind.at("globalized_flag").get<std::string>() + "]";
  field(out, "globalized (sum c / sum e)", g);
  field(out, "averaged (mean of c / e)", scalar(ind.at("averaged")));
  field(out, "papers in averaged ratio", scalar(ind.at("n_averaged")));
  field(out, "  of which 0/0 taken as 1", scalar(ind.at("zero_over_zero")));
  field(out, "left out: zero expected", scalar(ind.at("zero_expected")));

  section(out, "Per-field breakdown");
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& f : d.at("breakdown")) {
      std::string gc = scalar(f.at("globalized"));
      if (!f.at("flag").get<std::string>().empty()) gc += " *";
      rows.push_back({scalar(f.at("category")), scalar(f.at("weight")), scalar(f.at("citations")),
                      scalar(f.at("expected")), gc, scalar(f.at("averaged"))});
    }
    table(out, {"category", "weight", "citations", "expected", "globalized", "averaged"}, rows,
          {false, true, true, true, true, true});
  }

  section(out, "Per-paper trace (sorted by publication id)");
  {
    std::vector<std::vector<std::string>> rows;
    for (const auto& t : d.at("trace"))
      rows.push_back({scalar(t.at("id")), scalar(t.at("citations")), scalar(t.at("expected")),
                      scalar(t.at("ratio")), scalar(t.at("flag"))});
    table(out, {"id", "c", "e", "c/e", "flag"}, rows, {false, true, true, true, false});
    out += "\n  Category weights\n";
    for (const auto& t : d.at("trace")) {
      std::vector<std::string> parts;
      for (const auto& [category, w] : t.at("weights").items()) parts.push_back(category + " " + scalar(w));
      emit(out, fmt::format("  {}  {}: {}", scalar(t.at("id")), scalar(t.at("method")),
                            text::join(parts, ", ")));
    }
  }

  section(out, "Exclusions");
  if (d.at("excluded").empty()) out += "  none\n";
  for (const auto& e : d.at("excluded")) {
    emit(out, fmt::format("  {}  {}", scalar(e.at("id")), scalar(e.at("reason"))));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

struct Mismatch {
  std::string field;
  std::string detail;
};

std::optional<std::string> element_key(const json& element) {
  if (!element.is_object()) return std::nullopt;
  for (const char* key : {"id", "category"})
    if (element.contains(key) && element.at(key).is_string()) return element.at(key).get<std::string>();
  return std::nullopt;
}

std::optional<Mismatch> diff(const json& reported, const json& recomputed, const std::string& path);

std::optional<Mismatch> diff_keyed_arrays(const json& reported, const json& recomputed,
                                          const std::string& path) {
  std::map<std::string, const json*> got;
  for (const auto& e : reported) {
    const auto key = element_key(e);
    if (!key) return Mismatch{path, "entry without id"};
    if (!got.emplace(*key, &e).second) return Mismatch{path + "[" + *key + "]", "duplicate entry"};
  }
  for (const auto& e : recomputed) {
    const std::string key = *element_key(e);
    const std::string here = path + "[" + key + "]";
    const auto it = got.find(key);
    if (it == got.end()) return Mismatch{here, "missing from report"};
    if (auto m = diff(*it->second, e, here)) return m;
    got.erase(it);
  }
  if (!got.empty()) return Mismatch{path + "[" + got.begin()->first + "]", "not in recomputation"};
  return std::nullopt;
}

std::optional<Mismatch> diff(const json& reported, const json& recomputed, const std::string& path) {
  if (recomputed.is_object()) {
    if (!reported.is_object()) return Mismatch{path, "expected an object"};
    for (const auto& [key, value] : recomputed.items()) {
      const std::string here = path.empty() ? key : path + "." + key;
      if (!reported.contains(key)) return Mismatch{here, "missing from report"};
      if (auto m = diff(reported.at(key), value, here)) return m;
    }
    for (const auto& [key, value] : reported.items())
      if (!recomputed.contains(key)) return Mismatch{path.empty() ? key : path + "." + key, "unexpected field"};
    return std::nullopt;
  }
  if (recomputed.is_array()) {
    if (!reported.is_array()) return Mismatch{path, "expected an array"};
    const bool keyed = !recomputed.empty() && element_key(recomputed.front()).has_value();
    if (keyed || (!reported.empty() && element_key(reported.front())))
      return diff_keyed_arrays(reported, recomputed, path);
    if (reported.size() != recomputed.size()) return Mismatch{path, "length differs"};
    for (std::size_t i = 0; i < recomputed.size(); ++i)
      if (auto m = diff(reported[i], recomputed[i], path + "[" + std::to_string(i) + "]")) return m;
    return std::nullopt;
  }
  if (reported != recomputed)
    return Mismatch{path, "report has " + reported.dump() + ", recomputed " + recomputed.dump()};
  return std::nullopt;
}

}  // namespace

VerificationResult verify_bundle(const ReportBundle& bundle, const Corpus& corpus,
                                 const CategoryMap& map, const BaselineTable& table) {
  try {
    const ReclassifyParams params = bundle.params();
    const NormalizationScope scope = bundle.scope();
    const Classification classification = classify_corpus(corpus, map, params);
    const std::string fingerprint = corpus_fingerprint(corpus, classification.assignments, scope);
    if (fingerprint != bundle.baseline_fingerprint() || table.fingerprint() != fingerprint)
      return {false, "baseline_fingerprint", "baseline universe changed"};

    const auto selection = select_oeuvre(corpus, bundle.group_id(), bundle.oeuvre_ids());
    const ScoringInputs inputs{corpus, classification.assignments, table, bundle.conventions()};
    const OeuvreScore recomputed = score(selection.oeuvre, inputs);

    ReportMeta meta;
    const json& doc = bundle.document();
    meta.caveat = doc.at("caveat").get<std::string>();
    meta.generated_at = doc.value("generated_at", "");
    meta.input_digests = bundle.input_digests();
    meta.params = params;
    meta.scope = scope;
    meta.conventions = inputs.conventions;
    meta.window = corpus.window();
    meta.summary = summarize_corpus(corpus, classification, table);
    const ReportBundle expected = render(recomputed, meta);

    if (auto m = diff(doc, expected.document(), "")) return {false, m->field, m->detail};
    return {true, {}, {}};
  } catch (const Error& e) {
    return {false, "report", e.what()};
  } catch (const json::exception& e) {
    return {false, "report", std::string("malformed report: ") + e.what()};
  }
}

}  // namespace fieldnorm
