#include "fieldnorm/corpus.hpp"

#include "fieldnorm/error.hpp"
#include "fieldnorm/text.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

namespace fieldnorm {

std::string_view to_string(DocType type) {
  switch (type) {
    case DocType::Article: return "Article";
    case DocType::Letter: return "Letter";
    case DocType::Review: return "Review";
    case DocType::Other: return "Other";
  }
  return "Other";
}

std::optional<DocType> parse_doc_type(std::string_view token) {
  for (DocType t : {DocType::Article, DocType::Letter, DocType::Review, DocType::Other})
    if (token == to_string(t)) return t;
  return std::nullopt;
}

CitationWindow CitationWindow::parse(std::string_view text) {
  if (text == "open") return {};
  if (text.starts_with("fixed:")) {
    const auto years = text::parse_int(text.substr(6));
    if (years && *years >= 1 && *years <= 1000) return {static_cast<int>(*years)};
  }
  throw Error("invalid config", "citation window must be 'open' or 'fixed:N', got '" +
                                    std::string(text) + "'");
}

std::string CitationWindow::to_string() const {
  return years ? "fixed:" + std::to_string(*years) : "open";
}

bool is_well_formed_journal_id(std::string_view id) {
  return !id.empty() && id.find_first_of(" \t\r\n;") == std::string_view::npos;
}

Corpus::Corpus(std::vector<Publication> publications, CitationWindow window)
    : publications_(std::move(publications)), window_(std::move(window)) {
  index_.reserve(publications_.size());
  for (std::size_t i = 0; i < publications_.size(); ++i)
    if (!index_.emplace(publications_[i].id, i).second)
      duplicate_ids_.push_back(publications_[i].id);
}

const Publication* Corpus::find(std::string_view id) const {
  const auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &publications_[it->second];
}

void Corpus::require_frozen() const {
  if (!frozen_) throw Error("corpus not frozen");
}

Corpus freeze(Corpus corpus) {
  if (corpus.frozen_) return corpus;
  if (!corpus.duplicate_ids_.empty()) throw Error("duplicate id", corpus.duplicate_ids_.front());
  for (const auto& p : corpus.publications_)
    if (p.id.empty() || !is_well_formed_journal_id(p.journal_id))
      throw Error("malformed publication", p.id.empty() ? "empty id" : p.id);
  corpus.frozen_ = true;
  return corpus;
}

namespace {

struct ParsedRow {
  std::optional<Publication> publication;
  std::string reason;
};

ParsedRow parse_row(std::string_view line, const IngestOptions& options) {
  const auto fields = text::split(line, options.delimiter);
  if (fields.size() != std::size(kPublicationHeader))
    return {std::nullopt, "wrong arity: expected 6 fields, got " + std::to_string(fields.size())};

  Publication p;
  p.id = std::string(fields[0]);
  if (p.id.empty()) return {std::nullopt, "empty id"};

  if (!is_well_formed_journal_id(fields[1])) return {std::nullopt, "malformed journal_id"};
  p.journal_id = std::string(fields[1]);

  const auto year = text::parse_int(fields[2]);
  if (!year) return {std::nullopt, "non-integer year"};
  if (!options.years.contains(static_cast<int>(*year)))
    return {std::nullopt, "year out of range"};
  p.year = static_cast<int>(*year);

  const auto type = parse_doc_type(fields[3]);
  if (!type) return {std::nullopt, "unknown doc_type '" + std::string(fields[3]) + "'"};
  p.doc_type = *type;

  const auto citations = text::parse_int(fields[4]);
  if (!citations) return {std::nullopt, "non-integer citations"};
  if (*citations < 0) return {std::nullopt, "negative citation count"};
  p.citations = static_cast<std::uint64_t>(*citations);

  if (!fields[5].empty()) {
    for (auto ref : text::split(fields[5], ';')) {
      if (!is_well_formed_journal_id(ref)) return {std::nullopt, "malformed cited_journals"};
      p.cited_journals.emplace_back(ref);
    }
  }
  return {std::move(p), {}};
}

}  // namespace

IngestResult ingest(std::istream& rows, const IngestOptions& options) {
  std::string line;
  if (!std::getline(rows, line)) throw Error("malformed header", "publication file is empty");
  {
    const auto header = text::split(text::chomp(line), options.delimiter);
    if (!std::equal(header.begin(), header.end(), std::begin(kPublicationHeader),
                    std::end(kPublicationHeader)))
      throw Error("malformed header",
                  "expected columns id, journal_id, year, doc_type, citations, cited_journals");
  }

  IngestResult result;
  std::vector<Publication> accepted;
  std::unordered_map<std::string, std::size_t> first_line;
  std::size_t line_no = 1;
  while (std::getline(rows, line)) {
    ++line_no;
    const auto row = text::chomp(line);
    if (text::trim(row).empty()) continue;
    ++result.rows_read;

    auto parsed = parse_row(row, options);
    if (!parsed.publication) {
      result.rejected.push_back({line_no, std::move(parsed.reason), std::string(row)});
      continue;
    }
    const auto [it, inserted] = first_line.emplace(parsed.publication->id, line_no);
    if (!inserted)
      throw Error("duplicate id", parsed.publication->id + " (lines " +
                                      std::to_string(it->second) + " and " +
                                      std::to_string(line_no) + ")");
    accepted.push_back(std::move(*parsed.publication));
  }
  result.corpus = Corpus(std::move(accepted), options.window);
  return result;
}

IngestResult ingest_file(const std::filesystem::path& path, const IngestOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing input file", path.string());
  return ingest(in, options);
}

std::string serialize_row(const Publication& p, char delimiter) {
  std::string row;
  row += p.id;
  row += delimiter;
  row += p.journal_id;
  row += delimiter;
  row += std::to_string(p.year);
  row += delimiter;
  row += to_string(p.doc_type);
  row += delimiter;
  row += std::to_string(p.citations);
  row += delimiter;
  row += text::join(p.cited_journals, ";");
  return row;
}

void write_corpus(std::ostream& out, const Corpus& corpus, char delimiter) {
  for (std::size_t i = 0; i < std::size(kPublicationHeader); ++i)
    out << (i ? std::string(1, delimiter) : "") << kPublicationHeader[i];
  out << '\n';
  for (const auto& p : corpus.publications()) out << serialize_row(p, delimiter) << '\n';
}

void write_rejections(std::ostream& out, std::span<const RejectedRow> rejected) {
  out << "line\treason\trow\n";
  for (const auto& r : rejected) out << r.line << '\t' << r.reason << '\t' << r.text << '\n';
}

OeuvreSelection select_oeuvre(const Corpus& corpus, std::string group_id,
                              std::span<const std::string> ids) {
  corpus.require_frozen();
  std::set<std::string> resolved;
  std::set<std::string> unresolved;
  for (const auto& id : ids) (corpus.find(id) ? resolved : unresolved).insert(id);
  if (resolved.empty()) throw Error("empty oeuvre", group_id);

  OeuvreSelection selection;
  selection.oeuvre.group_id = std::move(group_id);
  selection.oeuvre.publication_ids.assign(resolved.begin(), resolved.end());
  selection.unresolved.assign(unresolved.begin(), unresolved.end());
  return selection;
}

std::vector<std::string> read_oeuvre_ids(std::istream& in) {
  std::vector<std::string> ids;
  std::string line;
  while (std::getline(in, line)) {
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = text::trim(view);
    if (!view.empty()) ids.emplace_back(view);
  }
  return ids;
}

}  // namespace fieldnorm
