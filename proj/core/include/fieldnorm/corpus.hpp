#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace fieldnorm {

enum class DocType { Article, Letter, Review, Other };

std::string_view to_string(DocType type);
std::optional<DocType> parse_doc_type(std::string_view token);

/// One citable item. `citations` is the count inside the corpus citation
/// window; `cited_journals` is the journal-level reference list (a multiset,
/// kept in file order so re-serialization is lossless).
struct Publication {
  std::string id;
  std::string journal_id;
  int year = 0;
  DocType doc_type = DocType::Article;
  std::uint64_t citations = 0;
  std::vector<std::string> cited_journals;

  bool operator==(const Publication&) const = default;
};

/// Citation window declared for the whole corpus. Recorded for audit only;
/// the supplier guarantees the counts match it.
struct CitationWindow {
  std::optional<int> years;  // nullopt: open-ended

  /// "open" or "fixed:N" (N >= 1).
  static CitationWindow parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const CitationWindow&) const = default;
};

struct YearRange {
  int first = 1900;
  int last = 2100;

  bool contains(int year) const { return year >= first && year <= last; }
};

struct IngestOptions {
  CitationWindow window;
  YearRange years;
  char delimiter = '\t';
};

/// A publication file line that did not make it into the corpus.
struct RejectedRow {
  std::size_t line = 0;  // 1-based, header is line 1
  std::string reason;
  std::string text;
};

bool is_well_formed_journal_id(std::string_view id);

/// The publication universe. Built unfrozen; freeze() validates and seals
/// it, after which it is immutable and safe to share across threads.
class Corpus {
 public:
  Corpus() = default;
  Corpus(std::vector<Publication> publications, CitationWindow window);

  std::span<const Publication> publications() const { return publications_; }
  const CitationWindow& window() const { return window_; }
  bool frozen() const { return frozen_; }
  std::size_t size() const { return publications_.size(); }

  const Publication* find(std::string_view id) const;

  /// Throws Error("corpus not frozen").
  void require_frozen() const;

  friend Corpus freeze(Corpus corpus);

 private:
  std::vector<Publication> publications_;
  CitationWindow window_;
  bool frozen_ = false;
  std::unordered_map<std::string, std::size_t> index_;
  std::vector<std::string> duplicate_ids_;
};

/// Seals a corpus. Idempotent; throws Error("duplicate id") if two
/// publications share an id.
Corpus freeze(Corpus corpus);

struct IngestResult {
  Corpus corpus;  // unfrozen
  std::vector<RejectedRow> rejected;
  std::size_t rows_read = 0;  // data rows, excluding header and blank lines
};

inline constexpr std::string_view kPublicationHeader[] = {
    "id", "journal_id", "year", "doc_type", "citations", "cited_journals"};

/// Reads the publication file format: header row then one publication per
/// row. Bad rows are rejected with a line number; a repeated id aborts the
/// whole ingest with Error("duplicate id").
IngestResult ingest(std::istream& rows, const IngestOptions& options = {});
IngestResult ingest_file(const std::filesystem::path& path, const IngestOptions& options = {});

std::string serialize_row(const Publication& publication, char delimiter = '\t');
void write_corpus(std::ostream& out, const Corpus& corpus, char delimiter = '\t');
void write_rejections(std::ostream& out, std::span<const RejectedRow> rejected);

/// A research group's verified publication list.
struct Oeuvre {
  std::string group_id;
  std::vector<std::string> publication_ids;  // sorted, unique, non-empty
};

struct OeuvreSelection {
  Oeuvre oeuvre;
  std::vector<std::string> unresolved;  // sorted
};

/// Keeps the ids present in the (frozen) corpus. Throws
/// Error("empty oeuvre") when nothing resolves.
OeuvreSelection select_oeuvre(const Corpus& corpus, std::string group_id,
                              std::span<const std::string> ids);

/// One id per line; blank lines and '#' comments ignored.
std::vector<std::string> read_oeuvre_ids(std::istream& in);

}  // namespace fieldnorm
