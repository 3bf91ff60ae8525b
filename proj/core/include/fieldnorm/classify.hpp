#pragma once

#include "fieldnorm/corpus.hpp"
#include "fieldnorm/rational.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace fieldnorm {

enum class JournalKind { Specialist, General };

struct JournalEntry {
  JournalKind kind = JournalKind::Specialist;
  std::vector<std::string> categories;  // sorted, unique; empty for General
};

/// Journal -> subject categories. Categories may overlap across journals.
class CategoryMap {
 public:
  /// Throws Error("malformed category map") on a duplicate journal, a
  /// specialist without categories, or a general journal with categories.
  void add(std::string journal_id, JournalKind kind, std::vector<std::string> categories);

  const JournalEntry* find(std::string_view journal_id) const;
  const std::set<std::string>& categories() const { return categories_; }
  const std::map<std::string, JournalEntry, std::less<>>& journals() const { return journals_; }

  /// Rows: journal_id, SPECIALIST|GENERAL, semicolon-joined categories.
  /// A leading "journal_id..." header row is optional.
  static CategoryMap read(std::istream& in, char delimiter = '\t');
  static CategoryMap read_file(const std::filesystem::path& path, char delimiter = '\t');

 private:
  std::map<std::string, JournalEntry, std::less<>> journals_;
  std::set<std::string> categories_;
};

enum class Method { JournalCategories, ReferenceAnalysis, Unclassified };

std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view token);

/// Category membership of one publication. For classified papers weights are
/// strictly positive and sum to exactly 1; Unclassified carries no weights
/// and a `note` saying why.
struct Assignment {
  std::string publication_id;
  std::map<std::string, Rational> weights;
  Method method = Method::Unclassified;
  std::string note;

  bool classified() const { return method != Method::Unclassified; }
  bool operator==(const Assignment&) const = default;
};

struct ReclassifyParams {
  std::uint64_t min_refs = 5;
  Rational min_share{1, 10};  // closed threshold: share == min_share survives
};

/// Uniform 1/k split over the journal's k categories. Unknown journals come
/// back Unclassified; general journals throw Error("requires reference analysis").
Assignment assign_by_journal(const Publication& publication, const CategoryMap& map);

/// Places a general-journal paper by tallying the categories of the
/// specialist journals it cites (1/k per reference per category).
Assignment reclassify_by_references(const Publication& publication, const CategoryMap& map,
                                    const ReclassifyParams& params);

/// Assignments keyed by publication id, iterated in id order.
class AssignmentTable {
 public:
  AssignmentTable() = default;
  explicit AssignmentTable(std::vector<Assignment> assignments);

  const Assignment* find(std::string_view publication_id) const;
  const std::vector<Assignment>& all() const { return assignments_; }
  std::size_t size() const { return assignments_.size(); }

 private:
  std::vector<Assignment> assignments_;
};

struct CoverageReport {
  std::size_t journal_categories = 0;
  std::size_t reference_analysis = 0;
  std::size_t unclassified = 0;
  std::vector<std::string> unclassified_ids;  // sorted
};

struct Classification {
  AssignmentTable assignments;
  CoverageReport coverage;
};

/// Classifies every publication of a frozen corpus. Work is split across
/// `threads` workers; the result does not depend on the thread count.
Classification classify_corpus(const Corpus& corpus, const CategoryMap& map,
                               const ReclassifyParams& params, unsigned threads = 1);

/// publication_id, method, category:weight pairs (12 decimals).
void write_assignments(std::ostream& out, const AssignmentTable& table);
void write_coverage(std::ostream& out, const CoverageReport& coverage);

}  // namespace fieldnorm
