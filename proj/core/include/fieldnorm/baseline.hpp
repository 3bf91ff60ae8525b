#pragma once

#include "fieldnorm/classify.hpp"
#include "fieldnorm/corpus.hpp"
#include "fieldnorm/rational.hpp"

#include <compare>
#include <iosfwd>
#include <map>
#include <set>
#include <string>

namespace fieldnorm {

/// Normalization stratum.
struct Cell {
  std::string category;
  DocType doc_type = DocType::Article;
  int year = 0;

  auto operator<=>(const Cell&) const = default;
};

std::string to_string(const Cell& cell);

/// W = fractional paper weight, C = fractional citations, rate = C / W.
struct CellStats {
  Rational papers;
  Rational citations;
  Rational rate;
};

/// Which document types enter baselines and scoring.
struct NormalizationScope {
  std::set<DocType> citable{DocType::Article, DocType::Letter, DocType::Review};

  bool is_citable(DocType type) const { return citable.contains(type); }
};

struct BaselineExclusions {
  std::size_t non_citable = 0;
  std::size_t unclassified = 0;
};

class BaselineTable {
 public:
  const CellStats* find(const Cell& cell) const;
  const std::map<Cell, CellStats>& cells() const { return cells_; }
  const std::string& fingerprint() const { return fingerprint_; }
  const BaselineExclusions& exclusions() const { return exclusions_; }
  const NormalizationScope& scope() const { return scope_; }
  std::size_t in_scope_papers() const { return in_scope_papers_; }

  /// Cells whose total paper weight is below one full paper.
  std::size_t sparse_cells() const;

  friend BaselineTable build_baselines(const Corpus&, const AssignmentTable&,
                                       const NormalizationScope&);

 private:
  std::map<Cell, CellStats> cells_;
  BaselineExclusions exclusions_;
  NormalizationScope scope_;
  std::size_t in_scope_papers_ = 0;
  std::string fingerprint_;
};

/// Digest tying a baseline universe to its exact inputs: the frozen corpus,
/// its assignments and the citable set. Format "sha256:<hex>".
std::string corpus_fingerprint(const Corpus& corpus, const AssignmentTable& assignments,
                               const NormalizationScope& scope);

/// Accumulates W and C per cell over every citable, classified publication.
/// Throws Error("empty baseline universe") if none qualifies.
BaselineTable build_baselines(const Corpus& corpus, const AssignmentTable& assignments,
                              const NormalizationScope& scope = {});

/// Weighted mean of the paper's cell rates. Throws Error("uncovered cell").
Rational expected_rate(const Publication& publication, const Assignment& assignment,
                       const BaselineTable& table);

void write_baselines(std::ostream& out, const BaselineTable& table);

/// Returns the fingerprint from a baseline export's header line.
std::string read_baseline_fingerprint(std::istream& in);

}  // namespace fieldnorm
