#include "fieldnorm/baseline.hpp"

#include "fieldnorm/digest.hpp"
#include "fieldnorm/error.hpp"
#include "fieldnorm/text.hpp"

#include <algorithm>
#include <istream>
#include <ostream>

namespace fieldnorm {

std::string to_string(const Cell& cell) {
  return "(" + cell.category + ", " + std::string(to_string(cell.doc_type)) + ", " +
         std::to_string(cell.year) + ")";
}

const CellStats* BaselineTable::find(const Cell& cell) const {
  const auto it = cells_.find(cell);
  return it == cells_.end() ? nullptr : &it->second;
}

std::size_t BaselineTable::sparse_cells() const {
  return static_cast<std::size_t>(std::count_if(
      cells_.begin(), cells_.end(), [](const auto& kv) { return kv.second.papers < 1; }));
}

std::string corpus_fingerprint(const Corpus& corpus, const AssignmentTable& assignments,
                               const NormalizationScope& scope) {
  std::vector<const Publication*> sorted;
  sorted.reserve(corpus.size());
  for (const auto& p : corpus.publications()) sorted.push_back(&p);
  std::sort(sorted.begin(), sorted.end(),
            [](const Publication* a, const Publication* b) { return a->id < b->id; });

  std::string canonical = "window\t" + corpus.window().to_string() + "\ncitable";
  for (DocType t : scope.citable) (canonical += '\t') += to_string(t);
  canonical += "\npublications\n";
  for (const Publication* p : sorted) (canonical += serialize_row(*p)) += '\n';
  canonical += "assignments\n";
  for (const auto& a : assignments.all()) {
    canonical += a.publication_id;
    canonical += '\t';
    canonical += to_string(a.method);
    for (const auto& [category, weight] : a.weights) canonical += '\t' + category + ':' + to_exact(weight);
    canonical += '\n';
  }
  return "sha256:" + sha256_hex(canonical);
}

BaselineTable build_baselines(const Corpus& corpus, const AssignmentTable& assignments,
                              const NormalizationScope& scope) {
  corpus.require_frozen();
  BaselineTable table;
  table.scope_ = scope;

  for (const auto& p : corpus.publications()) {
    if (!scope.is_citable(p.doc_type)) {
      ++table.exclusions_.non_citable;
      continue;
    }
    const Assignment* a = assignments.find(p.id);
    if (!a || !a->classified()) {
      ++table.exclusions_.unclassified;
      continue;
    }
    ++table.in_scope_papers_;
    for (const auto& [category, weight] : a->weights) {
      CellStats& stats = table.cells_[Cell{category, p.doc_type, p.year}];
      stats.papers += weight;
      stats.citations += weight * Rational(p.citations);
    }
  }
  if (table.in_scope_papers_ == 0) throw Error("empty baseline universe");

  for (auto& [cell, stats] : table.cells_) stats.rate = stats.citations / stats.papers;
  table.fingerprint_ = corpus_fingerprint(corpus, assignments, scope);
  return table;
}

Rational expected_rate(const Publication& publication, const Assignment& assignment,
                       const BaselineTable& table) {
  if (!assignment.classified()) throw Error("unclassified publication", publication.id);
  Rational expected;
  for (const auto& [category, weight] : assignment.weights) {
    const Cell cell{category, publication.doc_type, publication.year};
    const CellStats* stats = table.find(cell);
    if (!stats) throw Error("uncovered cell", to_string(cell) + " for " + publication.id);
    expected += weight * stats->rate;
  }
  return expected;
}

void write_baselines(std::ostream& out, const BaselineTable& table) {
  out << "# fingerprint\t" << table.fingerprint() << '\n';
  out << "category\tdoc_type\tyear\tW\tC\te\n";
  for (const auto& [cell, stats] : table.cells())
    out << cell.category << '\t' << to_string(cell.doc_type) << '\t' << cell.year << '\t'
        << to_fixed(stats.papers) << '\t' << to_fixed(stats.citations) << '\t'
        << to_fixed(stats.rate) << '\n';
}

std::string read_baseline_fingerprint(std::istream& in) {
  std::string line;
  if (std::getline(in, line)) {
    const auto fields = text::split(text::chomp(line), '\t');
    if (fields.size() == 2 && fields[0] == "# fingerprint") return std::string(fields[1]);
  }
  throw Error("malformed baseline file", "missing fingerprint header");
}

}  // namespace fieldnorm
