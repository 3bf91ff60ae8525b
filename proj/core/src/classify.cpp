#include "fieldnorm/classify.hpp"

#include "fieldnorm/error.hpp"
#include "fieldnorm/text.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <thread>

namespace fieldnorm {

void CategoryMap::add(std::string journal_id, JournalKind kind,
                      std::vector<std::string> categories) {
  if (!is_well_formed_journal_id(journal_id))
    throw Error("malformed category map", "bad journal id '" + journal_id + "'");
  std::sort(categories.begin(), categories.end());
  categories.erase(std::unique(categories.begin(), categories.end()), categories.end());
  for (const auto& c : categories)
    if (!is_well_formed_journal_id(c))
      throw Error("malformed category map", "bad category id '" + c + "' for " + journal_id);
  if (kind == JournalKind::Specialist && categories.empty())
    throw Error("malformed category map", "specialist journal without categories: " + journal_id);
  if (kind == JournalKind::General && !categories.empty())
    throw Error("malformed category map", "general journal lists categories: " + journal_id);
  if (journals_.contains(journal_id))
    throw Error("malformed category map", "duplicate journal " + journal_id);

  categories_.insert(categories.begin(), categories.end());
  journals_.emplace(std::move(journal_id), JournalEntry{kind, std::move(categories)});
}

const JournalEntry* CategoryMap::find(std::string_view journal_id) const {
  const auto it = journals_.find(journal_id);
  return it == journals_.end() ? nullptr : &it->second;
}

CategoryMap CategoryMap::read(std::istream& in, char delimiter) {
  CategoryMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = text::chomp(line);
    if (text::trim(row).empty()) continue;
    const auto fields = text::split(row, delimiter);
    if (line_no == 1 && fields.front() == "journal_id") continue;
    if (fields.size() != 3)
      throw Error("malformed category map", "line " + std::to_string(line_no) + ": expected 3 fields");

    JournalKind kind;
    if (fields[1] == "SPECIALIST")
      kind = JournalKind::Specialist;
    else if (fields[1] == "GENERAL")
      kind = JournalKind::General;
    else
      throw Error("malformed category map",
                  "line " + std::to_string(line_no) + ": unknown kind '" + std::string(fields[1]) + "'");

    std::vector<std::string> categories;
    if (!fields[2].empty())
      for (auto c : text::split(fields[2], ';')) categories.emplace_back(c);
    map.add(std::string(fields[0]), kind, std::move(categories));
  }
  return map;
}

CategoryMap CategoryMap::read_file(const std::filesystem::path& path, char delimiter) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("missing input file", path.string());
  return read(in, delimiter);
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::JournalCategories: return "JournalCategories";
    case Method::ReferenceAnalysis: return "ReferenceAnalysis";
    case Method::Unclassified: return "Unclassified";
  }
  return "Unclassified";
}

std::optional<Method> parse_method(std::string_view token) {
  for (Method m : {Method::JournalCategories, Method::ReferenceAnalysis, Method::Unclassified})
    if (token == to_string(m)) return m;
  return std::nullopt;
}

namespace {

Assignment unclassified(const Publication& p, std::string note) {
  return {p.id, {}, Method::Unclassified, std::move(note)};
}

}  // namespace

Assignment assign_by_journal(const Publication& publication, const CategoryMap& map) {
  const JournalEntry* journal = map.find(publication.journal_id);
  if (!journal) return unclassified(publication, "unknown journal " + publication.journal_id);
  if (journal->kind == JournalKind::General)
    throw Error("requires reference analysis", publication.id + " in " + publication.journal_id);

  Assignment a{publication.id, {}, Method::JournalCategories, {}};
  const Rational share(1, journal->categories.size());
  for (const auto& c : journal->categories) a.weights.emplace(c, share);
  return a;
}

Assignment reclassify_by_references(const Publication& publication, const CategoryMap& map,
                                    const ReclassifyParams& params) {
  const JournalEntry* journal = map.find(publication.journal_id);
  if (!journal || journal->kind != JournalKind::General)
    throw Error("not a general journal", publication.id + " in " + publication.journal_id);

  std::map<std::string, Rational> tally;
  Rational total;
  for (const auto& ref : publication.cited_journals) {
    const JournalEntry* cited = map.find(ref);
    if (!cited || cited->kind != JournalKind::Specialist) continue;
    const Rational part(1, cited->categories.size());
    for (const auto& c : cited->categories) tally[c] += part;
    total += 1;
  }

  if (total == 0) return unclassified(publication, "no references to specialist journals");
  if (total < params.min_refs)
    return unclassified(publication, "specialist references below min_refs (" +
                                         total.get_str() + " < " +
                                         std::to_string(params.min_refs) + ")");

  Assignment a{publication.id, {}, Method::ReferenceAnalysis, {}};
  Rational kept;
  for (auto& [category, weight] : tally) {
    Rational share = weight / total;
    if (share >= params.min_share) {
      kept += share;
      a.weights.emplace(category, std::move(share));
    }
  }
  if (a.weights.empty()) return unclassified(publication, "no category reaches min_share");
  for (auto& [category, weight] : a.weights) weight /= kept;
  return a;
}

AssignmentTable::AssignmentTable(std::vector<Assignment> assignments)
    : assignments_(std::move(assignments)) {
  std::sort(assignments_.begin(), assignments_.end(),
            [](const Assignment& a, const Assignment& b) { return a.publication_id < b.publication_id; });
  const auto dup = std::adjacent_find(
      assignments_.begin(), assignments_.end(),
      [](const Assignment& a, const Assignment& b) { return a.publication_id == b.publication_id; });
  if (dup != assignments_.end()) throw Error("duplicate id", dup->publication_id);
}

const Assignment* AssignmentTable::find(std::string_view publication_id) const {
  const auto it = std::lower_bound(
      assignments_.begin(), assignments_.end(), publication_id,
      [](const Assignment& a, std::string_view id) { return a.publication_id < id; });
  return it != assignments_.end() && it->publication_id == publication_id ? &*it : nullptr;
}

Classification classify_corpus(const Corpus& corpus, const CategoryMap& map,
                               const ReclassifyParams& params, unsigned threads) {
  corpus.require_frozen();
  const auto pubs = corpus.publications();
  std::vector<Assignment> assignments(pubs.size());

  auto classify_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Publication& p = pubs[i];
      const JournalEntry* journal = map.find(p.journal_id);
      if (journal && journal->kind == JournalKind::General)
        assignments[i] = reclassify_by_references(p, map, params);
      else
        assignments[i] = assign_by_journal(p, map);
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(pubs.size() / 256 + 1)));
  if (threads == 1) {
    classify_range(0, pubs.size());
  } else {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (pubs.size() + threads - 1) / threads;
    for (std::size_t begin = 0; begin < pubs.size(); begin += chunk)
      workers.emplace_back(classify_range, begin, std::min(pubs.size(), begin + chunk));
  }

  Classification result;
  result.assignments = AssignmentTable(std::move(assignments));
  for (const auto& a : result.assignments.all()) {
    switch (a.method) {
      case Method::JournalCategories: ++result.coverage.journal_categories; break;
      case Method::ReferenceAnalysis: ++result.coverage.reference_analysis; break;
      case Method::Unclassified:
        ++result.coverage.unclassified;
        result.coverage.unclassified_ids.push_back(a.publication_id);
        break;
    }
  }
  return result;
}

void write_assignments(std::ostream& out, const AssignmentTable& table) {
  out << "publication_id\tmethod\tweights\n";
  for (const auto& a : table.all()) {
    std::vector<std::string> pairs;
    for (const auto& [category, weight] : a.weights) pairs.push_back(category + ":" + to_fixed(weight));
    out << a.publication_id << '\t' << to_string(a.method) << '\t' << text::join(pairs, ";") << '\n';
  }
}

void write_coverage(std::ostream& out, const CoverageReport& coverage) {
  out << "JournalCategories\t" << coverage.journal_categories << '\n'
      << "ReferenceAnalysis\t" << coverage.reference_analysis << '\n'
      << "Unclassified\t" << coverage.unclassified << '\n';
  for (const auto& id : coverage.unclassified_ids) out << "unclassified\t" << id << '\n';
}

}  // namespace fieldnorm
