#pragma once

#include "fieldnorm/baseline.hpp"
#include "fieldnorm/classify.hpp"
#include "fieldnorm/corpus.hpp"
#include "fieldnorm/indicators.hpp"

#include <algorithm>
#include <memory>
#include <string>
#include <vector>

namespace fieldnorm::testing {

/// A frozen corpus with its classification and baselines, ready to score.
struct Fixture {
  Corpus corpus;
  CategoryMap map;
  Classification classification;
  BaselineTable table;

  ScoringInputs inputs(ZeroConventions conventions = {}) const {
    return {corpus, classification.assignments, table, conventions};
  }
};

/// Hand-built corpora for example-driven tests.
class FixtureBuilder {
 public:
  FixtureBuilder& journal(const std::string& id, std::vector<std::string> categories) {
    map_.add(id, JournalKind::Specialist, std::move(categories));
    return *this;
  }
  FixtureBuilder& general(const std::string& id) {
    map_.add(id, JournalKind::General, {});
    return *this;
  }
  FixtureBuilder& paper(const std::string& id, const std::string& journal, std::uint64_t citations,
                        int year = 2005, DocType type = DocType::Article,
                        std::vector<std::string> refs = {}) {
    pubs_.push_back({id, journal, year, type, citations, std::move(refs)});
    return *this;
  }

  /// Adds `oeuvre_citations` as papers "<prefix>-0..", then pads the cell
  /// (journal, year) with zero-cited papers and at most one filler paper so
  /// that the cell's mean citation rate equals `rate` exactly.
  FixtureBuilder& cell_with_rate(const std::string& prefix, const std::string& journal,
                                 const std::vector<std::uint64_t>& oeuvre_citations, const Rational& rate,
                                 int year = 2005) {
    std::uint64_t sum = 0;
    for (std::size_t i = 0; i < oeuvre_citations.size(); ++i) {
      paper(prefix + "-" + std::to_string(i), journal, oeuvre_citations[i], year);
      sum += oeuvre_citations[i];
    }
    const std::size_t m = oeuvre_citations.size();
    for (std::size_t n = std::max<std::size_t>(m, 1);; ++n) {
      const Rational total = rate * Rational(n);
      if (total.get_den() != 1 || total < sum) continue;
      const std::uint64_t rest = total.get_num().get_ui() - sum;
      if (rest > 0 && n == m) continue;
      std::size_t k = m;
      if (rest > 0) paper(prefix + "-fill", journal, rest, year), ++k;
      for (std::size_t z = 0; k < n; ++k, ++z) paper(prefix + "-zero-" + std::to_string(z), journal, 0, year);
      return *this;
    }
  }

  Fixture build(const ReclassifyParams& params = {}, const NormalizationScope& scope = {}) const {
    Fixture f;
    f.corpus = freeze(Corpus(pubs_, CitationWindow{}));
    f.map = map_;
    f.classification = classify_corpus(f.corpus, f.map, params);
    f.table = build_baselines(f.corpus, f.classification.assignments, scope);
    return f;
  }

  std::unique_ptr<Fixture> build_ptr(const ReclassifyParams& params = {},
                                     const NormalizationScope& scope = {}) const {
    return std::make_unique<Fixture>(build(params, scope));
  }

 private:
  CategoryMap map_;
  std::vector<Publication> pubs_;
};

inline Oeuvre oeuvre_of(std::vector<std::string> ids, std::string group = "G") {
  std::sort(ids.begin(), ids.end());
  return {std::move(group), std::move(ids)};
}

}  // namespace fieldnorm::testing
