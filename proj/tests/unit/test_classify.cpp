#include "fieldnorm/classify.hpp"
#include "fieldnorm/error.hpp"

#include "oracle.hpp"
#include "random_world.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace fieldnorm;

namespace {

CategoryMap sample_map() {
  CategoryMap m;
  m.add("J-ASTRO", JournalKind::Specialist, {"ASTRO"});
  m.add("J-ONC", JournalKind::Specialist, {"ONC"});
  m.add("J-CARD", JournalKind::Specialist, {"CARD"});
  m.add("J-CARDONC", JournalKind::Specialist, {"CARD", "ONC"});
  m.add("NATURE", JournalKind::General, {});
  return m;
}

Publication pub(std::string id, std::string journal, std::vector<std::string> refs = {}) {
  return {std::move(id), std::move(journal), 2005, DocType::Article, 3, std::move(refs)};
}

std::vector<std::string> refs(std::initializer_list<std::pair<const char*, int>> counts) {
  std::vector<std::string> out;
  for (const auto& [j, n] : counts) out.insert(out.end(), n, j);
  return out;
}

Rational weight_sum(const Assignment& a) {
  Rational s;
  for (const auto& [c, w] : a.weights) s += w;
  return s;
}

}  // namespace

TEST_SUITE("classify") {
  TEST_CASE("single-category journal gives weight one") {
    const auto a = assign_by_journal(pub("P1", "J-ASTRO"), sample_map());
    CHECK(a.method == Method::JournalCategories);
    REQUIRE(a.weights.size() == 1);
    CHECK(a.weights.at("ASTRO") == 1);
  }

  TEST_CASE("two-category journal splits evenly") {
    const auto a = assign_by_journal(pub("P1", "J-CARDONC"), sample_map());
    CHECK(a.weights.at("CARD") == Rational(1, 2));
    CHECK(a.weights.at("ONC") == Rational(1, 2));
  }

  TEST_CASE("unknown journal is unclassified, not dropped") {
    const auto a = assign_by_journal(pub("P1", "J-NOPE"), sample_map());
    CHECK(a.method == Method::Unclassified);
    CHECK(a.weights.empty());
    CHECK(a.note == "unknown journal J-NOPE");
  }

  TEST_CASE("general journal needs reference analysis") {
    CHECK_THROWS_WITH_AS(assign_by_journal(pub("P1", "NATURE"), sample_map()),
                         doctest::Contains("requires reference analysis"), Error);
    CHECK_THROWS_WITH_AS(reclassify_by_references(pub("P1", "J-ONC"), sample_map(), {}),
                         doctest::Contains("not a general journal"), Error);
  }

  TEST_CASE("general-journal paper citing only astronomy lands in astronomy") {
    const auto a = reclassify_by_references(pub("P1", "NATURE", refs({{"J-ASTRO", 10}})), sample_map(), {});
    CHECK(a.method == Method::ReferenceAnalysis);
    REQUIRE(a.weights.size() == 1);
    CHECK(a.weights.at("ASTRO") == 1);
  }

  TEST_CASE("six to four split matches a brute-force tally") {
    const auto p = pub("P1", "NATURE", refs({{"J-ONC", 6}, {"J-CARD", 4}}));
    const ReclassifyParams params{5, Rational(1, 4)};
    const auto a = reclassify_by_references(p, sample_map(), params);
    CHECK(a.weights.at("ONC") == Rational(3, 5));
    CHECK(a.weights.at("CARD") == Rational(2, 5));

    oracle::Params op;
    op.min_refs = 5;
    op.min_share = oracle::Q(1) / 4;
    const auto o = oracle::place(p, sample_map(), op);
    REQUIRE(o.classified);
    for (const auto& [c, w] : o.weights) CHECK(oracle::str(w) == to_exact(a.weights.at(c)));
  }

  TEST_CASE("references to overlapping journals count one over k") {
    const auto p = pub("P1", "NATURE", refs({{"J-CARDONC", 4}, {"J-ONC", 2}}));
    const auto a = reclassify_by_references(p, sample_map(), {});
    CHECK(a.weights.at("ONC") == Rational(2, 3));
    CHECK(a.weights.at("CARD") == Rational(1, 3));
  }

  TEST_CASE("no specialist references leaves the paper unclassified") {
    const auto none = reclassify_by_references(pub("P1", "NATURE"), sample_map(), {});
    CHECK(none.method == Method::Unclassified);
    CHECK(none.note == "no references to specialist journals");
    const auto only_general =
        reclassify_by_references(pub("P2", "NATURE", refs({{"NATURE", 8}, {"J-UNKNOWN", 3}})), sample_map(), {});
    CHECK(only_general.note == "no references to specialist journals");
  }

  TEST_CASE("too few specialist references") {
    const auto a = reclassify_by_references(pub("P1", "NATURE", refs({{"J-ONC", 4}})), sample_map(), {});
    CHECK(a.method == Method::Unclassified);
    CHECK(a.note == "specialist references below min_refs (4 < 5)");
    const auto b = reclassify_by_references(pub("P1", "NATURE", refs({{"J-ONC", 5}})), sample_map(), {});
    CHECK(b.classified());
  }

  TEST_CASE("a share exactly at min_share survives") {
    const auto p = pub("P1", "NATURE", refs({{"J-ONC", 9}, {"J-CARD", 1}}));
    const auto a = reclassify_by_references(p, sample_map(), {5, Rational(1, 10)});
    CHECK(a.weights.at("CARD") == Rational(1, 10));
    CHECK(a.weights.at("ONC") == Rational(9, 10));
  }

  TEST_CASE("shares below min_share are dropped and the rest renormalized") {
    const auto p = pub("P1", "NATURE", refs({{"J-ONC", 6}, {"J-CARD", 3}, {"J-ASTRO", 1}}));
    const auto a = reclassify_by_references(p, sample_map(), {5, Rational(1, 5)});
    CHECK(a.weights.size() == 2);
    CHECK(a.weights.at("ONC") == Rational(2, 3));
    CHECK(a.weights.at("CARD") == Rational(1, 3));
    const auto none = reclassify_by_references(p, sample_map(), {5, Rational(7, 10)});
    CHECK(none.note == "no category reaches min_share");
  }

  TEST_CASE("mixed corpus coverage counts") {
    const Corpus c = freeze(Corpus({pub("A1", "J-ASTRO"), pub("A2", "J-CARDONC"), pub("A3", "J-NOPE"),
                                    pub("A4", "NATURE", refs({{"J-ASTRO", 6}})), pub("A5", "NATURE")},
                                   {}));
    const auto cls = classify_corpus(c, sample_map(), {});
    CHECK(cls.coverage.journal_categories == 2);
    CHECK(cls.coverage.reference_analysis == 1);
    CHECK(cls.coverage.unclassified == 2);
    CHECK(cls.coverage.unclassified_ids == std::vector<std::string>{"A3", "A5"});
    CHECK(cls.assignments.size() == 5);
    CHECK(cls.assignments.find("A4")->method == Method::ReferenceAnalysis);
  }

  TEST_CASE("category map parsing") {
    std::istringstream ok("journal_id\tkind\tcategories\nJ-A\tSPECIALIST\tX;Y\nG\tGENERAL\t\n");
    const auto m = CategoryMap::read(ok);
    CHECK(m.find("J-A")->categories == std::vector<std::string>{"X", "Y"});
    CHECK(m.find("G")->kind == JournalKind::General);
    for (const char* bad : {"J-A\tSPECIALIST\t\n", "G\tGENERAL\tX\n", "J-A\tSPECIALIST\tX\nJ-A\tSPECIALIST\tY\n",
                            "J-A\tWEIRD\tX\n", "J-A\tSPECIALIST\n"}) {
      CAPTURE(bad);
      std::istringstream in(bad);
      CHECK_THROWS_WITH_AS(CategoryMap::read(in), doctest::Contains("malformed category map"), Error);
    }
  }

  TEST_CASE("property: weights are positive and sum to one; matches the oracle") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
      const auto w = testing::random_world(seed);
      const ReclassifyParams params{static_cast<std::uint64_t>(seed % 6), Rational(static_cast<long>(seed % 4), 10)};
      oracle::Params op;
      op.min_refs = params.min_refs;
      op.min_share = oracle::Q(static_cast<long>(seed % 4)) / 10;
      const auto cls = classify_corpus(w.corpus, w.map, params);
      for (const auto& p : w.corpus.publications()) {
        const Assignment* a = cls.assignments.find(p.id);
        REQUIRE(a);
        const auto o = oracle::place(p, w.map, op);
        CHECK(a->classified() == o.classified);
        if (!a->classified()) continue;
        CHECK(weight_sum(*a) == 1);
        REQUIRE(a->weights.size() == o.weights.size());
        for (const auto& [c, weight] : a->weights) {
          CHECK(weight > 0);
          CHECK(to_exact(weight) == oracle::str(o.weights.at(c)));
        }
      }
    }
  }

  TEST_CASE("property: reference order does not matter") {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const auto w = testing::random_world(seed);
      for (const auto& p : w.corpus.publications()) {
        const JournalEntry* j = w.map.find(p.journal_id);
        if (!j || j->kind != JournalKind::General) continue;
        Publication shuffled = p;
        std::shuffle(shuffled.cited_journals.begin(), shuffled.cited_journals.end(), rng);
        CHECK(reclassify_by_references(p, w.map, {}) == reclassify_by_references(shuffled, w.map, {}));
      }
    }
  }

  TEST_CASE("property: thread count does not change the result") {
    testing::RandomWorldOptions o;
    o.papers = 400;
    const auto w = testing::random_world(99, o);
    const auto one = classify_corpus(w.corpus, w.map, {}, 1);
    for (unsigned t : {2u, 3u, 8u}) {
      const auto many = classify_corpus(w.corpus, w.map, {}, t);
      CHECK(many.assignments.all() == one.assignments.all());
      CHECK(many.coverage.unclassified_ids == one.coverage.unclassified_ids);
    }
  }
}
