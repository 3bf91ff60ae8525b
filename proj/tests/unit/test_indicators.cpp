#include "fieldnorm/error.hpp"
#include "fieldnorm/indicators.hpp"

#include "fixtures.hpp"
#include "oracle.hpp"
#include "random_world.hpp"

#include <doctest.h>

#include <algorithm>

using namespace fieldnorm;
using testing::FixtureBuilder;
using testing::oeuvre_of;

namespace {

std::vector<std::string> ids(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + "-" + std::to_string(i));
  return out;
}

}  // namespace

TEST_SUITE("indicators") {
  TEST_CASE("flag-paper oeuvre versus many modest papers") {
    const auto f = FixtureBuilder()
                       .journal("J-A", {"A"})
                       .journal("J-B", {"B"})
                       .cell_with_rate("flag", "J-A", {50, 50}, Rational(2))
                       .cell_with_rate("modest", "J-B", std::vector<std::uint64_t>(10, 10), Rational(2, 5))
                       .build_ptr();
    const auto flag = score(oeuvre_of(ids("flag", 2)), f->inputs());
    const auto modest = score(oeuvre_of(ids("modest", 10)), f->inputs());
    CHECK(flag.sum_citations == 100);
    CHECK(flag.sum_expected == 4);
    CHECK(flag.globalized.value == 25);
    CHECK(modest.sum_citations == 100);
    CHECK(modest.sum_expected == 4);
    CHECK(modest.globalized.value == 25);
    CHECK(*flag.averaged.value == 25);
    CHECK(*modest.averaged.value == 25);
  }

  TEST_CASE("citations equal to expectation give one") {
    const auto f = FixtureBuilder().journal("J", {"X"}).cell_with_rate("p", "J", {3, 3}, Rational(3)).build_ptr();
    const auto s = score(oeuvre_of(ids("p", 2)), f->inputs());
    CHECK(s.globalized.value == 1);
    CHECK(*s.averaged.value == 1);
  }

  TEST_CASE("uncited paper alongside a cited one") {
    const auto f = FixtureBuilder().journal("J", {"X"}).cell_with_rate("p", "J", {8, 0}, Rational(2)).build_ptr();
    const auto s = score(oeuvre_of(ids("p", 2)), f->inputs());
    CHECK(s.trace.at(0).expected == 2);
    CHECK(s.trace.at(1).expected == 2);
    CHECK(s.globalized.value == 2);
    CHECK(*s.averaged.value == 2);
  }

  TEST_CASE("the two ratios diverge when expectations differ") {
    const auto f = FixtureBuilder()
                       .journal("J-LOW", {"LOW"})
                       .journal("J-HIGH", {"HIGH"})
                       .cell_with_rate("low", "J-LOW", {9}, Rational(1))
                       .cell_with_rate("high", "J-HIGH", {1}, Rational(9))
                       .build_ptr();
    const auto s = score(oeuvre_of({"low-0", "high-0"}), f->inputs());
    CHECK(s.sum_expected == 10);
    CHECK(s.globalized.value == 1);
    CHECK(*s.averaged.value == Rational(41, 9));
    CHECK(globalized_ratio(oeuvre_of({"low-0", "high-0"}), f->inputs()).value == 1);
    CHECK(averaged_ratio(oeuvre_of({"low-0", "high-0"}), f->inputs()).contributing == 2);
  }

  TEST_CASE("breakdown for a single field equals the overall ratio") {
    const auto f = FixtureBuilder().journal("J", {"X"}).cell_with_rate("p", "J", {7, 1, 4}, Rational(3)).build_ptr();
    const auto s = score(oeuvre_of(ids("p", 3)), f->inputs());
    REQUIRE(s.breakdown.size() == 1);
    CHECK(*s.breakdown.at("X").globalized == s.globalized.value);
    CHECK(*s.breakdown.at("X").averaged == *s.averaged.value);
    CHECK(s.breakdown.at("X").weight == 3);
  }

  TEST_CASE("breakdown of a split paper uses each category's own rate") {
    const auto f = FixtureBuilder()
                       .journal("J-A", {"A"})
                       .journal("J-B", {"B"})
                       .journal("J-AB", {"A", "B"})
                       .paper("P", "J-AB", 6)
                       .paper("A1", "J-A", 3)
                       .paper("B1", "J-B", 0)
                       .build_ptr();
    const auto s = score(oeuvre_of({"P"}), f->inputs());
    CHECK(f->table.find({"A", DocType::Article, 2005})->rate == 4);
    CHECK(f->table.find({"B", DocType::Article, 2005})->rate == 2);
    CHECK(s.trace.at(0).expected == 3);
    CHECK(s.globalized.value == 2);
    CHECK(*s.breakdown.at("A").globalized == Rational(3, 2));
    CHECK(*s.breakdown.at("B").globalized == 3);
    CHECK(s.breakdown.at("A").weight == Rational(1, 2));
    CHECK(s.breakdown.at("A").citations == 3);
    CHECK(s.breakdown.at("A").expected == 2);
  }

  TEST_CASE("exclusions are listed with reasons") {
    const auto f = FixtureBuilder()
                       .journal("J", {"X"})
                       .general("GEN")
                       .paper("P1", "J", 4)
                       .paper("P2", "J", 2)
                       .paper("P3", "J", 9, 2005, DocType::Other)
                       .paper("P4", "UNKNOWN", 5)
                       .paper("P5", "GEN", 5)
                       .build_ptr();
    const auto s = score(oeuvre_of({"P1", "P3", "P4", "P5", "P9"}), f->inputs());
    CHECK(s.oeuvre_size == 5);
    CHECK(s.n_scored == 1);
    REQUIRE(s.excluded.size() == 4);
    CHECK(s.excluded[0].reason == "non-citable document type Other");
    CHECK(s.excluded[1].reason == "unclassified: unknown journal UNKNOWN");
    CHECK(s.excluded[2].reason == "unclassified: no references to specialist journals");
    CHECK(s.excluded[3].id == "P9");
    CHECK(s.excluded[3].reason == "not in corpus");
    CHECK(s.globalized.value == Rational(4, 3));
  }

  TEST_CASE("nothing scorable is an error") {
    const auto f = FixtureBuilder().journal("J", {"X"}).paper("P1", "J", 4).paper("P2", "J", 1, 2005, DocType::Other).build_ptr();
    CHECK_THROWS_WITH_AS(score(oeuvre_of({"P2"}), f->inputs()), doctest::Contains("no scorable papers"), Error);
    CHECK_THROWS_WITH_AS(score(oeuvre_of({}), f->inputs()), doctest::Contains("empty oeuvre"), Error);
  }

  TEST_CASE("zero over zero counts as one and is flagged") {
    const auto f = FixtureBuilder()
                       .journal("J-Z", {"Z"})
                       .journal("J-X", {"X"})
                       .paper("Z1", "J-Z", 0)
                       .paper("Z2", "J-Z", 0)
                       .paper("X1", "J-X", 6)
                       .paper("X2", "J-X", 2)
                       .build_ptr();
    const auto only_zero = score(oeuvre_of({"Z1", "Z2"}), f->inputs());
    CHECK(only_zero.globalized.value == 1);
    CHECK(only_zero.globalized.zero_over_zero);
    CHECK(*only_zero.averaged.value == 1);
    CHECK(only_zero.averaged.zero_over_zero == 2);
    CHECK(only_zero.trace[0].flag == kFlagZeroOverZero);
    CHECK(only_zero.breakdown.at("Z").flag == kFlagZeroOverZero);

    const auto mixed = score(oeuvre_of({"Z1", "X1"}), f->inputs());
    CHECK(mixed.globalized.value == Rational(3, 2));
    CHECK_FALSE(mixed.globalized.zero_over_zero);
    CHECK(*mixed.averaged.value == Rational(5, 4));  // (1 + 6/4) / 2
    CHECK(mixed.averaged.contributing == 2);

    const ZeroConventions strict{false};
    const auto excluded = score(oeuvre_of({"Z1", "X1"}), f->inputs(strict));
    CHECK(*excluded.averaged.value == Rational(3, 2));
    CHECK(excluded.averaged.contributing == 1);
    CHECK_THROWS_WITH_AS(score(oeuvre_of({"Z1", "Z2"}), f->inputs(strict)), doctest::Contains("zero expected"),
                         Error);
  }

  TEST_CASE("positive citations against zero expectation") {
    // Baselines from a universe where the cell is uncited, scored against a
    // corpus where the same paper has since been cited.
    const auto base = FixtureBuilder()
                          .journal("J-Z", {"Z"})
                          .journal("J-X", {"X"})
                          .paper("Z1", "J-Z", 0)
                          .paper("X1", "J-X", 2)
                          .build_ptr();
    const Corpus later = freeze(Corpus({{"Z1", "J-Z", 2005, DocType::Article, 5, {}},
                                        {"X1", "J-X", 2005, DocType::Article, 2, {}}},
                                       {}));
    const ScoringInputs in{later, base->classification.assignments, base->table, {}};
    CHECK_THROWS_WITH_AS(score(oeuvre_of({"Z1"}), in), doctest::Contains("zero expected, positive actual"),
                         Error);
    const auto s = score(oeuvre_of({"Z1", "X1"}), in);
    CHECK(s.globalized.value == Rational(7, 2));
    CHECK(*s.averaged.value == 1);
    CHECK(s.averaged.contributing == 1);
    CHECK(s.averaged.zero_expected == 1);
    CHECK(s.trace[1].flag == kFlagZeroExpected);
    CHECK_FALSE(s.trace[1].ratio);
  }

  TEST_CASE("globalized ratio ignores how citations are spread; averaged does not") {
    const auto f = FixtureBuilder()
                       .journal("J-LOW", {"LOW"})
                       .journal("J-HIGH", {"HIGH"})
                       .cell_with_rate("low", "J-LOW", {4}, Rational(1))
                       .cell_with_rate("high", "J-HIGH", {4}, Rational(4))
                       .build_ptr();
    const auto before = score(oeuvre_of({"low-0", "high-0"}), f->inputs());
    auto pubs = std::vector<Publication>(f->corpus.publications().begin(), f->corpus.publications().end());
    for (auto& p : pubs) {
      if (p.id == "low-0") p.citations = 8;
      if (p.id == "high-0") p.citations = 0;
    }
    const Corpus moved = freeze(Corpus(pubs, {}));
    const ScoringInputs in{moved, f->classification.assignments, f->table, {}};
    const auto after = score(oeuvre_of({"low-0", "high-0"}), in);
    CHECK(after.globalized.value == before.globalized.value);
    CHECK(*after.averaged.value != *before.averaged.value);
  }

  TEST_CASE("property: engine agrees exactly with the oracle") {
    for (std::uint64_t seed = 1; seed <= 80; ++seed) {
      CAPTURE(seed);
      const auto w = testing::random_world(seed);
      const auto cls = classify_corpus(w.corpus, w.map, {});
      const auto table = build_baselines(w.corpus, cls.assignments);
      const ScoringInputs in{w.corpus, cls.assignments, table, {}};
      const auto ow = oracle::build(w.publications, w.map, {});
      std::optional<oracle::ScoreResult> expected;
      try {
        expected = oracle::score(w.publications, ow, w.oeuvre_ids, {});
      } catch (const std::domain_error&) {
      }
      if (!expected) {
        CHECK_THROWS_AS(score(oeuvre_of(w.oeuvre_ids), in), Error);
        continue;
      }
      const auto s = score(oeuvre_of(w.oeuvre_ids), in);
      CHECK(s.n_scored == expected->scored);
      CHECK(s.excluded.size() == expected->excluded);
      CHECK(to_exact(s.sum_expected) == oracle::str(expected->sum_expected));
      CHECK(to_exact(s.globalized.value) == oracle::str(expected->globalized));
      REQUIRE(s.averaged.value.has_value() == expected->averaged.has_value());
      if (expected->averaged) CHECK(to_exact(*s.averaged.value) == oracle::str(*expected->averaged));
      for (const auto& line : s.trace) CHECK(to_exact(line.expected) == oracle::str(expected->expected.at(line.id)));
      REQUIRE(s.breakdown.size() == expected->fields.size());
      for (const auto& [c, field] : s.breakdown) {
        const auto& of = expected->fields.at(c);
        CHECK(to_exact(field.weight) == oracle::str(of.weight));
        CHECK(to_exact(field.expected) == oracle::str(of.expected));
        REQUIRE(field.globalized.has_value() == of.globalized.has_value());
        if (of.globalized) CHECK(to_exact(*field.globalized) == oracle::str(*of.globalized));
        REQUIRE(field.averaged.has_value() == of.averaged.has_value());
        if (of.averaged) CHECK(to_exact(*field.averaged) == oracle::str(*of.averaged));
      }
    }
  }

  TEST_CASE("property: order and repetition of oeuvre ids do not matter") {
    std::mt19937_64 rng(17);
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const auto w = testing::random_world(seed);
      const auto cls = classify_corpus(w.corpus, w.map, {});
      const auto table = build_baselines(w.corpus, cls.assignments);
      const ScoringInputs in{w.corpus, cls.assignments, table, {}};
      auto shuffled = w.oeuvre_ids;
      shuffled.push_back(shuffled.front());
      std::shuffle(shuffled.begin(), shuffled.end(), rng);
      try {
        const auto a = score(oeuvre_of(w.oeuvre_ids), in);
        const auto b = score({"G", shuffled}, in);
        CHECK(a.globalized.value == b.globalized.value);
        CHECK(a.averaged.value == b.averaged.value);
        CHECK(a.trace.size() == b.trace.size());
      } catch (const Error&) {
      }
    }
  }

  TEST_CASE("property: scaling every citation count leaves both ratios unchanged") {
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const auto w = testing::random_world(seed);
      auto scaled_pubs = w.publications;
      const std::uint64_t k = 2 + seed % 5;
      for (auto& p : scaled_pubs) p.citations *= k;
      const Corpus scaled = freeze(Corpus(scaled_pubs, {}));
      const auto cls = classify_corpus(w.corpus, w.map, {});
      const auto t1 = build_baselines(w.corpus, cls.assignments);
      const auto t2 = build_baselines(scaled, cls.assignments);
      try {
        const auto a = score(oeuvre_of(w.oeuvre_ids), {w.corpus, cls.assignments, t1, {}});
        const auto b = score(oeuvre_of(w.oeuvre_ids), {scaled, cls.assignments, t2, {}});
        CHECK(a.globalized.value == b.globalized.value);
        CHECK(a.averaged.value == b.averaged.value);
      } catch (const Error&) {
      }
    }
  }
}
