#include "fieldnorm/indicators.hpp"

#include "fieldnorm/error.hpp"

#include <algorithm>

namespace fieldnorm {

namespace {

struct ScoredPaper {
  const Publication* publication;
  const Assignment* assignment;
  Rational expected;
};

struct Resolved {
  std::vector<ScoredPaper> scored;  // oeuvre (id) order
  std::vector<Exclusion> excluded;
};

// Routes each oeuvre paper either to the scored set or to an exclusion.
Resolved resolve(const Oeuvre& oeuvre, const ScoringInputs& in) {
  in.corpus.require_frozen();
  if (oeuvre.publication_ids.empty()) throw Error("empty oeuvre", oeuvre.group_id);

  std::vector<std::string> ids = oeuvre.publication_ids;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());

  Resolved r;
  for (const auto& id : ids) {
    const Publication* p = in.corpus.find(id);
    if (!p) {
      r.excluded.push_back({id, "not in corpus"});
      continue;
    }
    if (!in.table.scope().is_citable(p->doc_type)) {
      r.excluded.push_back({id, "non-citable document type " + std::string(to_string(p->doc_type))});
      continue;
    }
    const Assignment* a = in.assignments.find(id);
    if (!a || !a->classified()) {
      r.excluded.push_back({id, "unclassified: " + (a ? a->note : std::string("no assignment"))});
      continue;
    }
    try {
      r.scored.push_back({p, a, expected_rate(*p, *a, in.table)});
    } catch (const Error& e) {
      if (e.reason() != "uncovered cell") throw;
      r.excluded.push_back({id, e.what()});
    }
  }
  if (r.scored.empty()) throw Error("no scorable papers", oeuvre.group_id);
  return r;
}

GlobalizedRatio globalized_of(const Resolved& r, const ZeroConventions& conv) {
  Rational citations;
  Rational expected;
  for (const auto& s : r.scored) {
    citations += s.publication->citations;
    expected += s.expected;
  }
  if (expected > 0) return {citations / expected, false};
  if (citations > 0) throw Error("zero expected, positive actual");
  if (!conv.zero_over_zero_is_one) throw Error("zero expected", "globalized ratio is 0/0");
  return {Rational(1), true};
}

// Per-paper c/e with the zero conventions applied; nullopt leaves the mean.
std::optional<Rational> paper_ratio(std::uint64_t citations, const Rational& expected,
                                    const ZeroConventions& conv) {
  if (expected > 0) return Rational(citations) / expected;
  if (citations == 0 && conv.zero_over_zero_is_one) return Rational(1);
  return std::nullopt;
}

AveragedRatio averaged_of(const Resolved& r, const ZeroConventions& conv) {
  AveragedRatio out;
  Rational sum;
  for (const auto& s : r.scored) {
    const auto ratio = paper_ratio(s.publication->citations, s.expected, conv);
    if (!ratio) {
      ++out.zero_expected;
      continue;
    }
    if (s.expected == 0) ++out.zero_over_zero;
    sum += *ratio;
    ++out.contributing;
  }
  if (out.contributing > 0) out.value = sum / Rational(out.contributing);
  return out;
}

std::map<std::string, FieldScore> breakdown_of(const Resolved& r, const ScoringInputs& in) {
  std::map<std::string, FieldScore> fields;
  std::map<std::string, Rational> ratio_sums;
  for (const auto& s : r.scored) {
    const Publication& p = *s.publication;
    for (const auto& [category, weight] : s.assignment->weights) {
      const Rational& rate = in.table.find(Cell{category, p.doc_type, p.year})->rate;
      FieldScore& f = fields[category];
      f.weight += weight;
      f.citations += weight * Rational(p.citations);
      f.expected += weight * rate;
      if (const auto ratio = paper_ratio(p.citations, rate, in.conventions)) {
        ratio_sums[category] += weight * *ratio;
        f.averaged_weight += weight;
      }
    }
  }
  for (auto& [category, f] : fields) {
    if (f.expected > 0) {
      f.globalized = f.citations / f.expected;
    } else if (f.citations == 0 && in.conventions.zero_over_zero_is_one) {
      f.globalized = Rational(1);
      f.flag = kFlagZeroOverZero;
    } else {
      f.flag = kFlagZeroExpected;
    }
    if (f.averaged_weight > 0) f.averaged = ratio_sums[category] / f.averaged_weight;
  }
  return fields;
}

}  // namespace

GlobalizedRatio globalized_ratio(const Oeuvre& oeuvre, const ScoringInputs& inputs) {
  return globalized_of(resolve(oeuvre, inputs), inputs.conventions);
}

AveragedRatio averaged_ratio(const Oeuvre& oeuvre, const ScoringInputs& inputs) {
  return averaged_of(resolve(oeuvre, inputs), inputs.conventions);
}

std::map<std::string, FieldScore> per_field_breakdown(const Oeuvre& oeuvre,
                                                      const ScoringInputs& inputs) {
  return breakdown_of(resolve(oeuvre, inputs), inputs);
}

OeuvreScore score(const Oeuvre& oeuvre, const ScoringInputs& inputs) {
  const Resolved r = resolve(oeuvre, inputs);

  OeuvreScore out;
  out.group_id = oeuvre.group_id;
  out.baseline_fingerprint = inputs.table.fingerprint();
  out.oeuvre_size = r.scored.size() + r.excluded.size();
  out.n_scored = r.scored.size();
  out.globalized = globalized_of(r, inputs.conventions);
  out.averaged = averaged_of(r, inputs.conventions);
  out.breakdown = breakdown_of(r, inputs);
  out.excluded = r.excluded;

  for (const auto& s : r.scored) {
    const Publication& p = *s.publication;
    out.sum_citations += p.citations;
    out.sum_expected += s.expected;

    TraceLine line{p.id, p.citations, s.expected, paper_ratio(p.citations, s.expected, inputs.conventions),
                   {}, s.assignment->method, s.assignment->weights};
    if (s.expected == 0) line.flag = line.ratio ? kFlagZeroOverZero : kFlagZeroExpected;
    out.trace.push_back(std::move(line));
  }
  return out;
}

}  // namespace fieldnorm
