#pragma once

#include "fieldnorm/baseline.hpp"
#include "fieldnorm/classify.hpp"
#include "fieldnorm/corpus.hpp"
#include "fieldnorm/indicators.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <string>
#include <string_view>

namespace fieldnorm {

inline constexpr std::string_view kReportFormat = "fieldnorm-report/1";
inline constexpr std::size_t kHumanReportWidth = 100;

struct CorpusSummary {
  std::size_t publications = 0;
  std::size_t citable = 0;
  std::size_t journal_categories = 0;
  std::size_t reference_analysis = 0;
  std::size_t unclassified = 0;
  std::size_t baseline_papers = 0;
  std::size_t baseline_cells = 0;
  std::size_t sparse_cells = 0;
};

CorpusSummary summarize_corpus(const Corpus& corpus, const Classification& classification,
                               const BaselineTable& table);

/// Text printed at the top of every human report.
std::string default_caveat();

/// ISO-8601 UTC, seconds resolution.
std::string utc_timestamp();

struct ReportMeta {
  std::string caveat = default_caveat();  // never empty
  std::string generated_at;
  std::map<std::string, std::string> input_digests;  // name -> SHA-256 hex
  ReclassifyParams params;
  NormalizationScope scope;
  ZeroConventions conventions;
  CitationWindow window;
  CorpusSummary summary;
};

/// A rendered assessment. The machine document is the single source of
/// every number; the human text is derived from it.
class ReportBundle {
 public:
  ReportBundle() = default;
  explicit ReportBundle(nlohmann::ordered_json document) : document_(std::move(document)) {}

  const nlohmann::ordered_json& document() const { return document_; }
  nlohmann::ordered_json& document() { return document_; }

  std::string machine() const;
  std::string human() const;

  std::string group_id() const;
  std::string baseline_fingerprint() const;
  std::vector<std::string> oeuvre_ids() const;  // trace + excluded, sorted
  std::map<std::string, std::string> input_digests() const;
  ReclassifyParams params() const;
  NormalizationScope scope() const;
  ZeroConventions conventions() const;

 private:
  nlohmann::ordered_json document_;
};

/// Builds both renderings of a score. Throws Error("invalid report") if the
/// caveat is empty.
ReportBundle render(const OeuvreScore& score, const ReportMeta& meta);

/// Parses a machine report. Throws Error("malformed report").
ReportBundle parse_report(std::string_view machine_text);

struct VerificationResult {
  bool passed = false;
  std::string field;   // e.g. "trace[P2].citations"; empty on pass
  std::string detail;

  explicit operator bool() const { return passed; }
};

/// Recomputes the score from the original inputs and compares it with the
/// bundle field by field. Timestamp, caveat and input digests are not
/// recomputable and are skipped; the CLI checks digests against files.
VerificationResult verify_bundle(const ReportBundle& bundle, const Corpus& corpus,
                                 const CategoryMap& map, const BaselineTable& table);

}  // namespace fieldnorm
