#pragma once

#include "fieldnorm/baseline.hpp"
#include "fieldnorm/classify.hpp"
#include "fieldnorm/corpus.hpp"
#include "fieldnorm/indicators.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

namespace fieldnorm::cli {

/// Settings shared by all subcommands. Every field is optional so that a
/// config file and command-line flags can be layered: flags win.
struct RunConfig {
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> categories;
  std::optional<std::filesystem::path> oeuvre;
  std::optional<std::filesystem::path> output;
  std::optional<std::filesystem::path> baseline;
  std::optional<std::filesystem::path> report;
  std::optional<std::filesystem::path> sim_config;
  std::optional<std::string> group;
  std::optional<std::string> citable;         // "Article,Letter,Review"
  std::optional<std::uint64_t> min_refs;
  std::optional<std::string> min_share;       // decimal literal
  std::optional<std::string> zero_over_zero;  // "one" | "exclude"
  std::optional<std::string> window;          // "open" | "fixed:N"
  std::optional<std::string> delimiter;       // "tab" | "comma" | single char
  std::optional<int> year_min;
  std::optional<int> year_max;
  std::optional<unsigned> threads;

  /// Fields set in `overrides` replace ours.
  void merge(const RunConfig& overrides);

  std::filesystem::path output_dir() const { return output.value_or("out"); }
  char delimiter_char() const;
  IngestOptions ingest_options() const;
  NormalizationScope scope() const;
  ReclassifyParams reclassify_params() const;
  ZeroConventions conventions() const;
};

/// "key = value" lines with '#' comments. Keys match the long flag names
/// with dashes replaced by underscores (min_refs, sim_config, ...).
RunConfig read_run_config(std::istream& in);
RunConfig read_run_config_file(const std::filesystem::path& path);

}  // namespace fieldnorm::cli
