#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "senti/config.hpp"

namespace senti::cli {

/// Corpus statistics: example count, label distribution, vocabulary
/// size, observed max tweet length in tokens and, when an embedding
/// file is given, the token-occurrence OOV rate against it.
void cmd_prep(const std::filesystem::path& dataset,
              const std::filesystem::path& report_path,
              const std::optional<std::filesystem::path>& embeddings);

/// Trains one network and writes output_dir/model.svt plus
/// output_dir/history.txt.
void cmd_train(const RunConfig& config);

/// Trains the candidate pool, selects the diverse top-k and writes
/// output_dir/{candidate_NNN.svt, manifest.json, candidates.txt}.
void cmd_select(const RunConfig& config);

/// Labels an input file (two-field "id TAB text" lines; a labeled
/// three-field file is accepted and its labels ignored) with the
/// manifest's ensemble. Output lines: id TAB label TAB
/// votes_neg,votes_neu,votes_pos. The embedding file and oov_seed
/// default to the manifest's recorded config.
void cmd_predict(const std::filesystem::path& manifest_path,
                 const std::filesystem::path& input_path,
                 const std::filesystem::path& output_path,
                 const std::optional<std::filesystem::path>& embeddings);

/// Scores a predictions file against a gold dataset; ids must align
/// line by line. Returns the metrics report text (also written to
/// report_path when given).
std::string cmd_evaluate(const std::filesystem::path& gold_path,
                         const std::filesystem::path& predictions_path,
                         const std::optional<std::filesystem::path>& report_path);

}  // namespace senti::cli
