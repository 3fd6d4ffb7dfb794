// senti17: prep / train / select / predict / evaluate workflows over the
// ten-voter convolutional sentiment classifier.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "senti/commands.hpp"
#include "senti/config.hpp"
#include "senti/types.hpp"

namespace {

// Remaining tokens after CLI11 parsing are treated as "--key value"
// config overrides.
void apply_overrides(senti::cli::RunConfig& config,
                     const std::vector<std::string>& extras) {
  // CLI11 returns remaining args reversed.
  std::vector<std::string> args(extras.rbegin(), extras.rend());
  for (std::size_t i = 0; i < args.size(); i += 2) {
    const std::string& flag = args[i];
    if (flag.size() <= 2 || flag.rfind("--", 0) != 0) {
      throw CLI::ValidationError("expected --key value overrides, got '" +
                                 flag + "'");
    }
    if (i + 1 >= args.size()) {
      throw CLI::ValidationError("override '" + flag + "' is missing a value");
    }
    config.set(flag.substr(2), args[i + 1]);
  }
}

senti::cli::RunConfig load_config(const std::string& config_file,
                                  const std::vector<std::string>& extras) {
  senti::cli::RunConfig config;
  if (!config_file.empty()) {
    config = senti::cli::RunConfig::from_file(config_file);
  }
  apply_overrides(config, extras);
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Senti17 convolutional sentiment-ensemble toolkit"};
  app.require_subcommand(1);

  std::string dataset, report, config_file;
  std::string manifest, input, output, gold, predictions;
  std::string embeddings;

  auto* prep = app.add_subcommand("prep", "Corpus statistics");
  prep->add_option("--dataset", dataset, "Labeled corpus (id/label/text TSV)")
      ->required();
  prep->add_option("--report", report, "Report output path")->required();
  prep->add_option("--embeddings", embeddings,
                   "Embedding file for the OOV rate");

  auto* train = app.add_subcommand("train", "Train a single network");
  train->add_option("-c,--config", config_file, "key=value config file");
  train->allow_extras();

  auto* select = app.add_subcommand(
      "select", "Train the candidate pool and select the ensemble");
  select->add_option("-c,--config", config_file, "key=value config file");
  select->allow_extras();

  auto* predict = app.add_subcommand("predict", "Label tweets with an ensemble");
  predict->add_option("--manifest", manifest, "Ensemble manifest")->required();
  predict->add_option("--input", input, "id TAB text input file")->required();
  predict->add_option("--output", output, "Predictions output path")
      ->required();
  predict->add_option("--embeddings", embeddings,
                      "Override the manifest's embedding file");

  auto* evaluate = app.add_subcommand("evaluate", "Score predictions");
  evaluate->add_option("--gold", gold, "Gold dataset (id/label/text TSV)")
      ->required();
  evaluate->add_option("--predictions", predictions, "Predictions file")
      ->required();
  evaluate->add_option("--report", report, "Also write the report here");

  try {
    app.parse(argc, argv);

    std::optional<std::filesystem::path> embeddings_opt;
    if (!embeddings.empty()) embeddings_opt = embeddings;

    if (prep->parsed()) {
      senti::cli::cmd_prep(dataset, report, embeddings_opt);
    } else if (train->parsed()) {
      senti::cli::cmd_train(load_config(config_file, train->remaining()));
    } else if (select->parsed()) {
      senti::cli::cmd_select(load_config(config_file, select->remaining()));
    } else if (predict->parsed()) {
      senti::cli::cmd_predict(manifest, input, output, embeddings_opt);
    } else if (evaluate->parsed()) {
      std::optional<std::filesystem::path> report_opt;
      if (!report.empty()) report_opt = report;
      std::cout << senti::cli::cmd_evaluate(gold, predictions, report_opt);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  } catch (const senti::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
