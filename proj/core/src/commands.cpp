#include "senti/commands.hpp"

#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "senti/ensemble.hpp"
#include "senti/model_io.hpp"
#include "senti/text_pipeline.hpp"

namespace senti::cli {
namespace {

void write_echo_header(std::ostream& out,
                       const std::map<std::string, std::string>& entries) {
  for (const auto& [key, value] : entries) {
    out << "# " << key << "=" << value << "\n";
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot open output file: " + path.string());
  }
  return out;
}

embed::EmbeddingTable load_table_checked(const std::filesystem::path& path,
                                         std::uint64_t oov_seed) {
  embed::EmbeddingLoadStats stats;
  auto table = embed::load_embeddings(path, oov_seed, &stats);
  if (stats.duplicates > 0) {
    std::cerr << "warning: " << stats.duplicates
              << " duplicate embedding token(s), last occurrence kept\n";
  }
  if (stats.declared_vocab != stats.loaded_vocab) {
    std::cerr << "warning: embedding header declares " << stats.declared_vocab
              << " entries, file contains " << stats.loaded_vocab << "\n";
  }
  return table;
}

struct PredictionRow {
  std::string id;
  Label label = Label::neutral;
};

std::vector<PredictionRow> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open predictions file: " + path.string());
  }
  std::vector<PredictionRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t t1 = line.find('\t');
    if (t1 == std::string::npos) {
      throw DataError("predictions line " + std::to_string(line_no) +
                      ": expected id<TAB>label");
    }
    const std::size_t t2 = line.find('\t', t1 + 1);
    const std::string label_text =
        t2 == std::string::npos ? line.substr(t1 + 1)
                                : line.substr(t1 + 1, t2 - t1 - 1);
    const auto label = parse_label(label_text);
    if (!label) {
      throw DataError("predictions line " + std::to_string(line_no) +
                      ": unknown label '" + label_text + "'");
    }
    rows.push_back({line.substr(0, t1), *label});
  }
  return rows;
}

// Gold labels for evaluation: no tokenization, no skipping, so ids stay
// aligned with whatever produced the predictions.
std::vector<PredictionRow> read_gold_labels(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open gold file: " + path.string());
  }
  std::vector<PredictionRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t t1 = line.find('\t');
    const std::size_t t2 =
        t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      throw DataError("gold line " + std::to_string(line_no) +
                      ": expected 3 tab-separated fields");
    }
    const std::string label_text = line.substr(t1 + 1, t2 - t1 - 1);
    const auto label = parse_label(label_text);
    if (!label) {
      throw DataError("unknown label '" + label_text + "' at line " +
                      std::to_string(line_no));
    }
    rows.push_back({line.substr(0, t1), *label});
  }
  return rows;
}

}  // namespace

void cmd_prep(const std::filesystem::path& dataset,
              const std::filesystem::path& report_path,
              const std::optional<std::filesystem::path>& embeddings) {
  const auto loaded = text::load_dataset(dataset);

  std::array<std::size_t, kNumClasses> label_counts{};
  std::set<std::string> vocabulary;
  std::size_t max_tokens = 0;
  std::size_t token_total = 0;
  for (const auto& example : loaded.examples) {
    ++label_counts[static_cast<std::size_t>(example.label)];
    max_tokens = std::max(max_tokens, example.tokens.size());
    token_total += example.tokens.size();
    for (const auto& token : example.tokens) vocabulary.insert(token);
  }

  std::optional<double> oov_rate;
  if (embeddings) {
    const auto table = load_table_checked(*embeddings, /*oov_seed=*/0);
    std::size_t oov = 0;
    for (const auto& example : loaded.examples) {
      for (const auto& token : example.tokens) {
        if (!table.contains(token)) ++oov;
      }
    }
    oov_rate = token_total == 0
                   ? 0.0
                   : static_cast<double>(oov) / static_cast<double>(token_total);
  }

  auto out = open_output(report_path);
  std::map<std::string, std::string> header{{"dataset", dataset.string()}};
  if (embeddings) header["embeddings"] = embeddings->string();
  write_echo_header(out, header);
  out << "examples\t" << loaded.examples.size() << "\n";
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    out << "label_" << kClassNames[c] << "\t" << label_counts[c] << "\n";
  }
  out << "skipped_empty\t" << loaded.skipped_empty << "\n";
  out << "vocabulary\t" << vocabulary.size() << "\n";
  out << "max_tweet_tokens\t" << max_tokens << "\n";
  if (oov_rate) {
    out << "oov_rate\t" << std::fixed << std::setprecision(4) << *oov_rate
        << "\n";
  }
  if (!out.flush()) {
    throw DataError("failed writing report: " + report_path.string());
  }
}

void cmd_train(const RunConfig& config) {
  if (config.embeddings_path.empty() || config.train_path.empty() ||
      config.dev_path.empty() || config.output_dir.empty()) {
    throw DataError(
        "train requires the embeddings, train, dev and output_dir keys");
  }
  const auto table = load_table_checked(config.embeddings_path,
                                        config.oov_seed);
  const auto train_set = text::load_dataset(config.train_path);
  const auto dev_set = text::load_dataset(config.dev_path);
  if (train_set.skipped_empty > 0 || dev_set.skipped_empty > 0) {
    std::cerr << "warning: skipped " << train_set.skipped_empty
              << " empty train and " << dev_set.skipped_empty
              << " empty dev example(s)\n";
  }

  const auto result = train::train_network(
      config.hyper, table, train_set.examples, dev_set.examples,
      config.init_seed, config.train_config, config.nadam);
  if (result.dev_class_missing) {
    std::cerr << "warning: dev set is missing at least one class; its recall "
                 "counts as 0\n";
  }

  std::filesystem::create_directories(config.output_dir);
  const auto echo = config.to_map();
  io::save_model(result.best_params, config.output_dir / "model.svt", echo);

  auto out = open_output(config.output_dir / "history.txt");
  write_echo_header(out, echo);
  out << std::fixed;
  for (std::size_t e = 0; e < result.history.size(); ++e) {
    const auto& stats = result.history[e];
    out << "epoch\t" << (e + 1) << "\ttrain_loss\t" << std::setprecision(6)
        << stats.train_loss << "\tdev_avg_recall\t" << std::setprecision(4)
        << stats.dev_avg_recall << "\tdev_accuracy\t" << stats.dev_accuracy
        << "\n";
  }
  out << "best_epoch\t" << result.best_epoch << "\n";
  out << "best_dev_recall\t" << std::setprecision(4) << result.best_dev_recall
      << "\n";
  if (!out.flush()) {
    throw DataError("failed writing history");
  }
  std::cerr << "model written to "
            << (config.output_dir / "model.svt").string() << " (best epoch "
            << result.best_epoch << ")\n";
}

void cmd_select(const RunConfig& config) {
  if (config.embeddings_path.empty() || config.train_path.empty() ||
      config.dev_path.empty() || config.output_dir.empty()) {
    throw DataError(
        "select requires the embeddings, train, dev and output_dir keys");
  }
  const auto table = load_table_checked(config.embeddings_path,
                                        config.oov_seed);
  const auto train_set = text::load_dataset(config.train_path);
  const auto dev_set = text::load_dataset(config.dev_path);

  ens::GenerateConfig gen;
  gen.n_candidates = config.n_candidates;
  gen.seed_base = config.seed_base;
  gen.train_config = config.train_config;
  gen.nadam_config = config.nadam;
  gen.output_dir = config.output_dir;
  gen.jobs = config.jobs;

  const auto echo = config.to_map();
  const auto candidates = ens::generate_candidates(
      config.hyper, table, train_set.examples, dev_set.examples, gen, echo);

  auto manifest = ens::select_members(candidates, config.ensemble_k,
                                      config.agreement_threshold);
  manifest.provenance = echo;
  ens::save_manifest(manifest, config.output_dir / "manifest.json");

  auto log = open_output(config.output_dir / "candidates.txt");
  write_echo_header(log, echo);
  log << std::fixed << std::setprecision(4);
  for (const auto& c : candidates) {
    log << "candidate\t" << c.model_path << "\tinit_seed\t" << c.init_seed
        << "\tdev_recall\t" << c.dev_recall << "\n";
  }
  for (const auto& m : manifest.members) {
    log << "selected\t" << m.model_path << "\tinit_seed\t" << m.init_seed
        << "\tdev_recall\t" << m.dev_recall << "\tmax_prior_agreement\t"
        << m.max_prior_agreement << "\n";
  }
  if (!log.flush()) {
    throw DataError("failed writing candidate log");
  }
  if (manifest.even_k_warning) {
    std::cerr << "warning: k=" << manifest.k
              << " is even; an odd k avoids 3-way vote ties\n";
  }
  std::cerr << "manifest written to "
            << (config.output_dir / "manifest.json").string() << "\n";
}

void cmd_predict(const std::filesystem::path& manifest_path,
                 const std::filesystem::path& input_path,
                 const std::filesystem::path& output_path,
                 const std::optional<std::filesystem::path>& embeddings) {
  const auto manifest = ens::load_manifest(manifest_path);

  std::filesystem::path embeddings_path;
  if (embeddings) {
    embeddings_path = *embeddings;
  } else if (const auto it = manifest.provenance.find("embeddings");
             it != manifest.provenance.end() && !it->second.empty()) {
    embeddings_path = it->second;
  } else {
    throw DataError(
        "no embedding file: pass --embeddings or use a manifest that records "
        "one");
  }
  std::uint64_t oov_seed = RunConfig{}.oov_seed;
  if (const auto it = manifest.provenance.find("oov_seed");
      it != manifest.provenance.end()) {
    oov_seed = std::stoull(it->second);
  }

  const auto table = load_table_checked(embeddings_path, oov_seed);
  const auto members =
      ens::load_members(manifest, manifest_path.parent_path());

  // Input rows: id TAB text, or id TAB label TAB text (label ignored).
  std::ifstream in(input_path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open input file: " + input_path.string());
  }
  std::vector<std::string> ids;
  std::vector<std::vector<std::string>> token_seqs;
  std::size_t skipped_empty = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const std::size_t t1 = line.find('\t');
    if (t1 == std::string::npos) {
      throw DataError("input line " + std::to_string(line_no) +
                      ": expected id<TAB>text");
    }
    std::string body = line.substr(t1 + 1);
    const std::size_t t2 = body.find('\t');
    if (t2 != std::string::npos && parse_label(body.substr(0, t2))) {
      body = body.substr(t2 + 1);
    }
    auto tokens = text::normalize(text::tokenize(body));
    if (tokens.empty()) {
      ++skipped_empty;
      continue;
    }
    ids.push_back(line.substr(0, t1));
    token_seqs.push_back(std::move(tokens));
  }
  if (skipped_empty > 0) {
    std::cerr << "warning: skipped " << skipped_empty
              << " input line(s) empty after preprocessing\n";
  }

  auto out = open_output(output_path);
  write_echo_header(out, manifest.provenance);
  if (!token_seqs.empty()) {
    const auto prediction = ens::ensemble_predict(members, table, token_seqs);
    for (std::size_t i = 0; i < ids.size(); ++i) {
      const auto& tally = prediction.vote_tallies[i];
      out << ids[i] << "\t" << to_string(prediction.labels[i]) << "\t"
          << tally[0] << "," << tally[1] << "," << tally[2] << "\n";
    }
  }
  if (!out.flush()) {
    throw DataError("failed writing predictions: " + output_path.string());
  }
}

std::string cmd_evaluate(const std::filesystem::path& gold_path,
                         const std::filesystem::path& predictions_path,
                         const std::optional<std::filesystem::path>& report_path) {
  const auto gold = read_gold_labels(gold_path);
  const auto pred = read_predictions(predictions_path);

  const std::size_t n = std::min(gold.size(), pred.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (gold[i].id != pred[i].id) {
      throw DataError("id mismatch at position " + std::to_string(i + 1) +
                      ": gold '" + gold[i].id + "' vs predictions '" +
                      pred[i].id + "'");
    }
  }
  if (gold.size() != pred.size()) {
    throw DataError("gold has " + std::to_string(gold.size()) +
                    " examples but predictions has " +
                    std::to_string(pred.size()));
  }
  if (gold.empty()) {
    throw DataError("nothing to evaluate: gold file has no examples");
  }

  std::vector<Label> gold_labels, pred_labels;
  gold_labels.reserve(n);
  pred_labels.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    gold_labels.push_back(gold[i].label);
    pred_labels.push_back(pred[i].label);
  }
  const auto cm = metrics::confusion(gold_labels, pred_labels);
  const std::string text = metrics::report(
      cm, {{"gold", gold_path.string()},
           {"predictions", predictions_path.string()}});
  if (report_path) {
    auto out = open_output(*report_path);
    out << text;
    if (!out.flush()) {
      throw DataError("failed writing report: " + report_path->string());
    }
  }
  return text;
}

}  // namespace senti::cli
