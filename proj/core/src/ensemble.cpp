#include "senti/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "senti/model_io.hpp"
#include "senti/rng.hpp"

namespace senti::ens {

double agreement(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) {
    throw std::invalid_argument("agreement: length mismatch");
  }
  if (a.empty()) {
    throw std::invalid_argument("agreement: empty label sequences");
  }
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) ++same;
  }
  return static_cast<double>(same) / static_cast<double>(a.size());
}

EnsembleManifest select_members(std::vector<Candidate> candidates,
                                std::size_t k, double threshold) {
  if (k == 0) throw std::invalid_argument("select_members: k must be >= 1");
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.dev_recall != b.dev_recall) {
                return a.dev_recall > b.dev_recall;
              }
              return a.init_seed < b.init_seed;
            });

  EnsembleManifest manifest;
  manifest.k = k;
  manifest.agreement_threshold = threshold;
  manifest.even_k_warning = (k % 2 == 0);

  std::vector<const Candidate*> accepted;
  for (const Candidate& c : candidates) {
    if (accepted.size() == k) break;
    double max_agreement = 0.0;
    bool diverse = true;
    for (const Candidate* prior : accepted) {
      const double a = agreement(c.dev_predictions, prior->dev_predictions);
      max_agreement = std::max(max_agreement, a);
      if (a > threshold) {
        diverse = false;
        break;
      }
    }
    if (!diverse) continue;
    accepted.push_back(&c);
    manifest.members.push_back(
        {c.model_path, c.init_seed, c.dev_recall, max_agreement});
  }

  if (manifest.members.size() < k) {
    std::ostringstream msg;
    msg << "fewer than k mutually diverse candidates: only "
        << manifest.members.size() << " of " << k
        << " selectable at threshold " << threshold;
    throw DataError(msg.str());
  }
  return manifest;
}

Label majority_vote(std::span<const Label> labels,
                    std::span<const std::array<double, kNumClasses>> probs) {
  if (labels.empty()) {
    throw std::invalid_argument("majority_vote: no voters");
  }
  if (labels.size() != probs.size()) {
    throw std::invalid_argument("majority_vote: labels/probs misaligned");
  }

  std::array<int, kNumClasses> votes{};
  for (Label l : labels) ++votes[static_cast<std::size_t>(l)];
  const int top = *std::max_element(votes.begin(), votes.end());

  std::array<double, kNumClasses> mass{};
  for (const auto& p : probs) {
    for (std::size_t c = 0; c < kNumClasses; ++c) mass[c] += p[c];
  }

  Label winner = Label::negative;
  bool have_winner = false;
  double winner_mass = 0.0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    if (votes[c] != top) continue;
    if (!have_winner || mass[c] > winner_mass) {
      winner = static_cast<Label>(c);
      winner_mass = mass[c];
      have_winner = true;
    }
    // equal mass keeps the earlier class in the fixed order
  }
  return winner;
}

EnsemblePrediction ensemble_predict(
    std::span<const model::NetworkParams> members,
    const embed::EmbeddingTable& table,
    std::span<const std::vector<std::string>> token_seqs) {
  if (members.empty()) {
    throw std::invalid_argument("ensemble_predict: no members");
  }
  for (const auto& member : members) {
    if (!(member.hyper() == members.front().hyper())) {
      throw DataError("ensemble member hyperparameter mismatch");
    }
  }
  if (table.dim() != members.front().hyper().d) {
    throw DataError("ensemble_predict: embedding dimension mismatch");
  }

  EnsemblePrediction out;
  out.labels.reserve(token_seqs.size());
  out.vote_tallies.reserve(token_seqs.size());
  std::mt19937_64 unused_rng(0);
  const std::size_t maxl = members.front().hyper().maxl;

  std::vector<Label> member_labels(members.size());
  std::vector<std::array<double, kNumClasses>> member_probs(members.size());
  for (const auto& tokens : token_seqs) {
    const auto input = embed::build_input_matrix(table, tokens, maxl);
    for (std::size_t i = 0; i < members.size(); ++i) {
      member_probs[i] = model::forward(members[i], input,
                                       /*train_mode=*/false, unused_rng);
      member_labels[i] = model::predict_label(member_probs[i]);
    }
    out.labels.push_back(majority_vote(member_labels, member_probs));
    std::array<int, kNumClasses> tally{};
    for (Label l : member_labels) ++tally[static_cast<std::size_t>(l)];
    out.vote_tallies.push_back(tally);
  }
  return out;
}

std::vector<model::NetworkParams> load_members(
    const EnsembleManifest& manifest, const std::filesystem::path& base_dir) {
  std::vector<model::NetworkParams> members;
  members.reserve(manifest.members.size());
  for (const auto& member : manifest.members) {
    std::filesystem::path p(member.model_path);
    if (p.is_relative()) p = base_dir / p;
    members.push_back(io::load_model(p).params);
  }
  for (const auto& member : members) {
    if (!(member.hyper() == members.front().hyper())) {
      throw DataError("ensemble member hyperparameter mismatch");
    }
  }
  return members;
}

void save_manifest(const EnsembleManifest& manifest,
                   const std::filesystem::path& path) {
  nlohmann::json j;
  j["version"] = manifest.version;
  j["k"] = manifest.k;
  j["agreement_threshold"] = manifest.agreement_threshold;
  j["class_order"] = {kClassNames[0], kClassNames[1], kClassNames[2]};
  j["even_k_warning"] = manifest.even_k_warning;
  nlohmann::json members = nlohmann::json::array();
  for (const auto& m : manifest.members) {
    members.push_back({{"model_path", m.model_path},
                       {"init_seed", m.init_seed},
                       {"dev_recall", m.dev_recall},
                       {"max_prior_agreement", m.max_prior_agreement}});
  }
  j["members"] = members;
  if (!manifest.provenance.empty()) j["provenance"] = manifest.provenance;

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot open manifest for writing: " + path.string());
  }
  out << j.dump(2) << "\n";
  if (!out.flush()) {
    throw DataError("failed writing manifest: " + path.string());
  }
}

EnsembleManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open manifest: " + path.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception&) {
    throw DataError("corrupt manifest: " + path.string());
  }
  EnsembleManifest manifest;
  try {
    manifest.version = j.at("version").get<std::uint32_t>();
    if (manifest.version != 1) {
      throw DataError("unsupported manifest version " +
                      std::to_string(manifest.version));
    }
    const auto order = j.at("class_order").get<std::vector<std::string>>();
    if (order.size() != kNumClasses || order[0] != kClassNames[0] ||
        order[1] != kClassNames[1] || order[2] != kClassNames[2]) {
      throw DataError("manifest class order does not match this build");
    }
    manifest.k = j.at("k").get<std::size_t>();
    manifest.agreement_threshold = j.at("agreement_threshold").get<double>();
    manifest.even_k_warning = j.value("even_k_warning", false);
    for (const auto& m : j.at("members")) {
      manifest.members.push_back({m.at("model_path").get<std::string>(),
                                  m.at("init_seed").get<std::uint64_t>(),
                                  m.at("dev_recall").get<double>(),
                                  m.at("max_prior_agreement").get<double>()});
    }
    if (j.contains("provenance")) {
      manifest.provenance =
          j.at("provenance").get<std::map<std::string, std::string>>();
    }
  } catch (const nlohmann::json::exception&) {
    throw DataError("corrupt manifest: " + path.string());
  }
  if (manifest.members.empty()) {
    throw DataError("manifest lists no members: " + path.string());
  }
  return manifest;
}

namespace {

std::string candidate_filename(std::size_t index) {
  std::ostringstream name;
  name << "candidate_" << std::setw(3) << std::setfill('0') << index << ".svt";
  return name.str();
}

}  // namespace

std::vector<Candidate> generate_candidates(
    const model::Hyperparams& hyper, const embed::EmbeddingTable& table,
    std::span<const LabeledExample> train_data,
    std::span<const LabeledExample> dev_data, const GenerateConfig& config,
    const std::map<std::string, std::string>& provenance) {
  if (config.n_candidates == 0) {
    throw std::invalid_argument("generate_candidates: n_candidates must be >= 1");
  }
  std::filesystem::create_directories(config.output_dir);

  std::vector<Label> dev_gold;
  dev_gold.reserve(dev_data.size());
  for (const auto& example : dev_data) dev_gold.push_back(example.label);

  std::vector<Candidate> candidates(config.n_candidates);
  std::vector<std::string> failures(config.n_candidates);
  std::atomic<std::size_t> next{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= config.n_candidates) return;
      try {
        const std::uint64_t init_seed = config.seed_base + i;
        train::TrainConfig tc = config.train_config;
        tc.shuffle_seed = rng::mix_seed(tc.shuffle_seed, init_seed);
        auto result = train::train_network(hyper, table, train_data, dev_data,
                                           init_seed, tc, config.nadam_config);
        // Evaluate at the precision the model file stores, so the
        // recorded recall matches a reload of the saved artifact.
        result.best_params.round_to_f32();
        const auto preds =
            train::predict_dataset(result.best_params, table, dev_data);
        const auto cm = metrics::confusion(dev_gold, preds);

        const std::string filename = candidate_filename(i);
        io::save_model(result.best_params, config.output_dir / filename,
                       provenance);
        candidates[i] =
            Candidate{filename, init_seed, metrics::avg_recall(cm), preds};
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };

  const std::size_t jobs =
      std::max<std::size_t>(1, std::min(config.jobs, config.n_candidates));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < config.n_candidates; ++i) {
    if (!failures[i].empty()) {
      throw DataError("training candidate " + std::to_string(i) +
                      " failed: " + failures[i]);
    }
  }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              if (a.dev_recall != b.dev_recall) {
                return a.dev_recall > b.dev_recall;
              }
              return a.init_seed < b.init_seed;
            });
  return candidates;
}

}  // namespace senti::ens
