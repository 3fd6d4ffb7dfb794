#include "senti/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace senti::cli {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && (s[b] == ' ' || s[b] == '\t')) ++b;
  while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t')) --e;
  return std::string(s.substr(b, e - b));
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw DataError("config key '" + key + "': expected an integer, got '" +
                    value + "'");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || ptr != value.data() + value.size()) {
    throw DataError("config key '" + key + "': expected a number, got '" +
                    value + "'");
  }
  return out;
}

std::vector<std::size_t> parse_size_list(const std::string& key,
                                         const std::string& value) {
  std::vector<std::size_t> out;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) {
    out.push_back(static_cast<std::size_t>(parse_u64(key, trim(item))));
  }
  if (out.empty()) {
    throw DataError("config key '" + key + "': expected a comma list");
  }
  return out;
}

// Shortest round-trip formatting, stable across runs.
std::string format_double(double v) { return nlohmann::json(v).dump(); }

std::string format_size_list(const std::vector<std::size_t>& values) {
  std::ostringstream out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out << ",";
    out << values[i];
  }
  return out.str();
}

}  // namespace

const std::vector<std::string>& RunConfig::known_keys() {
  static const std::vector<std::string> keys{
      "d",           "maxl",           "filter_sizes", "feature_maps",
      "dropout_p",   "fc_units",       "lr",           "beta1",
      "beta2",       "eps",            "schedule_decay",
      "batch_size",  "max_epochs",     "shuffle_seed", "init_seed",
      "oov_seed",    "seed_base",      "n_candidates", "k",
      "agreement_threshold",           "jobs",         "embeddings",
      "train",       "dev",            "output_dir"};
  return keys;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "d") {
    hyper.d = parse_u64(key, value);
  } else if (key == "maxl") {
    hyper.maxl = parse_u64(key, value);
  } else if (key == "filter_sizes") {
    hyper.filter_sizes = parse_size_list(key, value);
  } else if (key == "feature_maps") {
    hyper.feature_maps = parse_u64(key, value);
  } else if (key == "dropout_p") {
    hyper.dropout_p = parse_double(key, value);
  } else if (key == "fc_units") {
    hyper.fc_units = parse_u64(key, value);
  } else if (key == "lr") {
    nadam.lr = parse_double(key, value);
  } else if (key == "beta1") {
    nadam.beta1 = parse_double(key, value);
  } else if (key == "beta2") {
    nadam.beta2 = parse_double(key, value);
  } else if (key == "eps") {
    nadam.eps = parse_double(key, value);
  } else if (key == "schedule_decay") {
    nadam.schedule_decay = parse_double(key, value);
  } else if (key == "batch_size") {
    train_config.batch_size = parse_u64(key, value);
  } else if (key == "max_epochs") {
    train_config.max_epochs = parse_u64(key, value);
  } else if (key == "shuffle_seed") {
    train_config.shuffle_seed = parse_u64(key, value);
  } else if (key == "init_seed") {
    init_seed = parse_u64(key, value);
  } else if (key == "oov_seed") {
    oov_seed = parse_u64(key, value);
  } else if (key == "seed_base") {
    seed_base = parse_u64(key, value);
  } else if (key == "n_candidates") {
    n_candidates = parse_u64(key, value);
  } else if (key == "k") {
    ensemble_k = parse_u64(key, value);
  } else if (key == "agreement_threshold") {
    agreement_threshold = parse_double(key, value);
  } else if (key == "jobs") {
    jobs = parse_u64(key, value);
  } else if (key == "embeddings") {
    embeddings_path = value;
  } else if (key == "train") {
    train_path = value;
  } else if (key == "dev") {
    dev_path = value;
  } else if (key == "output_dir") {
    output_dir = value;
  } else {
    throw DataError("unknown config key '" + key + "'");
  }
}

std::map<std::string, std::string> RunConfig::to_map() const {
  std::map<std::string, std::string> out;
  out["d"] = std::to_string(hyper.d);
  out["maxl"] = std::to_string(hyper.maxl);
  out["filter_sizes"] = format_size_list(hyper.filter_sizes);
  out["feature_maps"] = std::to_string(hyper.feature_maps);
  out["dropout_p"] = format_double(hyper.dropout_p);
  out["fc_units"] = std::to_string(hyper.fc_units);
  out["lr"] = format_double(nadam.lr);
  out["beta1"] = format_double(nadam.beta1);
  out["beta2"] = format_double(nadam.beta2);
  out["eps"] = format_double(nadam.eps);
  out["schedule_decay"] = format_double(nadam.schedule_decay);
  out["batch_size"] = std::to_string(train_config.batch_size);
  out["max_epochs"] = std::to_string(train_config.max_epochs);
  out["shuffle_seed"] = std::to_string(train_config.shuffle_seed);
  out["init_seed"] = std::to_string(init_seed);
  out["oov_seed"] = std::to_string(oov_seed);
  out["seed_base"] = std::to_string(seed_base);
  out["n_candidates"] = std::to_string(n_candidates);
  out["k"] = std::to_string(ensemble_k);
  out["agreement_threshold"] = format_double(agreement_threshold);
  out["jobs"] = std::to_string(jobs);
  out["embeddings"] = embeddings_path.string();
  out["train"] = train_path.string();
  out["dev"] = dev_path.string();
  out["output_dir"] = output_dir.string();
  return out;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open config file: " + path.string());
  }
  RunConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw DataError("config line " + std::to_string(line_no) +
                      ": expected key=value");
    }
    config.set(trim(stripped.substr(0, eq)), trim(stripped.substr(eq + 1)));
  }
  return config;
}

}  // namespace senti::cli
