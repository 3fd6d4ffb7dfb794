#include "senti/model_io.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include <json.hpp>

namespace senti::io {
namespace {

constexpr std::array<char, 4> kMagic{'S', 'V', 'T', '1'};

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

void put_f32(std::ostream& out, float v) {
  const auto bits = std::bit_cast<std::uint32_t>(v);
  put_u32(out, bits);
}

void read_exact(std::istream& in, char* buffer, std::size_t n) {
  in.read(buffer, static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) {
    throw DataError("truncated model file");
  }
}

std::uint32_t get_u32(std::istream& in) {
  std::array<char, 4> b;
  read_exact(in, b.data(), b.size());
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(b[i]))
         << (8 * i);
  }
  return v;
}

std::uint64_t get_u64(std::istream& in) {
  std::array<char, 8> b;
  read_exact(in, b.data(), b.size());
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(b[i]))
         << (8 * i);
  }
  return v;
}

float get_f32(std::istream& in) {
  return std::bit_cast<float>(get_u32(in));
}

nlohmann::json header_json(const model::NetworkParams& params,
                           const std::map<std::string, std::string>& prov) {
  const model::Hyperparams& h = params.hyper();
  nlohmann::json j;
  j["class_order"] = {kClassNames[0], kClassNames[1], kClassNames[2]};
  j["d"] = h.d;
  j["maxl"] = h.maxl;
  j["filter_sizes"] = h.filter_sizes;
  j["f"] = h.feature_maps;
  j["dropout_p"] = h.dropout_p;
  j["fc_units"] = h.fc_units;
  j["init_seed"] = params.init_seed();
  if (!prov.empty()) j["provenance"] = prov;
  return j;
}

}  // namespace

void save_model(const model::NetworkParams& params,
                const std::filesystem::path& path,
                const std::map<std::string, std::string>& provenance) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw DataError("cannot open model file for writing: " + path.string());
  }
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kModelFormatVersion);

  const std::string header = header_json(params, provenance).dump();
  put_u32(out, static_cast<std::uint32_t>(header.size()));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));

  for (const auto& tensor : params.tensors()) {
    put_u64(out, tensor.dims.size());
    for (std::size_t dim : tensor.dims) put_u64(out, dim);
    const auto values = params.flat().subspan(tensor.offset, tensor.size);
    for (double v : values) put_f32(out, static_cast<float>(v));
  }
  out.flush();
  if (!out) {
    throw DataError("failed writing model file: " + path.string());
  }
}

LoadedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw DataError("cannot open model file: " + path.string());
  }

  std::array<char, 4> magic;
  read_exact(in, magic.data(), magic.size());
  if (magic != kMagic) {
    throw DataError("not a model file: " + path.string());
  }
  const std::uint32_t version = get_u32(in);
  if (version != kModelFormatVersion) {
    throw DataError("unsupported model file version " +
                    std::to_string(version));
  }

  const std::uint32_t header_len = get_u32(in);
  std::string header(header_len, '\0');
  read_exact(in, header.data(), header.size());

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(header);
  } catch (const nlohmann::json::exception&) {
    throw DataError("corrupt model header");
  }

  LoadedModel loaded;
  try {
    const auto order = j.at("class_order").get<std::vector<std::string>>();
    if (order.size() != kNumClasses || order[0] != kClassNames[0] ||
        order[1] != kClassNames[1] || order[2] != kClassNames[2]) {
      throw DataError("model class order does not match this build");
    }
    model::Hyperparams hyper;
    hyper.d = j.at("d").get<std::size_t>();
    hyper.maxl = j.at("maxl").get<std::size_t>();
    hyper.filter_sizes = j.at("filter_sizes").get<std::vector<std::size_t>>();
    hyper.feature_maps = j.at("f").get<std::size_t>();
    hyper.dropout_p = j.at("dropout_p").get<double>();
    hyper.fc_units = j.at("fc_units").get<std::size_t>();
    hyper.validate();
    loaded.params =
        model::NetworkParams(hyper, j.at("init_seed").get<std::uint64_t>());
    if (j.contains("provenance")) {
      loaded.provenance =
          j.at("provenance").get<std::map<std::string, std::string>>();
    }
  } catch (const nlohmann::json::exception&) {
    throw DataError("corrupt model header");
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("invalid model header: ") + e.what());
  }

  auto flat = loaded.params.flat();
  for (const auto& tensor : loaded.params.tensors()) {
    const std::uint64_t rank = get_u64(in);
    if (rank != tensor.dims.size()) {
      throw DataError("model tensor rank mismatch for " + tensor.name);
    }
    for (std::size_t dim : tensor.dims) {
      if (get_u64(in) != dim) {
        throw DataError("model tensor shape mismatch for " + tensor.name);
      }
    }
    for (std::size_t i = 0; i < tensor.size; ++i) {
      flat[tensor.offset + i] = static_cast<double>(get_f32(in));
    }
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw DataError("trailing bytes in model file");
  }
  return loaded;
}

}  // namespace senti::io
