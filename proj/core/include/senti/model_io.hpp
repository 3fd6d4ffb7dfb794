#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "senti/model.hpp"

namespace senti::io {

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Model file layout (all integers little-endian):
///   magic "SVT1"
///   u32 format version
///   u32 header length, then that many bytes of UTF-8 JSON carrying the
///     hyperparameters, the class-order contract, the init seed and an
///     optional provenance map
///   per tensor, in the canonical order of NetworkParams::tensors():
///     u64 rank, rank x u64 dims, IEEE-754 32-bit values (row-major)
void save_model(const model::NetworkParams& params,
                const std::filesystem::path& path,
                const std::map<std::string, std::string>& provenance = {});

struct LoadedModel {
  model::NetworkParams params;
  std::map<std::string, std::string> provenance;
};

/// Throws DataError: "not a model file" on bad magic, "unsupported
/// model file version" on version mismatch, "truncated model file" on
/// short reads.
LoadedModel load_model(const std::filesystem::path& path);

}  // namespace senti::io
