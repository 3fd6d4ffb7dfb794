#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace senti {

/// Raised for malformed input files, unknown labels, unreadable models and
/// other data-level failures. The CLI maps this to exit code 2.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical class order. This order is fixed everywhere: prediction
/// vectors, confusion matrices, serialized models and manifests.
enum class Label : std::uint8_t { negative = 0, neutral = 1, positive = 2 };

inline constexpr std::size_t kNumClasses = 3;

inline constexpr std::array<std::string_view, kNumClasses> kClassNames{
    "negative", "neutral", "positive"};

inline std::string_view to_string(Label label) {
  return kClassNames[static_cast<std::size_t>(label)];
}

inline std::optional<Label> parse_label(std::string_view text) {
  for (std::size_t i = 0; i < kNumClasses; ++i) {
    if (kClassNames[i] == text) return static_cast<Label>(i);
  }
  return std::nullopt;
}

/// One ingested tweet: id is opaque, tokens are the preprocessed sequence.
struct LabeledExample {
  std::string id;
  Label label = Label::neutral;
  std::vector<std::string> tokens;
};

}  // namespace senti
