#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <span>
#include <string>

#include "senti/types.hpp"

namespace senti::metrics {

/// 3x3 counts, rows = gold class, columns = predicted class, in the
/// canonical order negative/neutral/positive.
class ConfusionMatrix {
 public:
  void add(Label gold, Label pred, std::uint64_t n = 1) {
    cells_[index(gold, pred)] += n;
  }

  std::uint64_t count(Label gold, Label pred) const {
    return cells_[index(gold, pred)];
  }

  std::uint64_t total() const {
    std::uint64_t sum = 0;
    for (std::uint64_t c : cells_) sum += c;
    return sum;
  }

  std::uint64_t gold_total(Label gold) const {
    std::uint64_t sum = 0;
    for (std::size_t p = 0; p < kNumClasses; ++p) {
      sum += cells_[static_cast<std::size_t>(gold) * kNumClasses + p];
    }
    return sum;
  }

  std::uint64_t pred_total(Label pred) const {
    std::uint64_t sum = 0;
    for (std::size_t g = 0; g < kNumClasses; ++g) {
      sum += cells_[g * kNumClasses + static_cast<std::size_t>(pred)];
    }
    return sum;
  }

 private:
  static std::size_t index(Label gold, Label pred) {
    return static_cast<std::size_t>(gold) * kNumClasses +
           static_cast<std::size_t>(pred);
  }
  std::array<std::uint64_t, kNumClasses * kNumClasses> cells_{};
};

/// Tallies gold/pred pairs. Throws std::invalid_argument on length
/// mismatch or empty input.
ConfusionMatrix confusion(std::span<const Label> gold,
                          std::span<const Label> pred);

/// Per-class diagonal / row sum; an absent class (row sum 0) scores 0.
std::array<double, kNumClasses> per_class_recall(const ConfusionMatrix& cm);

/// Per-class diagonal / column sum; a never-predicted class scores 0.
std::array<double, kNumClasses> per_class_precision(const ConfusionMatrix& cm);

/// 2PR/(P+R), defined 0 when P+R = 0.
std::array<double, kNumClasses> f1_per_class(const ConfusionMatrix& cm);

std::array<bool, kNumClasses> absent_classes(const ConfusionMatrix& cm);

/// Macro-average recall, the official ranking measure.
double avg_recall(const ConfusionMatrix& cm);

double accuracy(const ConfusionMatrix& cm);

/// Mean F1 over all three classes.
double macro_f1(const ConfusionMatrix& cm);

/// Mean of F1(positive) and F1(negative), the SemEval F-score reading.
double f1_pn(const ConfusionMatrix& cm);

/// Structured text report: counts, per-class P/R/F1 and the summary
/// metrics, all with 4 fractional digits. header lines are echoed as
/// "# key=value" for provenance.
std::string report(const ConfusionMatrix& cm,
                   const std::map<std::string, std::string>& header = {});

}  // namespace senti::metrics
