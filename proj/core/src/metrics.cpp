#include "senti/metrics.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace senti::metrics {

ConfusionMatrix confusion(std::span<const Label> gold,
                          std::span<const Label> pred) {
  if (gold.size() != pred.size()) {
    throw std::invalid_argument("confusion: gold/pred length mismatch");
  }
  if (gold.empty()) {
    throw std::invalid_argument("confusion: empty label sequences");
  }
  ConfusionMatrix cm;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    cm.add(gold[i], pred[i]);
  }
  return cm;
}

std::array<double, kNumClasses> per_class_recall(const ConfusionMatrix& cm) {
  std::array<double, kNumClasses> recall{};
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const Label label = static_cast<Label>(c);
    const std::uint64_t row = cm.gold_total(label);
    recall[c] = row == 0 ? 0.0
                         : static_cast<double>(cm.count(label, label)) /
                               static_cast<double>(row);
  }
  return recall;
}

std::array<double, kNumClasses> per_class_precision(const ConfusionMatrix& cm) {
  std::array<double, kNumClasses> precision{};
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const Label label = static_cast<Label>(c);
    const std::uint64_t col = cm.pred_total(label);
    precision[c] = col == 0 ? 0.0
                            : static_cast<double>(cm.count(label, label)) /
                                  static_cast<double>(col);
  }
  return precision;
}

std::array<double, kNumClasses> f1_per_class(const ConfusionMatrix& cm) {
  const auto p = per_class_precision(cm);
  const auto r = per_class_recall(cm);
  std::array<double, kNumClasses> f1{};
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    f1[c] = (p[c] + r[c]) == 0.0 ? 0.0 : 2.0 * p[c] * r[c] / (p[c] + r[c]);
  }
  return f1;
}

std::array<bool, kNumClasses> absent_classes(const ConfusionMatrix& cm) {
  std::array<bool, kNumClasses> absent{};
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    absent[c] = cm.gold_total(static_cast<Label>(c)) == 0;
  }
  return absent;
}

double avg_recall(const ConfusionMatrix& cm) {
  const auto recall = per_class_recall(cm);
  return (recall[0] + recall[1] + recall[2]) / 3.0;
}

double accuracy(const ConfusionMatrix& cm) {
  const std::uint64_t total = cm.total();
  if (total == 0) return 0.0;
  std::uint64_t diag = 0;
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    const Label label = static_cast<Label>(c);
    diag += cm.count(label, label);
  }
  return static_cast<double>(diag) / static_cast<double>(total);
}

double macro_f1(const ConfusionMatrix& cm) {
  const auto f1 = f1_per_class(cm);
  return (f1[0] + f1[1] + f1[2]) / 3.0;
}

double f1_pn(const ConfusionMatrix& cm) {
  const auto f1 = f1_per_class(cm);
  return (f1[static_cast<std::size_t>(Label::positive)] +
          f1[static_cast<std::size_t>(Label::negative)]) /
         2.0;
}

std::string report(const ConfusionMatrix& cm,
                   const std::map<std::string, std::string>& header) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(4);
  for (const auto& [key, value] : header) {
    out << "# " << key << "=" << value << "\n";
  }
  out << "examples\t" << cm.total() << "\n";
  out << "confusion\tgold\\pred";
  for (const auto& name : kClassNames) out << "\t" << name;
  out << "\n";
  for (std::size_t g = 0; g < kNumClasses; ++g) {
    out << "confusion\t" << kClassNames[g];
    for (std::size_t p = 0; p < kNumClasses; ++p) {
      out << "\t" << cm.count(static_cast<Label>(g), static_cast<Label>(p));
    }
    out << "\n";
  }
  const auto precision = per_class_precision(cm);
  const auto recall = per_class_recall(cm);
  const auto f1 = f1_per_class(cm);
  const auto absent = absent_classes(cm);
  for (std::size_t c = 0; c < kNumClasses; ++c) {
    out << "class\t" << kClassNames[c] << "\tprecision\t" << precision[c]
        << "\trecall\t" << recall[c] << "\tf1\t" << f1[c];
    if (absent[c]) out << "\t# warning: class absent from gold";
    out << "\n";
  }
  out << "avg_recall\t" << avg_recall(cm) << "\n";
  out << "accuracy\t" << accuracy(cm) << "\n";
  out << "macro_f1\t" << macro_f1(cm) << "\n";
  out << "f1_pn\t" << f1_pn(cm) << "\n";
  return out.str();
}

}  // namespace senti::metrics
