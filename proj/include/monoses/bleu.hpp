#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "monoses/util.hpp"

namespace monoses {

constexpr int kBleuOrder = 4;

// Clipped n-gram sufficient statistics, additive under corpus concatenation.
struct BleuStats {
  std::array<long long, kBleuOrder> matches{};
  std::array<long long, kBleuOrder> counts{};
  long long hyp_len = 0;
  long long ref_len = 0;

  BleuStats& operator+=(const BleuStats& other);
  BleuStats& operator-=(const BleuStats& other);
  friend BleuStats operator+(BleuStats a, const BleuStats& b) { return a += b; }
};

enum class BleuSmoothing { kNone, kPlusOneHigherOrders };

BleuStats bleu_stats(const Sentence& hypothesis, const Sentence& reference);

// Geometric mean of the 4 clipped precisions times the brevity penalty.
// kPlusOneHigherOrders adds 1 to matches and counts for n >= 2 only.
double corpus_bleu(const BleuStats& stats, BleuSmoothing smoothing = BleuSmoothing::kNone);

struct BleuReport {
  double bleu = 0.0;
  double brevity_penalty = 1.0;
  std::array<double, kBleuOrder> precisions{};
  long long hyp_len = 0;
  long long ref_len = 0;
};

BleuReport bleu_report(const BleuStats& stats, BleuSmoothing smoothing = BleuSmoothing::kNone);

}  // namespace monoses
