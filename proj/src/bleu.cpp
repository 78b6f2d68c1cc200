#include "monoses/bleu.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

namespace monoses {

BleuStats& BleuStats::operator+=(const BleuStats& other) {
  for (int n = 0; n < kBleuOrder; n++) {
    matches[n] += other.matches[n];
    counts[n] += other.counts[n];
  }
  hyp_len += other.hyp_len;
  ref_len += other.ref_len;
  return *this;
}

BleuStats& BleuStats::operator-=(const BleuStats& other) {
  for (int n = 0; n < kBleuOrder; n++) {
    matches[n] -= other.matches[n];
    counts[n] -= other.counts[n];
  }
  hyp_len -= other.hyp_len;
  ref_len -= other.ref_len;
  return *this;
}

namespace {

std::unordered_map<std::string, long long> ngram_counts(const Sentence& sentence, int n) {
  std::unordered_map<std::string, long long> out;
  if (static_cast<int>(sentence.size()) < n) return out;
  for (size_t i = 0; i + n <= sentence.size(); i++) {
    std::string key = sentence[i];
    for (int k = 1; k < n; k++) {
      key += ' ';
      key += sentence[i + k];
    }
    out[key]++;
  }
  return out;
}

}  // namespace

BleuStats bleu_stats(const Sentence& hypothesis, const Sentence& reference) {
  BleuStats stats;
  stats.hyp_len = static_cast<long long>(hypothesis.size());
  stats.ref_len = static_cast<long long>(reference.size());
  for (int n = 1; n <= kBleuOrder; n++) {
    auto hyp = ngram_counts(hypothesis, n);
    if (hyp.empty()) continue;
    auto ref = ngram_counts(reference, n);
    long long total = 0, matched = 0;
    for (const auto& [gram, count] : hyp) {
      total += count;
      auto it = ref.find(gram);
      if (it != ref.end()) matched += std::min(count, it->second);
    }
    stats.counts[n - 1] = total;
    stats.matches[n - 1] = matched;
  }
  return stats;
}

BleuReport bleu_report(const BleuStats& stats, BleuSmoothing smoothing) {
  check(stats.hyp_len > 0, "corpus BLEU requires non-empty hypothesis");
  BleuReport report;
  report.hyp_len = stats.hyp_len;
  report.ref_len = stats.ref_len;
  report.brevity_penalty =
      std::exp(std::min(0.0, 1.0 - static_cast<double>(stats.ref_len) / stats.hyp_len));
  double log_precision = 0.0;
  bool zero = false;
  for (int n = 0; n < kBleuOrder; n++) {
    long long m = stats.matches[n];
    long long c = stats.counts[n];
    if (smoothing == BleuSmoothing::kPlusOneHigherOrders && n >= 1) {
      m += 1;
      c += 1;
    }
    report.precisions[n] = c > 0 ? static_cast<double>(m) / c : 0.0;
    if (report.precisions[n] <= 0.0)
      zero = true;
    else
      log_precision += std::log(report.precisions[n]);
  }
  report.bleu = zero ? 0.0 : report.brevity_penalty * std::exp(log_precision / kBleuOrder);
  return report;
}

double corpus_bleu(const BleuStats& stats, BleuSmoothing smoothing) {
  return bleu_report(stats, smoothing).bleu;
}

}  // namespace monoses
