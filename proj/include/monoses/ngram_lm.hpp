#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "monoses/util.hpp"

namespace monoses {

// Interpolated modified Kneser-Ney n-gram model. Probabilities and backoff
// weights are stored in log10 (ARPA convention); entropy is reported in bits.
//
// Invariant: for every observed history h, the backoff-chained conditional
// distribution sums to 1 over the full unigram vocabulary (including <unk> and
// </s>, excluding <s>).
class NgramLm {
 public:
  static constexpr uint32_t kUnkId = 0;
  static constexpr uint32_t kBosId = 1;
  static constexpr uint32_t kEosId = 2;

  struct Entry {
    double log10_prob = 0.0;
    double log10_bow = 0.0;
  };

  static NgramLm train(const std::vector<Sentence>& corpus, int order,
                       double unk_floor = 1e-7);

  int order() const { return order_; }
  size_t vocab_size() const { return tokens_.size(); }
  uint32_t id(const std::string& token) const;
  const std::string& token(uint32_t id) const { return tokens_[id]; }

  // p(word | context) with standard backoff chaining, log10. The context may
  // be any length; only the last order-1 tokens are used.
  double cond_log10(std::span<const uint32_t> context, uint32_t word) const;

  // log10 probability of the <s>-prefixed, </s>-suffixed token sequence.
  double sentence_log10(const Sentence& sentence) const;

  // Cross-entropy in bits per scored token; scored tokens include the </s>
  // marker of every sentence.
  double per_word_entropy_bits(const std::vector<Sentence>& corpus) const;

  void save_arpa(const std::string& path) const;
  static NgramLm load_arpa(const std::string& path);

  // Observed histories per order (contexts that have at least one observed
  // continuation), exposed for normalization checks.
  std::vector<std::vector<uint32_t>> observed_histories() const;

  std::vector<uint32_t> to_ids(const Sentence& sentence) const;

 private:
  using Table = std::unordered_map<std::string, Entry>;

  const Entry* find(std::span<const uint32_t> gram) const;
  double cond_log10_rec(std::span<const uint32_t> context, uint32_t word) const;

  int order_ = 0;
  std::vector<std::string> tokens_;
  std::unordered_map<std::string, uint32_t> ids_;
  std::vector<Table> tables_;  // tables_[k] holds (k+1)-grams
};

std::string pack_ids(std::span<const uint32_t> ids);
std::vector<uint32_t> unpack_ids(const std::string& key);

}  // namespace monoses
