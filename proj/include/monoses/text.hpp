#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "monoses/util.hpp"

namespace monoses {

// Punctuation normalization + tokenization with aggressive hyphen splitting.
// The rule set is fixed and documented in text.cpp; no token is empty or
// contains whitespace.
Sentence normalize_and_tokenize(std::string_view raw_line);

// Most frequent surface casing per lowercased token. Only sentence-initial
// tokens are rewritten on apply.
class TruecaseModel {
 public:
  static TruecaseModel train(const std::vector<Sentence>& corpus);
  Sentence apply(const Sentence& sentence) const;

  void save(const std::string& path) const;
  static TruecaseModel load(const std::string& path);

  const std::unordered_map<std::string, std::string>& table() const { return best_; }

 private:
  std::unordered_map<std::string, std::string> best_;
};

struct InventoryCaps {
  size_t max_unigrams = 200000;
  size_t max_bigrams = 400000;
  size_t max_trigrams = 400000;
  size_t cap(int order) const {
    return order == 1 ? max_unigrams : order == 2 ? max_bigrams : max_trigrams;
  }
};

// Frequency-capped set of unigram/bigram/trigram phrases with exact corpus
// counts. Phrases are stored space-joined; truncation per order keeps the most
// frequent entries, ties broken lexicographically.
class PhraseInventory {
 public:
  PhraseInventory() = default;

  static PhraseInventory build(const std::vector<Sentence>& corpus, InventoryCaps caps);

  bool contains(const std::string& phrase) const { return counts_.count(phrase) > 0; }
  long long count(const std::string& phrase) const {
    auto it = counts_.find(phrase);
    return it == counts_.end() ? 0 : it->second;
  }
  size_t size() const { return counts_.size(); }
  const std::unordered_map<std::string, long long>& entries() const { return counts_; }
  InventoryCaps caps() const { return caps_; }

  // Phrases ordered by (count desc, phrase asc); the order used everywhere a
  // frequency ranking is needed.
  std::vector<std::string> phrases_by_frequency() const;

  void save(const std::string& path) const;
  static PhraseInventory load(const std::string& path);

 private:
  std::unordered_map<std::string, long long> counts_;
  InventoryCaps caps_;
};

int phrase_order(const std::string& phrase);

}  // namespace monoses
