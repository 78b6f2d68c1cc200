#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "monoses/text.hpp"
#include "monoses/util.hpp"

namespace monoses {

// Dense vectors keyed by phrase, stored in frequency order (most frequent
// first); that row order is what mapping-time frequency cutoffs rely on.
struct EmbeddingSpace {
  int dim = 0;
  std::vector<std::string> phrases;
  std::vector<float> data;  // row-major, phrases.size() x dim
  std::unordered_map<std::string, int> index;

  std::span<float> row(size_t i) { return std::span(data).subspan(i * dim, dim); }
  std::span<const float> row(size_t i) const { return std::span(data).subspan(i * dim, dim); }
  int find(const std::string& phrase) const {
    auto it = index.find(phrase);
    return it == index.end() ? -1 : it->second;
  }
  size_t size() const { return phrases.size(); }
  void rebuild_index();

  void save(const std::string& path) const;
  static EmbeddingSpace load(const std::string& path);
};

struct SgnsConfig {
  int dimension = 300;
  int window = 5;
  int negatives_per_pair = 10;
  int epochs = 5;
  double initial_learning_rate = 0.025;
  double subsampling_threshold = 1e-5;  // unigram targets only; <= 0 disables
  uint64_t seed = 1;
  int jobs = 1;  // 1 = deterministic serial mode
};

// All (target phrase, context token) pairs: for each inventory phrase of
// length L at position i, context tokens are the ones within `window`
// positions left of i and right of i+L-1, excluding positions inside the
// phrase. Context tokens are not filtered against the inventory here.
std::vector<std::pair<std::string, std::string>> extract_training_pairs(
    const Sentence& sentence, const PhraseInventory& inventory, int window);

// One SGD step on -log sigmoid(t.c) - sum_k log sigmoid(-t.n_k); returns the
// loss at the pre-update parameters.
double sgns_update(std::span<double> target, std::span<double> context,
                   std::vector<std::span<double>> negatives, double learning_rate);

struct SgnsGradients {
  double loss = 0.0;
  std::vector<double> d_target;
  std::vector<double> d_context;
  std::vector<std::vector<double>> d_negatives;
};

SgnsGradients sgns_loss_and_gradients(std::span<const double> target,
                                      std::span<const double> context,
                                      const std::vector<std::vector<double>>& negatives);

// Skip-gram negative sampling over the inventory's phrases. Contexts and
// negative samples are unigrams; negatives are drawn from the unigram count
// distribution raised to 0.75. jobs=1 is bit-reproducible for a fixed seed.
EmbeddingSpace train_phrase_embeddings(const std::vector<Sentence>& corpus,
                                       const PhraseInventory& inventory,
                                       const SgnsConfig& config);

double cosine(std::span<const float> a, std::span<const float> b);

}  // namespace monoses
