#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "monoses/embeddings.hpp"

namespace monoses {

// Pairs of row indices into the source/target spaces they were induced from.
struct Dictionary {
  std::vector<std::pair<int, int>> pairs;

  std::vector<std::pair<std::string, std::string>> phrases(const EmbeddingSpace& src,
                                                           const EmbeddingSpace& tgt) const;
  bool operator==(const Dictionary&) const = default;
};

// In order: length normalization, per-dimension mean centering, length
// normalization. Errors on zero vectors.
void normalize_embeddings(EmbeddingSpace& space);

// All phrases whose surface form appears in both vocabularies, paired with
// themselves. limit restricts each side to its first `limit` rows (frequency
// order); 0 means no restriction.
Dictionary seed_identical_dictionary(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                                     size_t limit = 0);

// W = U V^T from the SVD of X^T Z; maximizes sum_i (X_i W) . Z_i over
// orthogonal W.
Eigen::MatrixXd procrustes_map(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Z);

enum class RetrievalCriterion { kCosine, kCsls };
enum class InductionMode { kForward, kBackward, kUnion };

// Nearest-neighbor dictionary induction over mapped, unit-norm spaces.
// limit restricts both sides to their first rows; csls uses neighborhood 10.
Dictionary induce_dictionary(const EmbeddingSpace& mapped_src, const EmbeddingSpace& mapped_tgt,
                             InductionMode mode, RetrievalCriterion retrieval,
                             size_t limit = 0, int jobs = 1);

struct SelfLearnConfig {
  int max_iters = 50;
  double convergence_threshold = 1e-6;  // on mean dictionary-pair cosine gain
  size_t dict_limit = 20000;            // per-side frequency cutoff for induction
  RetrievalCriterion retrieval = RetrievalCriterion::kCosine;
  int jobs = 1;
};

struct MappingResult {
  Eigen::MatrixXd w_src;  // orthogonal, applied to the normalized source space
  Eigen::MatrixXd w_tgt;
  Dictionary dictionary;
  int iterations = 0;
  std::vector<double> objective_trace;  // mean dictionary-pair cosine per iteration
};

// Identical-form initialization followed by alternating Procrustes (both
// sides mapped into the average space) and union dictionary induction.
// Expects normalized spaces in frequency order.
MappingResult self_learn(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                         const SelfLearnConfig& config);

// Returns a copy of the space with every row multiplied by W.
EmbeddingSpace apply_mapping(const EmbeddingSpace& space, const Eigen::MatrixXd& W);

}  // namespace monoses
