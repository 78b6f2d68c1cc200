#include "monoses/mapping.hpp"

#include <algorithm>
#include <cmath>

namespace monoses {

namespace {

using RowMajorF = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const RowMajorF> as_matrix(const EmbeddingSpace& space) {
  return Eigen::Map<const RowMajorF>(space.data.data(), static_cast<Eigen::Index>(space.size()),
                                     space.dim);
}

constexpr int kCslsNeighborhood = 10;
constexpr int kNnBlock = 512;

// Mean cosine of the k nearest rows of `other` for every row of `queries`.
std::vector<float> knn_mean(const RowMajorF& queries, const RowMajorF& other, int k, int jobs) {
  std::vector<float> means(queries.rows(), 0.0f);
  k = std::min<int>(k, static_cast<int>(other.rows()));
  size_t blocks = (queries.rows() + kNnBlock - 1) / kNnBlock;
  parallel_for(blocks, jobs, [&](size_t b) {
    Eigen::Index r0 = static_cast<Eigen::Index>(b) * kNnBlock;
    Eigen::Index rows = std::min<Eigen::Index>(kNnBlock, queries.rows() - r0);
    RowMajorF scores = queries.middleRows(r0, rows) * other.transpose();
    std::vector<float> row(other.rows());
    for (Eigen::Index i = 0; i < rows; i++) {
      for (Eigen::Index j = 0; j < other.rows(); j++) row[j] = scores(i, j);
      std::nth_element(row.begin(), row.begin() + (k - 1), row.end(), std::greater<float>());
      double sum = 0;
      for (int j = 0; j < k; j++) sum += row[j];
      means[r0 + i] = static_cast<float>(sum / k);
    }
  });
  return means;
}

// For each query row, the best row of `other` under cosine (or CSLS with the
// given per-candidate penalty). Ties break toward the lexicographically
// smaller candidate phrase.
std::vector<int> retrieve_nn(const RowMajorF& queries, const RowMajorF& other,
                             const std::vector<std::string>& other_phrases,
                             const std::vector<float>* candidate_penalty, int jobs) {
  std::vector<int> best(queries.rows(), -1);
  size_t blocks = (queries.rows() + kNnBlock - 1) / kNnBlock;
  parallel_for(blocks, jobs, [&](size_t b) {
    Eigen::Index r0 = static_cast<Eigen::Index>(b) * kNnBlock;
    Eigen::Index rows = std::min<Eigen::Index>(kNnBlock, queries.rows() - r0);
    RowMajorF scores = queries.middleRows(r0, rows) * other.transpose();
    for (Eigen::Index i = 0; i < rows; i++) {
      int arg = -1;
      float best_score = 0;
      for (Eigen::Index j = 0; j < other.rows(); j++) {
        float s = scores(i, j);
        if (candidate_penalty) s = 2.0f * s - (*candidate_penalty)[j];
        if (arg < 0 || s > best_score ||
            (s == best_score && other_phrases[j] < other_phrases[arg])) {
          arg = static_cast<int>(j);
          best_score = s;
        }
      }
      best[r0 + i] = arg;
    }
  });
  return best;
}

RowMajorF top_rows(const EmbeddingSpace& space, size_t limit) {
  size_t n = limit == 0 ? space.size() : std::min(limit, space.size());
  return as_matrix(space).topRows(static_cast<Eigen::Index>(n));
}

}  // namespace

std::vector<std::pair<std::string, std::string>> Dictionary::phrases(
    const EmbeddingSpace& src, const EmbeddingSpace& tgt) const {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(pairs.size());
  for (auto [i, j] : pairs) out.emplace_back(src.phrases[i], tgt.phrases[j]);
  return out;
}

void normalize_embeddings(EmbeddingSpace& space) {
  auto unit_rows = [&space] {
    for (size_t i = 0; i < space.size(); i++) {
      auto r = space.row(i);
      double norm = 0;
      for (float v : r) norm += static_cast<double>(v) * v;
      norm = std::sqrt(norm);
      check(norm > 1e-12, "cannot normalize zero vector for phrase '" + space.phrases[i] + "'");
      for (float& v : r) v = static_cast<float>(v / norm);
    }
  };
  unit_rows();
  std::vector<double> mean(space.dim, 0.0);
  for (size_t i = 0; i < space.size(); i++) {
    auto r = space.row(i);
    for (int d = 0; d < space.dim; d++) mean[d] += r[d];
  }
  for (auto& m : mean) m /= static_cast<double>(space.size());
  for (size_t i = 0; i < space.size(); i++) {
    auto r = space.row(i);
    for (int d = 0; d < space.dim; d++) r[d] = static_cast<float>(r[d] - mean[d]);
  }
  unit_rows();
}

Dictionary seed_identical_dictionary(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                                     size_t limit) {
  size_t ns = limit == 0 ? src.size() : std::min(limit, src.size());
  size_t nt = limit == 0 ? tgt.size() : std::min(limit, tgt.size());
  Dictionary dict;
  for (size_t i = 0; i < ns; i++) {
    int j = tgt.find(src.phrases[i]);
    if (j >= 0 && static_cast<size_t>(j) < nt) dict.pairs.emplace_back(static_cast<int>(i), j);
  }
  check(!dict.pairs.empty(),
        "mapping initialization failed: no identical phrases between the vocabularies");
  return dict;
}

Eigen::MatrixXd procrustes_map(const Eigen::MatrixXd& X, const Eigen::MatrixXd& Z) {
  check(X.rows() == Z.rows() && X.cols() == Z.cols(), "procrustes: shape mismatch");
  Eigen::MatrixXd M = X.transpose() * Z;
  check(M.norm() > 1e-12, "procrustes: degenerate input");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().transpose();
}

Dictionary induce_dictionary(const EmbeddingSpace& mapped_src, const EmbeddingSpace& mapped_tgt,
                             InductionMode mode, RetrievalCriterion retrieval, size_t limit,
                             int jobs) {
  RowMajorF S = top_rows(mapped_src, limit);
  RowMajorF T = top_rows(mapped_tgt, limit);

  Dictionary dict;
  if (mode == InductionMode::kForward || mode == InductionMode::kUnion) {
    std::vector<float> penalty;
    const std::vector<float>* penalty_ptr = nullptr;
    if (retrieval == RetrievalCriterion::kCsls) {
      penalty = knn_mean(T, S, kCslsNeighborhood, jobs);
      penalty_ptr = &penalty;
    }
    auto nn = retrieve_nn(S, T, mapped_tgt.phrases, penalty_ptr, jobs);
    for (size_t i = 0; i < nn.size(); i++) dict.pairs.emplace_back(static_cast<int>(i), nn[i]);
  }
  if (mode == InductionMode::kBackward || mode == InductionMode::kUnion) {
    std::vector<float> penalty;
    const std::vector<float>* penalty_ptr = nullptr;
    if (retrieval == RetrievalCriterion::kCsls) {
      penalty = knn_mean(S, T, kCslsNeighborhood, jobs);
      penalty_ptr = &penalty;
    }
    auto nn = retrieve_nn(T, S, mapped_src.phrases, penalty_ptr, jobs);
    for (size_t j = 0; j < nn.size(); j++) dict.pairs.emplace_back(nn[j], static_cast<int>(j));
  }
  std::sort(dict.pairs.begin(), dict.pairs.end());
  dict.pairs.erase(std::unique(dict.pairs.begin(), dict.pairs.end()), dict.pairs.end());
  return dict;
}

EmbeddingSpace apply_mapping(const EmbeddingSpace& space, const Eigen::MatrixXd& W) {
  EmbeddingSpace out = space;
  Eigen::Map<RowMajorF> data(out.data.data(), static_cast<Eigen::Index>(out.size()), out.dim);
  data = data * W.cast<float>();
  return out;
}

MappingResult self_learn(const EmbeddingSpace& src, const EmbeddingSpace& tgt,
                         const SelfLearnConfig& config) {
  const int dim = src.dim;
  check(dim == tgt.dim, "self_learn: dimension mismatch");
  MappingResult result;
  result.w_src = Eigen::MatrixXd::Identity(dim, dim);
  result.w_tgt = Eigen::MatrixXd::Identity(dim, dim);
  result.dictionary = seed_identical_dictionary(src, tgt, config.dict_limit);
  if (config.max_iters == 0) return result;

  RowMajorF S = top_rows(src, config.dict_limit);
  RowMajorF T = top_rows(tgt, config.dict_limit);

  EmbeddingSpace sub_src, sub_tgt;
  sub_src.dim = sub_tgt.dim = dim;
  sub_src.phrases.assign(src.phrases.begin(), src.phrases.begin() + S.rows());
  sub_tgt.phrases.assign(tgt.phrases.begin(), tgt.phrases.begin() + T.rows());
  sub_src.data.resize(S.rows() * dim);
  sub_tgt.data.resize(T.rows() * dim);
  sub_src.rebuild_index();
  sub_tgt.rebuild_index();

  double prev_objective = -2.0;
  for (int iter = 0; iter < config.max_iters; iter++) {
    const auto& pairs = result.dictionary.pairs;
    Eigen::MatrixXd X(pairs.size(), dim), Z(pairs.size(), dim);
    for (size_t p = 0; p < pairs.size(); p++) {
      X.row(p) = S.row(pairs[p].first).cast<double>();
      Z.row(p) = T.row(pairs[p].second).cast<double>();
    }
    Eigen::MatrixXd M = X.transpose() * Z;
    check(M.norm() > 1e-12, "self_learn: degenerate dictionary");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    result.w_src = svd.matrixU();
    result.w_tgt = svd.matrixV();
    result.iterations = iter + 1;

    Eigen::Map<RowMajorF>(sub_src.data.data(), S.rows(), dim) = S * result.w_src.cast<float>();
    Eigen::Map<RowMajorF>(sub_tgt.data.data(), T.rows(), dim) = T * result.w_tgt.cast<float>();

    double objective = 0.0;
    for (auto [i, j] : pairs) objective += cosine(sub_src.row(i), sub_tgt.row(j));
    objective /= static_cast<double>(pairs.size());
    result.objective_trace.push_back(objective);

    Dictionary induced = induce_dictionary(sub_src, sub_tgt, InductionMode::kUnion,
                                           config.retrieval, 0, config.jobs);
    bool unchanged = induced == result.dictionary;
    bool converged = objective - prev_objective < config.convergence_threshold;
    prev_objective = objective;
    if (!unchanged) result.dictionary = std::move(induced);
    if (unchanged || converged) break;
  }
  return result;
}

}  // namespace monoses
