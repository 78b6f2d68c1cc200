#include "monoses/embeddings.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <thread>

namespace monoses {

void EmbeddingSpace::rebuild_index() {
  index.clear();
  index.reserve(phrases.size());
  for (size_t i = 0; i < phrases.size(); i++) index.emplace(phrases[i], static_cast<int>(i));
}

void EmbeddingSpace::save(const std::string& path) const {
  std::ofstream out(path);
  check(out.good(), "cannot write " + path);
  out << phrases.size() << ' ' << dim << '\n';
  char buf[64];
  for (size_t i = 0; i < phrases.size(); i++) {
    out << phrases[i];
    auto r = row(i);
    for (int d = 0; d < dim; d++) {
      auto res = std::to_chars(buf, buf + sizeof(buf), r[d]);
      out << (d == 0 ? '\t' : ' ');
      out.write(buf, res.ptr - buf);
    }
    out << '\n';
  }
}

EmbeddingSpace EmbeddingSpace::load(const std::string& path) {
  std::ifstream in(path);
  check(in.good(), "cannot open " + path);
  std::string header;
  check(static_cast<bool>(std::getline(in, header)), "empty embedding file " + path);
  auto head = split_ws(header);
  check(head.size() == 2, "bad embedding header in " + path);
  EmbeddingSpace space;
  size_t count = std::stoull(head[0]);
  space.dim = std::stoi(head[1]);
  space.phrases.reserve(count);
  space.data.reserve(count * space.dim);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto tab = line.find('\t');
    check(tab != std::string::npos, "bad embedding line in " + path);
    space.phrases.push_back(line.substr(0, tab));
    const char* p = line.data() + tab + 1;
    const char* end = line.data() + line.size();
    for (int d = 0; d < space.dim; d++) {
      while (p < end && *p == ' ') p++;
      float v = 0;
      auto res = std::from_chars(p, end, v);
      check(res.ec == std::errc(), "bad vector component in " + path);
      p = res.ptr;
      space.data.push_back(v);
    }
  }
  check(space.phrases.size() == count, "embedding count mismatch in " + path);
  space.rebuild_index();
  return space;
}

double cosine(std::span<const float> a, std::span<const float> b) {
  double dot = 0, na = 0, nb = 0;
  for (size_t i = 0; i < a.size(); i++) {
    dot += static_cast<double>(a[i]) * b[i];
    na += static_cast<double>(a[i]) * a[i];
    nb += static_cast<double>(b[i]) * b[i];
  }
  if (na == 0 || nb == 0) return 0.0;
  return dot / std::sqrt(na * nb);
}

std::vector<std::pair<std::string, std::string>> extract_training_pairs(
    const Sentence& sentence, const PhraseInventory& inventory, int window) {
  std::vector<std::pair<std::string, std::string>> pairs;
  size_t n = sentence.size();
  for (size_t i = 0; i < n; i++) {
    std::string phrase;
    for (size_t len = 1; len <= 3 && i + len <= n; len++) {
      if (len > 1) phrase += ' ';
      phrase += sentence[i + len - 1];
      if (!inventory.contains(phrase)) continue;
      size_t last = i + len - 1;
      for (size_t c = i > static_cast<size_t>(window) ? i - window : 0; c < i; c++)
        pairs.emplace_back(phrase, sentence[c]);
      for (size_t c = last + 1; c <= last + window && c < n; c++)
        pairs.emplace_back(phrase, sentence[c]);
    }
  }
  return pairs;
}

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

template <typename T>
double sgns_step(std::span<T> target, std::span<T> context,
                 const std::vector<std::span<T>>& negatives, double lr) {
  size_t dim = target.size();
  std::vector<double> acc(dim, 0.0);
  double loss = 0.0;
  auto one = [&](std::span<T> v, double label) {
    double dot = 0;
    for (size_t d = 0; d < dim; d++) dot += static_cast<double>(target[d]) * v[d];
    double s = sigmoid(dot);
    loss -= label > 0.5 ? std::log(std::max(s, 1e-300)) : std::log(std::max(1.0 - s, 1e-300));
    double g = (label - s) * lr;
    for (size_t d = 0; d < dim; d++) {
      acc[d] += g * v[d];
      v[d] += static_cast<T>(g * target[d]);
    }
  };
  one(context, 1.0);
  for (auto& neg : negatives) one(neg, 0.0);
  for (size_t d = 0; d < dim; d++) target[d] += static_cast<T>(acc[d]);
  return loss;
}

}  // namespace

double sgns_update(std::span<double> target, std::span<double> context,
                   std::vector<std::span<double>> negatives, double learning_rate) {
  check(learning_rate > 0, "learning rate must be positive");
  return sgns_step<double>(target, context, negatives, learning_rate);
}

SgnsGradients sgns_loss_and_gradients(std::span<const double> target,
                                      std::span<const double> context,
                                      const std::vector<std::vector<double>>& negatives) {
  size_t dim = target.size();
  SgnsGradients g;
  g.d_target.assign(dim, 0.0);
  g.d_context.assign(dim, 0.0);
  auto dot_with_target = [&](std::span<const double> v) {
    double dot = 0;
    for (size_t d = 0; d < dim; d++) dot += target[d] * v[d];
    return dot;
  };
  double sc = sigmoid(dot_with_target(context));
  g.loss = -std::log(std::max(sc, 1e-300));
  for (size_t d = 0; d < dim; d++) {
    g.d_target[d] = -(1.0 - sc) * context[d];
    g.d_context[d] = -(1.0 - sc) * target[d];
  }
  for (const auto& neg : negatives) {
    double sn = sigmoid(dot_with_target(neg));
    g.loss -= std::log(std::max(1.0 - sn, 1e-300));
    auto& dn = g.d_negatives.emplace_back(dim, 0.0);
    for (size_t d = 0; d < dim; d++) {
      g.d_target[d] += sn * neg[d];
      dn[d] = sn * target[d];
    }
  }
  return g;
}

namespace {

// Cumulative table over unigram counts^0.75; sampling is a binary search.
struct NegativeSampler {
  std::vector<double> cumulative;
  double total = 0.0;

  explicit NegativeSampler(const std::vector<long long>& counts) {
    cumulative.reserve(counts.size());
    for (long long c : counts) {
      total += std::pow(static_cast<double>(c), 0.75);
      cumulative.push_back(total);
    }
  }
  int sample(std::mt19937_64& rng) const {
    double r = std::uniform_real_distribution<double>(0.0, total)(rng);
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), r);
    if (it == cumulative.end()) --it;
    return static_cast<int>(it - cumulative.begin());
  }
};

struct TrainShared {
  const std::vector<Sentence>* corpus;
  const PhraseInventory* inventory;
  SgnsConfig config;
  std::vector<std::string> phrases;                    // frequency order
  std::unordered_map<std::string, int> phrase_index;   // phrase -> input row
  std::vector<int> unigram_rows;                       // context id -> input row
  std::unordered_map<std::string, int> context_index;  // token -> context id
  std::vector<long long> context_counts;
  long long total_tokens = 0;
  std::vector<float>* input;
  std::vector<float>* output;
};

void train_range(TrainShared& sh, size_t begin, size_t end, uint64_t seed,
                 std::atomic<long long>& progress) {
  std::mt19937_64 rng(seed);
  NegativeSampler sampler(sh.context_counts);
  const int dim = sh.config.dimension;
  const int window = sh.config.window;
  const int negs = sh.config.negatives_per_pair;
  const double sample = sh.config.subsampling_threshold;
  const double total_work =
      static_cast<double>(sh.config.epochs) * std::max<long long>(1, sh.total_tokens);
  std::vector<float> acc(dim);
  std::vector<int> contexts;
  double lr = sh.config.initial_learning_rate;
  long long local_done = 0;

  for (int epoch = 0; epoch < sh.config.epochs; epoch++) {
    for (size_t si = begin; si < end; si++) {
      const Sentence& sentence = (*sh.corpus)[si];
      size_t n = sentence.size();
      for (size_t i = 0; i < n; i++) {
        std::string phrase;
        for (size_t len = 1; len <= 3 && i + len <= n; len++) {
          if (len > 1) phrase += ' ';
          phrase += sentence[i + len - 1];
          auto pit = sh.phrase_index.find(phrase);
          if (pit == sh.phrase_index.end()) continue;
          if (len == 1 && sample > 0) {
            // classic frequent-word subsampling, unigram targets only
            double f = static_cast<double>(sh.inventory->count(phrase));
            double keep = (std::sqrt(f / (sample * sh.total_tokens)) + 1.0) *
                          (sample * sh.total_tokens) / f;
            if (keep < 1.0 &&
                std::uniform_real_distribution<double>(0.0, 1.0)(rng) > keep)
              continue;
          }
          size_t last = i + len - 1;
          contexts.clear();
          for (size_t c = i > static_cast<size_t>(window) ? i - window : 0; c < i; c++) {
            auto it = sh.context_index.find(sentence[c]);
            if (it != sh.context_index.end()) contexts.push_back(it->second);
          }
          for (size_t c = last + 1; c <= last + window && c < n; c++) {
            auto it = sh.context_index.find(sentence[c]);
            if (it != sh.context_index.end()) contexts.push_back(it->second);
          }
          float* target = sh.input->data() + static_cast<size_t>(pit->second) * dim;
          for (int ctx : contexts) {
            std::fill(acc.begin(), acc.end(), 0.0f);
            for (int k = 0; k <= negs; k++) {
              int out_id = ctx;
              float label = 1.0f;
              if (k > 0) {
                out_id = sampler.sample(rng);
                if (out_id == ctx) continue;
                label = 0.0f;
              }
              float* v = sh.output->data() + static_cast<size_t>(out_id) * dim;
              double dot = 0;
              for (int d = 0; d < dim; d++) dot += static_cast<double>(target[d]) * v[d];
              float g = static_cast<float>((label - sigmoid(dot)) * lr);
              for (int d = 0; d < dim; d++) {
                acc[d] += g * v[d];
                v[d] += g * target[d];
              }
            }
            for (int d = 0; d < dim; d++) target[d] += acc[d];
          }
        }
      }
      local_done += static_cast<long long>(n);
      if (local_done >= 10000) {
        progress.fetch_add(local_done);
        local_done = 0;
        double frac = static_cast<double>(progress.load()) / total_work;
        lr = sh.config.initial_learning_rate * std::max(1e-4, 1.0 - frac);
      }
    }
  }
  progress.fetch_add(local_done);
}

}  // namespace

EmbeddingSpace train_phrase_embeddings(const std::vector<Sentence>& corpus,
                                       const PhraseInventory& inventory,
                                       const SgnsConfig& config) {
  check(!corpus.empty(), "embedding training requires a non-empty corpus");
  check(inventory.size() > 0, "embedding training requires a non-empty inventory");

  TrainShared sh;
  sh.corpus = &corpus;
  sh.inventory = &inventory;
  sh.config = config;
  sh.phrases = inventory.phrases_by_frequency();
  for (size_t i = 0; i < sh.phrases.size(); i++)
    sh.phrase_index.emplace(sh.phrases[i], static_cast<int>(i));
  for (size_t i = 0; i < sh.phrases.size(); i++) {
    if (phrase_order(sh.phrases[i]) != 1) continue;
    sh.context_index.emplace(sh.phrases[i], static_cast<int>(sh.unigram_rows.size()));
    sh.unigram_rows.push_back(static_cast<int>(i));
    sh.context_counts.push_back(inventory.count(sh.phrases[i]));
  }
  check(!sh.unigram_rows.empty(), "inventory has no unigrams");
  for (const auto& sentence : corpus) sh.total_tokens += static_cast<long long>(sentence.size());

  const int dim = config.dimension;
  std::vector<float> input(sh.phrases.size() * static_cast<size_t>(dim));
  std::vector<float> output(sh.unigram_rows.size() * static_cast<size_t>(dim), 0.0f);
  {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<float> init(-0.5f / dim, 0.5f / dim);
    for (auto& v : input) v = init(rng);
  }
  sh.input = &input;
  sh.output = &output;

  std::atomic<long long> progress(0);
  int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    train_range(sh, 0, corpus.size(), config.seed + 17, progress);
  } else {
    std::vector<std::thread> workers;
    size_t chunk = (corpus.size() + jobs - 1) / jobs;
    for (int w = 0; w < jobs; w++) {
      size_t begin = std::min(corpus.size(), w * chunk);
      size_t end = std::min(corpus.size(), begin + chunk);
      if (begin >= end) break;
      workers.emplace_back([&sh, begin, end, w, &progress] {
        train_range(sh, begin, end, sh.config.seed + 17 + 7919 * (w + 1), progress);
      });
    }
    for (auto& t : workers) t.join();
  }

  EmbeddingSpace space;
  space.dim = dim;
  space.phrases = std::move(sh.phrases);
  space.data = std::move(input);
  space.rebuild_index();
  return space;
}

}  // namespace monoses
