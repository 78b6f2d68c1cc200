#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "monoses/util.hpp"

namespace monoses {

struct ScheduleMix {
  long long n_smt = 0;
  long long n_nmt_greedy = 0;
  long long n_nmt_sampled = 0;
  long long total() const { return n_smt + n_nmt_greedy + n_nmt_sampled; }
};

// n_smt = round(N * max(0, 1 - t/a)), round half up. The remainder is split
// half greedy, half sampled; greedy takes the extra pair when odd.
inline ScheduleMix backtranslation_mix(long long t, long long total, double transition_iters) {
  check(t >= 0 && total >= 0, "schedule requires t >= 0 and N >= 0");
  check(transition_iters > 0, "transition iteration count must be positive");
  ScheduleMix mix;
  double frac = std::max(0.0, 1.0 - static_cast<double>(t) / transition_iters);
  mix.n_smt = static_cast<long long>(std::floor(static_cast<double>(total) * frac + 0.5));
  if (mix.n_smt > total) mix.n_smt = total;
  long long rest = total - mix.n_smt;
  mix.n_nmt_greedy = (rest + 1) / 2;
  mix.n_nmt_sampled = rest / 2;
  return mix;
}

using SentencePair = std::pair<std::string, std::string>;

// Concatenates the first n of each stream in the fixed order smt, greedy,
// sampled. A deficient stream is an error naming the stream.
inline std::vector<SentencePair> assemble_iteration_corpus(
    const ScheduleMix& mix, const std::vector<SentencePair>& smt_pairs,
    const std::vector<SentencePair>& nmt_greedy_pairs,
    const std::vector<SentencePair>& nmt_sampled_pairs) {
  check(static_cast<long long>(smt_pairs.size()) >= mix.n_smt,
        "insufficient pairs in stream smt");
  check(static_cast<long long>(nmt_greedy_pairs.size()) >= mix.n_nmt_greedy,
        "insufficient pairs in stream greedy");
  check(static_cast<long long>(nmt_sampled_pairs.size()) >= mix.n_nmt_sampled,
        "insufficient pairs in stream sampled");
  std::vector<SentencePair> corpus;
  corpus.reserve(mix.total());
  corpus.insert(corpus.end(), smt_pairs.begin(), smt_pairs.begin() + mix.n_smt);
  corpus.insert(corpus.end(), nmt_greedy_pairs.begin(), nmt_greedy_pairs.begin() + mix.n_nmt_greedy);
  corpus.insert(corpus.end(), nmt_sampled_pairs.begin(), nmt_sampled_pairs.begin() + mix.n_nmt_sampled);
  return corpus;
}

}  // namespace monoses
