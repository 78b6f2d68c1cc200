#include "monoses/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>

namespace monoses {

namespace {

constexpr double kLog2Of10 = 3.321928094887362;
constexpr double kBosLog10Prob = -99.0;

struct Discounts {
  double d1 = 0.75, d2 = 0.75, d3 = 0.75;
  double of(long long count) const { return count == 1 ? d1 : count == 2 ? d2 : d3; }
};

// Count-of-count discount estimation; falls back to a fixed 0.75 when the
// statistics are degenerate (tiny corpora).
Discounts estimate_discounts(const std::unordered_map<std::string, long long>& counts) {
  long long n[5] = {0, 0, 0, 0, 0};
  for (const auto& [key, c] : counts)
    if (c >= 1 && c <= 4) n[c]++;
  Discounts d;
  if (n[1] == 0 || n[2] == 0 || n[3] == 0 || n[4] == 0) return d;
  double y = static_cast<double>(n[1]) / (n[1] + 2.0 * n[2]);
  double d1 = 1.0 - 2.0 * y * n[2] / n[1];
  double d2 = 2.0 - 3.0 * y * n[3] / n[2];
  double d3 = 3.0 - 4.0 * y * n[4] / n[3];
  if (d1 <= 0 || d1 > 1 || d2 <= 0 || d2 > 2 || d3 <= 0 || d3 > 3) return d;
  d.d1 = d1;
  d.d2 = d2;
  d.d3 = d3;
  return d;
}

}  // namespace

std::string pack_ids(std::span<const uint32_t> ids) {
  std::string key(ids.size() * 4, '\0');
  std::memcpy(key.data(), ids.data(), key.size());
  return key;
}

std::vector<uint32_t> unpack_ids(const std::string& key) {
  std::vector<uint32_t> ids(key.size() / 4);
  std::memcpy(ids.data(), key.data(), key.size());
  return ids;
}

uint32_t NgramLm::id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? kUnkId : it->second;
}

std::vector<uint32_t> NgramLm::to_ids(const Sentence& sentence) const {
  std::vector<uint32_t> ids;
  ids.reserve(sentence.size());
  for (const auto& token : sentence) ids.push_back(id(token));
  return ids;
}

NgramLm NgramLm::train(const std::vector<Sentence>& corpus, int order, double unk_floor) {
  check(!corpus.empty(), "LM training requires a non-empty corpus");
  check(order >= 1, "LM order must be >= 1");

  long long total_tokens = 0;
  for (const auto& s : corpus) total_tokens += static_cast<long long>(s.size());
  if (total_tokens < order) {
    int reduced = std::max<long long>(1, total_tokens);
    std::cerr << "ngram_lm: corpus has " << total_tokens << " tokens, reducing order from "
              << order << " to " << reduced << "\n";
    order = reduced;
  }

  NgramLm lm;
  lm.order_ = order;
  lm.tokens_ = {"<unk>", "<s>", "</s>"};
  lm.ids_ = {{"<unk>", kUnkId}, {"<s>", kBosId}, {"</s>", kEosId}};
  auto intern = [&lm](const std::string& token) -> uint32_t {
    auto it = lm.ids_.find(token);
    if (it != lm.ids_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(lm.tokens_.size());
    lm.tokens_.push_back(token);
    lm.ids_.emplace(token, id);
    return id;
  };

  // Raw counts of all k-windows over <s> ... </s> padded sentences.
  std::vector<std::unordered_map<std::string, long long>> raw(order);
  std::vector<uint32_t> padded;
  for (const auto& sentence : corpus) {
    padded.clear();
    padded.push_back(kBosId);
    for (const auto& token : sentence) padded.push_back(intern(token));
    padded.push_back(kEosId);
    for (int k = 1; k <= order; k++)
      for (size_t i = 0; i + k <= padded.size(); i++)
        raw[k - 1][pack_ids(std::span(padded).subspan(i, k))]++;
  }

  int top = order;
  while (top > 1 && raw[top - 1].empty()) top--;
  lm.order_ = order = top;

  // Adjusted counts: raw at the top order and for <s>-initial grams (those
  // have no left extension), continuation type counts elsewhere.
  std::vector<std::unordered_map<std::string, long long>> adjusted(order);
  adjusted[order - 1] = raw[order - 1];
  for (int k = order - 1; k >= 1; k--) {
    auto& adj = adjusted[k - 1];
    for (const auto& [key, c] : raw[k]) adj[key.substr(4)]++;
    for (const auto& [key, c] : raw[k - 1]) {
      std::uint32_t first;
      std::memcpy(&first, key.data(), 4);
      if (first == kBosId) adj[key] = c;
    }
  }

  lm.tables_.assign(order, Table());

  // Unigram distribution, interpolated with the uniform distribution over the
  // predictable vocabulary (observed types plus <unk>, minus <s>).
  {
    auto uni = adjusted[0];
    uni.erase(pack_ids(std::span<const uint32_t>(&kBosId, 1)));
    Discounts d = estimate_discounts(uni);
    long long denom = 0;
    double gamma_num = 0.0;
    for (const auto& [key, c] : uni) {
      denom += c;
      gamma_num += d.of(c);
    }
    check(denom > 0, "degenerate unigram counts");
    double vocab = static_cast<double>(uni.size() + 1);  // + <unk>
    double gamma = gamma_num / denom;
    double p_unk = gamma / vocab;
    double scale = 1.0;
    if (p_unk < unk_floor) {
      scale = (1.0 - unk_floor) / (1.0 - p_unk);
      p_unk = unk_floor;
    }
    for (const auto& [key, c] : uni) {
      double p = ((c - d.of(c)) / denom + gamma / vocab) * scale;
      lm.tables_[0][key] = Entry{std::log10(p), 0.0};
    }
    lm.tables_[0][pack_ids(std::span<const uint32_t>(&kUnkId, 1))] = Entry{std::log10(p_unk), 0.0};
    lm.tables_[0][pack_ids(std::span<const uint32_t>(&kBosId, 1))] = Entry{kBosLog10Prob, 0.0};
  }

  // Higher orders, bottom-up; backoff weights go on the history's entry one
  // order down.
  for (int k = 2; k <= order; k++) {
    const auto& adj = adjusted[k - 1];
    Discounts d = estimate_discounts(adj);
    struct HistStats {
      long long denom = 0;
      long long n1 = 0, n2 = 0, n3p = 0;
    };
    std::unordered_map<std::string, HistStats> hists;
    for (const auto& [key, c] : adj) {
      auto& h = hists[key.substr(0, key.size() - 4)];
      h.denom += c;
      if (c == 1)
        h.n1++;
      else if (c == 2)
        h.n2++;
      else
        h.n3p++;
    }
    for (const auto& [key, c] : adj) {
      std::string hist_key = key.substr(0, key.size() - 4);
      const HistStats& h = hists.at(hist_key);
      double gamma = (d.d1 * h.n1 + d.d2 * h.n2 + d.d3 * h.n3p) / h.denom;
      std::string lower_key = key.substr(4);
      auto low = lm.tables_[k - 2].find(lower_key);
      check(low != lm.tables_[k - 2].end(), "missing lower-order gram");
      double p = std::max(0.0, (c - d.of(c)) / static_cast<double>(h.denom)) +
                 gamma * std::pow(10.0, low->second.log10_prob);
      lm.tables_[k - 1][key] = Entry{std::log10(p), 0.0};
    }
    for (const auto& [hist_key, h] : hists) {
      double gamma = (d.d1 * h.n1 + d.d2 * h.n2 + d.d3 * h.n3p) / h.denom;
      auto it = lm.tables_[k - 2].find(hist_key);
      check(it != lm.tables_[k - 2].end(), "history gram missing at lower order");
      it->second.log10_bow = std::log10(gamma);
    }
  }
  return lm;
}

const NgramLm::Entry* NgramLm::find(std::span<const uint32_t> gram) const {
  const Table& table = tables_[gram.size() - 1];
  auto it = table.find(pack_ids(gram));
  return it == table.end() ? nullptr : &it->second;
}

double NgramLm::cond_log10_rec(std::span<const uint32_t> context, uint32_t word) const {
  std::vector<uint32_t> gram(context.begin(), context.end());
  gram.push_back(word);
  if (const Entry* e = find(gram)) return e->log10_prob;
  if (context.empty()) {
    const Entry* unk = find(std::span<const uint32_t>(&kUnkId, 1));
    return unk->log10_prob;
  }
  double bow = 0.0;
  if (const Entry* h = find(context)) bow = h->log10_bow;
  return bow + cond_log10_rec(context.subspan(1), word);
}

double NgramLm::cond_log10(std::span<const uint32_t> context, uint32_t word) const {
  size_t max_context = static_cast<size_t>(order_ - 1);
  if (context.size() > max_context) context = context.subspan(context.size() - max_context);
  if (word >= tokens_.size()) word = kUnkId;
  return cond_log10_rec(context, word);
}

double NgramLm::sentence_log10(const Sentence& sentence) const {
  std::vector<uint32_t> ids;
  ids.reserve(sentence.size() + 2);
  ids.push_back(kBosId);
  for (const auto& token : sentence) ids.push_back(id(token));
  ids.push_back(kEosId);
  double total = 0.0;
  for (size_t i = 1; i < ids.size(); i++)
    total += cond_log10(std::span(ids).subspan(0, i), ids[i]);
  return total;
}

double NgramLm::per_word_entropy_bits(const std::vector<Sentence>& corpus) const {
  check(!corpus.empty(), "entropy requires a non-empty corpus");
  double log10_total = 0.0;
  long long tokens = 0;
  for (const auto& sentence : corpus) {
    log10_total += sentence_log10(sentence);
    tokens += static_cast<long long>(sentence.size()) + 1;  // + </s>
  }
  return -log10_total * kLog2Of10 / tokens;
}

std::vector<std::vector<uint32_t>> NgramLm::observed_histories() const {
  std::vector<std::vector<uint32_t>> hists;
  for (int k = 2; k <= order_; k++) {
    std::unordered_map<std::string, bool> seen;
    for (const auto& [key, entry] : tables_[k - 1]) {
      std::string hist = key.substr(0, key.size() - 4);
      if (!seen.emplace(hist, true).second) continue;
      hists.push_back(unpack_ids(hist));
    }
  }
  hists.push_back({});  // the empty (unigram) history
  return hists;
}

void NgramLm::save_arpa(const std::string& path) const {
  std::ofstream out(path);
  check(out.good(), "cannot write " + path);
  out << "\\data\\\n";
  for (int k = 1; k <= order_; k++)
    out << "ngram " << k << "=" << tables_[k - 1].size() << "\n";
  for (int k = 1; k <= order_; k++) {
    out << "\n\\" << k << "-grams:\n";
    std::vector<std::pair<std::string, const Entry*>> rows;
    rows.reserve(tables_[k - 1].size());
    for (const auto& [key, entry] : tables_[k - 1]) {
      auto ids = unpack_ids(key);
      std::string text = tokens_[ids[0]];
      for (size_t i = 1; i < ids.size(); i++) {
        text += ' ';
        text += tokens_[ids[i]];
      }
      rows.emplace_back(std::move(text), &entry);
    }
    std::sort(rows.begin(), rows.end());
    for (const auto& [text, entry] : rows) {
      out << format_double(entry->log10_prob) << '\t' << text;
      if (k < order_) out << '\t' << format_double(entry->log10_bow);
      out << '\n';
    }
  }
  out << "\n\\end\\\n";
}

NgramLm NgramLm::load_arpa(const std::string& path) {
  auto lines = read_lines(path);
  NgramLm lm;
  lm.tokens_ = {"<unk>", "<s>", "</s>"};
  lm.ids_ = {{"<unk>", kUnkId}, {"<s>", kBosId}, {"</s>", kEosId}};
  auto intern = [&lm](const std::string& token) -> uint32_t {
    auto it = lm.ids_.find(token);
    if (it != lm.ids_.end()) return it->second;
    uint32_t id = static_cast<uint32_t>(lm.tokens_.size());
    lm.tokens_.push_back(token);
    lm.ids_.emplace(token, id);
    return id;
  };

  size_t i = 0;
  while (i < lines.size() && lines[i] != "\\data\\") i++;
  check(i < lines.size(), "ARPA: missing \\data\\ header in " + path);
  i++;
  int order = 0;
  for (; i < lines.size() && lines[i].rfind("ngram ", 0) == 0; i++) order++;
  check(order >= 1, "ARPA: no ngram counts in " + path);
  lm.order_ = order;
  lm.tables_.assign(order, Table());

  int current = 0;
  for (; i < lines.size(); i++) {
    const std::string& line = lines[i];
    if (line.empty()) continue;
    if (line == "\\end\\") break;
    if (line[0] == '\\') {
      current = std::stoi(line.substr(1));
      check(current >= 1 && current <= order, "ARPA: bad section " + line);
      continue;
    }
    check(current >= 1, "ARPA: entry before any section: " + line);
    auto fields = split_on(line, '\t');
    check(fields.size() >= 2, "ARPA: bad entry: " + line);
    Entry entry;
    entry.log10_prob = std::stod(fields[0]);
    if (fields.size() >= 3 && !fields[2].empty()) entry.log10_bow = std::stod(fields[2]);
    auto words = split_ws(fields[1]);
    check(static_cast<int>(words.size()) == current, "ARPA: order mismatch: " + line);
    std::vector<uint32_t> ids;
    ids.reserve(words.size());
    for (const auto& w : words) ids.push_back(intern(w));
    lm.tables_[current - 1][pack_ids(ids)] = entry;
  }
  return lm;
}

}  // namespace monoses
