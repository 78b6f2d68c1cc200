#include "monoses/text.hpp"

#include <algorithm>
#include <fstream>

namespace monoses {

namespace {

// Fixed normalization table: curly quotes, guillemets, unicode dashes and
// spaces, ellipsis.
char32_t normalize_cp(char32_t cp) {
  switch (cp) {
    case 0x00A0:  // no-break space
    case 0x2009:  // thin space
    case 0x202F:  // narrow no-break space
    case 0x3000:  // ideographic space
      return U' ';
    case 0x2018:
    case 0x2019:
    case 0x201A:
    case 0x2032:
      return U'\'';
    case 0x201C:
    case 0x201D:
    case 0x201E:
    case 0x00AB:
    case 0x00BB:
    case 0x2033:
      return U'"';
    case 0x2010:
    case 0x2011:
    case 0x2012:
    case 0x2013:
    case 0x2014:
    case 0x2015:
      return U'-';
    default:
      return cp;
  }
}

bool is_space_cp(char32_t cp) { return cp == U' ' || cp == U'\t' || cp == U'\r' || cp == U'\n' || cp == 0x0B || cp == 0x0C; }
bool is_digit_cp(char32_t cp) { return cp >= U'0' && cp <= U'9'; }
// Non-ASCII code points count as letters; only ASCII punctuation is split.
bool is_letter_cp(char32_t cp) {
  return (cp >= U'a' && cp <= U'z') || (cp >= U'A' && cp <= U'Z') || cp >= 0x80;
}
bool is_word_cp(char32_t cp) { return is_letter_cp(cp) || is_digit_cp(cp); }

}  // namespace

// Rules, applied to each whitespace-separated chunk:
//   - word characters (letters, digits, non-ASCII) accumulate into a token
//   - '.' or ',' stays inside a token only when flanked by digits
//   - '\'' stays inside a token only when flanked by letters
//   - '-' flanked by word characters splits the token with a @-@ marker
//   - U+2026 and runs of '.' become a single ellipsis-style token
//   - every other punctuation code point is a single-character token
Sentence normalize_and_tokenize(std::string_view raw_line) {
  std::vector<char32_t> cps = utf8_codepoints(raw_line);
  for (auto& cp : cps) cp = normalize_cp(cp);
  // Expand the ellipsis character so the dot-run rule below handles both forms.
  std::vector<char32_t> expanded;
  expanded.reserve(cps.size());
  for (char32_t cp : cps) {
    if (cp == 0x2026) {
      expanded.insert(expanded.end(), {U'.', U'.', U'.'});
    } else {
      expanded.push_back(cp);
    }
  }

  Sentence tokens;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) {
      tokens.push_back(current);
      current.clear();
    }
  };

  size_t n = expanded.size();
  for (size_t i = 0; i < n; i++) {
    char32_t cp = expanded[i];
    if (is_space_cp(cp)) {
      flush();
      continue;
    }
    if (is_word_cp(cp)) {
      utf8_append(current, cp);
      continue;
    }
    char32_t prev = i > 0 ? expanded[i - 1] : U' ';
    char32_t next = i + 1 < n ? expanded[i + 1] : U' ';
    if ((cp == U'.' || cp == U',') && is_digit_cp(prev) && is_digit_cp(next)) {
      utf8_append(current, cp);
      continue;
    }
    if (cp == U'\'' && is_letter_cp(prev) && is_letter_cp(next)) {
      utf8_append(current, cp);
      continue;
    }
    if (cp == U'-' && is_word_cp(prev) && is_word_cp(next)) {
      flush();
      tokens.push_back("@-@");
      continue;
    }
    if (cp == U'.' && next == U'.') {
      flush();
      std::string dots;
      while (i < n && expanded[i] == U'.') {
        dots += '.';
        i++;
      }
      i--;
      tokens.push_back(dots);
      continue;
    }
    flush();
    std::string punct;
    utf8_append(punct, cp);
    tokens.push_back(punct);
  }
  flush();
  return tokens;
}

TruecaseModel TruecaseModel::train(const std::vector<Sentence>& corpus) {
  check(!corpus.empty(), "truecaser training requires a non-empty corpus");
  // folded form -> surface form -> count
  std::unordered_map<std::string, std::unordered_map<std::string, long long>> counts;
  for (const auto& sentence : corpus)
    for (const auto& token : sentence) counts[lowercase_ascii(token)][token]++;

  TruecaseModel model;
  for (const auto& [folded, surfaces] : counts) {
    std::string best;
    long long best_count = -1;
    for (const auto& [surface, count] : surfaces) {
      if (count > best_count || (count == best_count && surface < best)) {
        best = surface;
        best_count = count;
      }
    }
    model.best_[folded] = best;
  }
  return model;
}

Sentence TruecaseModel::apply(const Sentence& sentence) const {
  if (sentence.empty()) return sentence;
  Sentence out = sentence;
  auto it = best_.find(lowercase_ascii(out[0]));
  if (it != best_.end()) out[0] = it->second;
  return out;
}

void TruecaseModel::save(const std::string& path) const {
  std::vector<std::string> lines;
  lines.reserve(best_.size());
  for (const auto& [folded, surface] : best_) lines.push_back(folded + "\t" + surface);
  std::sort(lines.begin(), lines.end());
  write_lines(path, lines);
}

TruecaseModel TruecaseModel::load(const std::string& path) {
  TruecaseModel model;
  for (const auto& line : read_lines(path)) {
    if (line.empty()) continue;
    auto fields = split_on(line, '\t');
    check(fields.size() == 2, "bad truecase model line: " + line);
    model.best_[fields[0]] = fields[1];
  }
  return model;
}

int phrase_order(const std::string& phrase) {
  return 1 + static_cast<int>(std::count(phrase.begin(), phrase.end(), ' '));
}

PhraseInventory PhraseInventory::build(const std::vector<Sentence>& corpus, InventoryCaps caps) {
  check(caps.max_unigrams > 0 || caps.max_bigrams > 0 || caps.max_trigrams > 0,
        "inventory caps must not all be zero");
  std::unordered_map<std::string, long long> counts[3];
  for (const auto& sentence : corpus) {
    for (size_t i = 0; i < sentence.size(); i++) {
      std::string phrase = sentence[i];
      counts[0][phrase]++;
      if (i + 1 < sentence.size()) {
        phrase += ' ';
        phrase += sentence[i + 1];
        counts[1][phrase]++;
      }
      if (i + 2 < sentence.size()) {
        phrase += ' ';
        phrase += sentence[i + 2];
        counts[2][phrase]++;
      }
    }
  }

  PhraseInventory inv;
  inv.caps_ = caps;
  for (int order = 1; order <= 3; order++) {
    auto& map = counts[order - 1];
    size_t cap = caps.cap(order);
    if (map.size() > cap) {
      std::vector<std::pair<std::string, long long>> sorted(map.begin(), map.end());
      std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
      });
      sorted.resize(cap);
      for (auto& [phrase, count] : sorted) inv.counts_.emplace(std::move(phrase), count);
    } else {
      for (auto& [phrase, count] : map) inv.counts_.emplace(phrase, count);
    }
  }
  return inv;
}

std::vector<std::string> PhraseInventory::phrases_by_frequency() const {
  std::vector<std::string> phrases;
  phrases.reserve(counts_.size());
  for (const auto& [phrase, count] : counts_) phrases.push_back(phrase);
  std::sort(phrases.begin(), phrases.end(), [&](const std::string& a, const std::string& b) {
    long long ca = counts_.at(a), cb = counts_.at(b);
    if (ca != cb) return ca > cb;
    return a < b;
  });
  return phrases;
}

void PhraseInventory::save(const std::string& path) const {
  std::ofstream out(path);
  check(out.good(), "cannot write " + path);
  for (const auto& phrase : phrases_by_frequency())
    out << phrase << '\t' << counts_.at(phrase) << '\n';
}

PhraseInventory PhraseInventory::load(const std::string& path) {
  PhraseInventory inv;
  size_t per_order[3] = {0, 0, 0};
  for (const auto& line : read_lines(path)) {
    if (line.empty()) continue;
    auto fields = split_on(line, '\t');
    check(fields.size() == 2, "bad inventory line: " + line);
    inv.counts_[fields[0]] = std::stoll(fields[1]);
    per_order[phrase_order(fields[0]) - 1]++;
  }
  inv.caps_.max_unigrams = std::max(inv.caps_.max_unigrams, per_order[0]);
  inv.caps_.max_bigrams = std::max(inv.caps_.max_bigrams, per_order[1]);
  inv.caps_.max_trigrams = std::max(inv.caps_.max_trigrams, per_order[2]);
  return inv;
}

}  // namespace monoses
