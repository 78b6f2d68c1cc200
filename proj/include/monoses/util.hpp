#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace monoses {

using Sentence = std::vector<std::string>;

std::vector<std::string> split_ws(std::string_view line);
std::vector<std::string> split_on(std::string_view line, char sep);
std::string join(const std::vector<std::string>& tokens, std::string_view sep = " ");

std::string lowercase_ascii(std::string_view s);

// UTF-8 decoding tolerant of malformed bytes (passed through as single code
// points).
std::vector<char32_t> utf8_codepoints(std::string_view s);
void utf8_append(std::string& out, char32_t cp);

// Shortest decimal text that round-trips through double parsing.
std::string format_double(double v);
// Fixed significant digits, for table files.
std::string format_sig(double v, int digits);

std::vector<Sentence> read_corpus(const std::string& path);
std::vector<std::string> read_lines(const std::string& path);
void write_lines(const std::string& path, const std::vector<std::string>& lines);

uint64_t fnv1a_file(const std::string& path);
uint64_t fnv1a(std::string_view data, uint64_t seed = 1469598103934665603ull);

// Runs fn(i) for i in [0,n). jobs<=1 runs inline; results must not depend on
// execution order.
void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn);

inline void check(bool cond, const std::string& msg) {
  if (!cond) throw std::runtime_error(msg);
}

}  // namespace monoses
