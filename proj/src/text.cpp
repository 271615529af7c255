#include "cacheback/text.hpp"

#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cacheback {

TokenizerMode parse_tokenizer_mode(std::string_view name) {
  if (name == "whitespace") return TokenizerMode::kWhitespace;
  if (name == "byte") return TokenizerMode::kByte;
  throw UsageError("unknown tokenizer '" + std::string(name) + "' (want whitespace|byte)");
}

TokenId Vocabulary::intern(std::string_view word) {
  auto [it, fresh] = ids_.try_emplace(std::string(word), static_cast<TokenId>(words_.size()));
  if (fresh) words_.emplace_back(word);
  return it->second;
}

void Vocabulary::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  for (const auto& w : words_) out << w << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Vocabulary v;
  std::string line;
  while (std::getline(in, line)) {
    const auto before = v.size();
    if (v.intern(line) != before) throw std::runtime_error("duplicate word in vocabulary " + path);
  }
  return v;
}

namespace {

bool is_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

}  // namespace

TokenSeq tokenize(std::string_view text, TokenizerMode mode, Vocabulary& vocab) {
  TokenSeq out;
  if (mode == TokenizerMode::kByte) {
    out.reserve(text.size());
    for (char c : text) out.push_back(static_cast<unsigned char>(c));
    return out;
  }
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    std::size_t j = i;
    while (j < text.size() && !is_space(text[j])) ++j;
    if (j > i) out.push_back(vocab.intern(text.substr(i, j - i)));
    i = j;
  }
  return out;
}

std::vector<std::string> read_documents(const std::vector<std::string>& paths, CorpusMode mode) {
  std::vector<std::string> docs;
  for (const auto& path : paths) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    if (mode == CorpusMode::kFile) {
      std::ostringstream ss;
      ss << in.rdbuf();
      docs.push_back(ss.str());
      continue;
    }
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) docs.push_back(std::move(line));
    }
  }
  return docs;
}

std::vector<std::size_t> sample_indices(std::size_t n, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction <= 1.0)) throw UsageError("sample fraction must be in (0, 1]");
  std::vector<std::size_t> kept;
  if (fraction == 1.0) {
    for (std::size_t i = 0; i < n; ++i) kept.push_back(i);
    return kept;
  }
  // mt19937_64's output sequence is fixed by the standard; the distributions
  // are not, so the uniform draw is done by hand.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    if (u < fraction) kept.push_back(i);
  }
  return kept;
}

std::vector<std::string> sample_documents(const std::vector<std::string>& docs, double fraction,
                                          std::uint64_t seed) {
  std::vector<std::string> kept;
  for (std::size_t i : sample_indices(docs.size(), fraction, seed)) kept.push_back(docs[i]);
  return kept;
}

}  // namespace cacheback
