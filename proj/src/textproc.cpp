// Copyright 2026 The Risekit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "risekit/textproc.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>

namespace risekit {
namespace {

bool is_ascii_space(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_ascii_punct(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  if (u >= 128) return false;
  return (u >= '!' && u <= '/') || (u >= ':' && u <= '@') || (u >= '[' && u <= '`') || (u >= '{' && u <= '~');
}

bool is_ascii_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_ascii_lower(char c) { return c >= 'a' && c <= 'z'; }

char to_lower_char(char c) { return is_ascii_upper(c) ? static_cast<char>(c - 'A' + 'a') : c; }
char to_upper_char(char c) { return is_ascii_lower(c) ? static_cast<char>(c - 'a' + 'A') : c; }

std::string strip(std::string_view text) {
  size_t b = 0, e = text.size();
  while (b < e && is_ascii_space(text[b])) ++b;
  while (e > b && is_ascii_space(text[e - 1])) --e;
  return std::string(text.substr(b, e - b));
}

constexpr uint64_t kFnvOffset = 14695981039346656037ULL;
constexpr uint64_t kFnvPrime = 1099511628211ULL;

}  // namespace

std::string ascii_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = to_lower_char(c);
  return out;
}

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  size_t i = 0;
  const size_t n = text.size();
  while (i < n) {
    while (i < n && is_ascii_space(text[i])) ++i;
    if (i >= n) break;
    size_t end = i;
    while (end < n && !is_ascii_space(text[end])) ++end;
    std::string_view chunk = text.substr(i, end - i);
    i = end;

    size_t lo = 0, hi = chunk.size();
    while (lo < hi && is_ascii_punct(chunk[lo])) {
      tokens.emplace_back(1, chunk[lo]);
      ++lo;
    }
    size_t core_end = hi;
    while (core_end > lo && is_ascii_punct(chunk[core_end - 1])) --core_end;
    if (core_end > lo) tokens.emplace_back(chunk.substr(lo, core_end - lo));
    for (size_t k = core_end; k < hi; ++k) tokens.emplace_back(1, chunk[k]);
  }
  return tokens;
}

std::string detokenize(std::span<const std::string> tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i];
  }
  return out;
}

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(std::vector<std::string> tokens) {
  id_to_token_.reserve(tokens.size() + 2);
  id_to_token_.emplace_back(kPadToken);
  id_to_token_.emplace_back(kUnkToken);
  for (auto& token : tokens) id_to_token_.push_back(std::move(token));
  for (size_t id = 0; id < id_to_token_.size(); ++id) {
    auto [it, inserted] = token_to_id_.emplace(id_to_token_[id], static_cast<int>(id));
    if (!inserted) throw std::runtime_error("duplicate vocabulary token \"" + id_to_token_[id] + "\"");
  }
}

int Vocabulary::id_of(std::string_view token) const {
  auto it = token_to_id_.find(ascii_lower(token));
  return it == token_to_id_.end() ? kUnkId : it->second;
}

const std::string& Vocabulary::token_of(int id) const {
  if (id < 0 || id >= size()) throw std::out_of_range("token id " + std::to_string(id) + " out of range");
  return id_to_token_[static_cast<size_t>(id)];
}

uint64_t Vocabulary::hash() const {
  uint64_t h = kFnvOffset;
  for (const std::string& token : id_to_token_) {
    for (char c : token) {
      h ^= static_cast<unsigned char>(c);
      h *= kFnvPrime;
    }
    h ^= static_cast<unsigned char>('\n');
    h *= kFnvPrime;
  }
  return h;
}

Vocabulary build_vocab(std::span<const DocumentSummaryPair> pairs, int min_count, int max_size) {
  if (pairs.empty()) throw std::invalid_argument("build_vocab: no pairs");
  if (min_count < 1) throw std::invalid_argument("build_vocab: min_count must be >= 1");
  if (max_size < 3) throw std::invalid_argument("build_vocab: max_size must be >= 3 (two ids are reserved)");

  // std::map keeps tie-break candidates in token order already.
  std::map<std::string, int64_t> counts;
  for (const DocumentSummaryPair& pair : pairs) {
    for (const std::string* text : {&pair.document, &pair.summary}) {
      for (std::string& token : tokenize(*text)) ++counts[ascii_lower(token)];
    }
  }

  std::vector<std::pair<std::string, int64_t>> kept;
  kept.reserve(counts.size());
  for (auto& [token, count] : counts) {
    if (count >= min_count) kept.emplace_back(token, count);
  }
  std::stable_sort(kept.begin(), kept.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  const size_t limit = static_cast<size_t>(max_size - 2);
  if (kept.size() > limit) kept.resize(limit);

  std::vector<std::string> tokens;
  tokens.reserve(kept.size());
  for (auto& [token, unused] : kept) tokens.push_back(token);
  return Vocabulary(std::move(tokens));
}

void save_vocab(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (int id = 0; id < vocab.size(); ++id) out << vocab.token_of(id) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path);
}

Vocabulary load_vocab(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  if (lines.size() < 2 || lines[0] != Vocabulary::kPadToken || lines[1] != Vocabulary::kUnkToken)
    throw std::runtime_error(path + ": vocabulary must start with the reserved <pad> and <unk> lines");
  return Vocabulary(std::vector<std::string>(lines.begin() + 2, lines.end()));
}

std::vector<int> encode_ids(std::span<const std::string> tokens, const Vocabulary& vocab, int max_len) {
  if (max_len < 1) throw std::invalid_argument("encode_ids: max_len must be >= 1");
  const size_t n = std::min(tokens.size(), static_cast<size_t>(max_len));
  std::vector<int> ids;
  ids.reserve(n);
  for (size_t i = 0; i < n; ++i) ids.push_back(vocab.id_of(tokens[i]));
  return ids;
}

const StopwordSet& default_sentence_stopwords() {
  // Mirrors data/stopwords.txt; the file exists so pipelines can override.
  static const StopwordSet kDefault = {
      "a",    "about", "after", "all",  "an",    "and",  "are",   "as",    "at",    "be",   "been",
      "before", "both", "but",  "by",   "during", "each", "few",  "for",   "from",  "he",   "her",
      "his",  "i",     "if",    "in",   "into",  "is",   "it",    "its",   "many",  "more", "most",
      "no",   "not",   "of",    "on",   "once",  "only", "or",    "our",   "she",   "so",   "some",
      "such", "that",  "the",   "their", "there", "these", "they", "this",  "those", "to",   "under",
      "until", "up",   "was",   "we",   "were",  "when", "while", "with",  "you",
  };
  return kDefault;
}

StopwordSet load_stopwords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  StopwordSet words;
  std::string line;
  while (std::getline(in, line)) {
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    std::string word = strip(line);
    if (!word.empty()) words.insert(ascii_lower(word));
  }
  return words;
}

std::vector<EntitySpan> detect_entities(std::span<const std::string> tokens, const StopwordSet& stopwords) {
  const auto sentence_initial = [&](size_t i) {
    if (i == 0) return true;
    const std::string& prev = tokens[i - 1];
    return prev == "." || prev == "!" || prev == "?";
  };
  const auto is_candidate = [&](size_t i) {
    const std::string& token = tokens[i];
    if (token.empty() || !is_ascii_upper(token[0])) return false;
    if (sentence_initial(i) && stopwords.contains(ascii_lower(token))) return false;
    return true;
  };

  std::vector<EntitySpan> spans;
  size_t i = 0;
  while (i < tokens.size()) {
    if (!is_candidate(i)) {
      ++i;
      continue;
    }
    size_t end = i + 1;
    while (end < tokens.size() && is_candidate(end)) ++end;
    EntitySpan span;
    span.start_token = static_cast<int>(i);
    span.end_token = static_cast<int>(end);
    span.surface = detokenize(std::span<const std::string>(tokens.data() + i, end - i));
    spans.push_back(std::move(span));
    i = end;
  }
  return spans;
}

AntonymLexicon load_antonyms(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  AntonymLexicon lexicon;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto pos = line.find('#'); pos != std::string::npos) line.resize(pos);
    std::string entry = strip(line);
    if (entry.empty()) continue;
    auto colon = entry.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected \"word: antonym1,antonym2\"");
    std::string word = ascii_lower(strip(entry.substr(0, colon)));
    if (word.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": empty headword");
    std::vector<std::string> antonyms;
    std::string rest = entry.substr(colon + 1);
    size_t start = 0;
    while (start <= rest.size()) {
      size_t comma = rest.find(',', start);
      std::string item = ascii_lower(strip(rest.substr(start, comma == std::string::npos ? std::string::npos
                                                                                         : comma - start)));
      if (!item.empty()) {
        if (item == word)
          throw std::runtime_error(path + ":" + std::to_string(lineno) + ": \"" + word + "\" maps to itself");
        antonyms.push_back(std::move(item));
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (antonyms.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": no antonyms for \"" + word + "\"");
    auto& slot = lexicon.entries[word];
    for (auto& a : antonyms) {
      if (std::find(slot.begin(), slot.end(), a) == slot.end()) slot.push_back(std::move(a));
    }
  }
  return lexicon;
}

std::optional<std::string> antonym_of(std::string_view word, const AntonymLexicon& lexicon) {
  auto it = lexicon.entries.find(ascii_lower(word));
  if (it == lexicon.entries.end() || it->second.empty()) return std::nullopt;
  std::string antonym = it->second.front();

  bool any_alpha = false, all_upper = true;
  for (char c : word) {
    if (is_ascii_upper(c) || is_ascii_lower(c)) {
      any_alpha = true;
      if (!is_ascii_upper(c)) all_upper = false;
    }
  }
  if (any_alpha && all_upper && word.size() > 1) {
    for (char& c : antonym) c = to_upper_char(c);
  } else if (!word.empty() && is_ascii_upper(word[0])) {
    antonym[0] = to_upper_char(antonym[0]);
  }
  return antonym;
}

}  // namespace risekit
