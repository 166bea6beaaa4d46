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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "risekit/corpus.hpp"
#include "risekit/textproc.hpp"
#include "test_util.hpp"

namespace risekit {
namespace {

using testutil::data_path;
using testutil::golden_path;
using testutil::read_file;
using testutil::scratch_dir;
using testutil::write_file;

TEST_CASE("tokenize splits words and strips edge punctuation") {
  const std::vector<std::string> expected = {"Fleetwood", "top", "of", "League", "One", "."};
  CHECK(tokenize("Fleetwood top of League One.") == expected);
}

TEST_CASE("tokenize handles empty and whitespace-only input") {
  CHECK(tokenize("").empty());
  CHECK(tokenize("   \t\n ").empty());
}

TEST_CASE("tokenize keeps interior punctuation inside the token") {
  CHECK(tokenize("Alexander's men") == std::vector<std::string>{"Alexander's", "men"});
  CHECK(tokenize("1-0 win") == std::vector<std::string>{"1-0", "win"});
  // Leading and trailing punctuation become separate single-char tokens.
  CHECK(tokenize("\"quoted,\" he said.") ==
        std::vector<std::string>{"\"", "quoted", ",", "\"", "he", "said", "."});
  // All-punctuation chunks decompose entirely.
  CHECK(tokenize("?!") == std::vector<std::string>{"?", "!"});
}

TEST_CASE("token count on the 1000-word fixture matches the frozen oracle") {
  // Oracle: reference regex splitter run offline over the committed
  // fixture (tools/make_fixtures.py prints it at generation time).
  std::ifstream in(data_path("fixtures/tokens_1000.txt"));
  REQUIRE(in);
  std::ostringstream buf;
  buf << in.rdbuf();
  CHECK(tokenize(buf.str()).size() == 1200);
}

TEST_CASE("tokenize is stable under detokenize composition") {
  const auto lines = {std::string("Rochdale, and Bradford -- drew 2-2 (away)!"),
                      std::string("  spaced   out\ttabs\nand newlines  "),
                      std::string("Keeper Joe Day saved a penalty on Saturday.")};
  for (const auto& line : lines) {
    const auto tokens = tokenize(line);
    CHECK(tokenize(detokenize(tokens)) == tokens);
  }
}

TEST_CASE("vocabulary reserves pad and unk") {
  Vocabulary vocab(std::vector<std::string>{"alpha", "beta"});
  CHECK(vocab.size() == 4);
  CHECK(vocab.token_of(0) == "<pad>");
  CHECK(vocab.token_of(1) == "<unk>");
  CHECK(vocab.id_of("alpha") == 2);
  CHECK(vocab.id_of("ALPHA") == 2);  // lookup lowercases
  CHECK(vocab.id_of("gamma") == 1);
  CHECK_THROWS_AS((void)vocab.token_of(4), std::out_of_range);
  CHECK_THROWS_AS((void)vocab.token_of(-1), std::out_of_range);
}

TEST_CASE("build_vocab threshold edge keeps only reserved ids") {
  std::vector<DocumentSummaryPair> pairs = {{"p", "alpha beta gamma", "delta epsilon"}};
  const Vocabulary vocab = build_vocab(pairs, /*min_count=*/2, /*max_size=*/100);
  CHECK(vocab.size() == 2);
}

TEST_CASE("build_vocab orders by frequency then token") {
  std::vector<DocumentSummaryPair> pairs = {{"p", "a a", "b"}};
  const Vocabulary vocab = build_vocab(pairs, 1, 100);
  CHECK(vocab.id_of("a") == 2);
  CHECK(vocab.id_of("b") == 3);

  // Equal frequencies tie-break by token ascending.
  std::vector<DocumentSummaryPair> tied = {{"p", "zeta alpha", "mid"}};
  const Vocabulary tv = build_vocab(tied, 1, 100);
  CHECK(tv.id_of("alpha") == 2);
  CHECK(tv.id_of("mid") == 3);
  CHECK(tv.id_of("zeta") == 4);
}

TEST_CASE("build_vocab validates arguments") {
  std::vector<DocumentSummaryPair> pairs = {{"p", "a", "b"}};
  CHECK_THROWS_AS((void)build_vocab({}, 1, 100), std::invalid_argument);
  CHECK_THROWS_AS((void)build_vocab(pairs, 0, 100), std::invalid_argument);
  CHECK_THROWS_AS((void)build_vocab(pairs, 1, 2), std::invalid_argument);
}

TEST_CASE("build_vocab max_size truncates after sorting") {
  std::vector<DocumentSummaryPair> pairs = {{"p", "a a a b b c", "d"}};
  const Vocabulary vocab = build_vocab(pairs, 1, 4);  // room for 2 real tokens
  CHECK(vocab.size() == 4);
  CHECK(vocab.id_of("a") == 2);
  CHECK(vocab.id_of("b") == 3);
  CHECK(vocab.id_of("c") == 1);  // truncated -> unknown
}

TEST_CASE("build_vocab on the 100-pair fixture matches a brute-force count oracle") {
  const auto pairs = load_pairs(data_path("fixtures/pairs_100.jsonl"));
  const Vocabulary vocab = build_vocab(pairs, /*min_count=*/2, /*max_size=*/500);

  // Independent oracle: count lowercased tokens, filter, sort.
  std::map<std::string, long long> counts;
  for (const auto& pair : pairs) {
    for (const auto& token : tokenize(pair.document)) ++counts[ascii_lower(token)];
    for (const auto& token : tokenize(pair.summary)) ++counts[ascii_lower(token)];
  }
  std::vector<std::pair<std::string, long long>> kept(counts.begin(), counts.end());
  std::erase_if(kept, [](const auto& kv) { return kv.second < 2; });
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  if (kept.size() > 498) kept.resize(498);

  REQUIRE(vocab.size() == static_cast<int>(kept.size()) + 2);
  for (size_t k = 0; k < kept.size(); ++k) CHECK(vocab.token_of(static_cast<int>(k) + 2) == kept[k].first);
}

TEST_CASE("build_vocab is invariant to pair order") {
  auto pairs = load_pairs(data_path("fixtures/pairs_100.jsonl"));
  const Vocabulary before = build_vocab(pairs, 2, 500);
  std::shuffle(pairs.begin(), pairs.end(), std::mt19937(99));
  const Vocabulary after = build_vocab(pairs, 2, 500);
  REQUIRE(before.size() == after.size());
  CHECK(before.hash() == after.hash());
  for (int id = 0; id < before.size(); ++id) CHECK(before.token_of(id) == after.token_of(id));
}

TEST_CASE("vocabulary hash changes with content") {
  Vocabulary a(std::vector<std::string>{"alpha"});
  Vocabulary b(std::vector<std::string>{"beta"});
  Vocabulary c(std::vector<std::string>{"alpha"});
  CHECK(a.hash() != b.hash());
  CHECK(a.hash() == c.hash());
}

TEST_CASE("vocabulary save/load round-trip preserves ids and hash") {
  std::vector<DocumentSummaryPair> pairs = {{"p", "a a b c c c", "d b"}};
  const Vocabulary vocab = build_vocab(pairs, 1, 100);
  const auto dir = scratch_dir("vocab");
  const auto file = dir / "vocab.txt";
  save_vocab(vocab, file.string());
  const Vocabulary loaded = load_vocab(file.string());
  REQUIRE(loaded.size() == vocab.size());
  for (int id = 0; id < vocab.size(); ++id) CHECK(loaded.token_of(id) == vocab.token_of(id));
  CHECK(loaded.hash() == vocab.hash());
}

TEST_CASE("load_vocab requires the reserved header lines") {
  const auto dir = scratch_dir("vocab_bad");
  const auto file = dir / "vocab.txt";
  write_file(file, "alpha\nbeta\n");
  CHECK_THROWS_WITH_AS(load_vocab(file.string()), doctest::Contains("reserved"), std::runtime_error);
}

TEST_CASE("encode_ids known tokens and unknown fallback") {
  Vocabulary vocab(std::vector<std::string>{"fleetwood", "top", "of", "league", "one"});
  const std::vector<std::string> tokens = {"Fleetwood", "top", "of", "League", "One"};
  CHECK(encode_ids(tokens, vocab, 512) == std::vector<int>{2, 3, 4, 5, 6});
  CHECK(encode_ids(std::vector<std::string>{"zzz-unseen"}, vocab, 512) == std::vector<int>{1});
  CHECK(encode_ids({}, vocab, 512).empty());
  CHECK_THROWS_AS((void)encode_ids(tokens, vocab, 0), std::invalid_argument);
}

TEST_CASE("encode_ids truncates to max_len keeping the prefix") {
  Vocabulary vocab(std::vector<std::string>{"w"});
  std::vector<std::string> tokens(600, "w");
  tokens[0] = "zzz";  // marker: prefix order preserved
  const auto ids = encode_ids(tokens, vocab, 512);
  REQUIRE(ids.size() == 512);
  CHECK(ids[0] == 1);
  for (size_t i = 1; i < ids.size(); ++i) CHECK(ids[i] == 2);
  for (int id : ids) CHECK(id < vocab.size());
}

TEST_CASE("detect_entities merges capitalized runs") {
  const std::vector<std::string> tokens = {"Graham", "Alexander\xe2\x80\x99s", "men", "top"};
  const auto spans = detect_entities(tokens);
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].start_token == 0);
  CHECK(spans[0].end_token == 2);
  CHECK(spans[0].surface == "Graham Alexander\xe2\x80\x99s");
}

TEST_CASE("detect_entities returns nothing for all-lowercase input") {
  CHECK(detect_entities(tokenize("the whole defence collapsed late")).empty());
}

TEST_CASE("detect_entities skips sentence-initial stopwords only at sentence starts") {
  // "The" leads a sentence: excluded. "FA" right after is an entity.
  const auto spans = detect_entities(tokenize("The FA charged both clubs."));
  REQUIRE(spans.size() == 1);
  CHECK(spans[0].surface == "FA");
  CHECK(spans[0].start_token == 1);
}

TEST_CASE("detect_entities spans are disjoint and ordered on fixture sentences") {
  std::ifstream in(data_path("fixtures/entity_sentences.txt"));
  REQUIRE(in);
  std::string line;
  while (std::getline(in, line)) {
    const auto tokens = tokenize(line);
    const auto spans = detect_entities(tokens);
    int prev_end = 0;
    for (const auto& span : spans) {
      CHECK(span.start_token >= prev_end);
      CHECK(span.end_token > span.start_token);
      CHECK(span.end_token <= static_cast<int>(tokens.size()));
      prev_end = span.end_token;
    }
  }
}

TEST_CASE("detect_entities matches the hand-annotated golden") {
  std::ifstream in(data_path("fixtures/entity_sentences.txt"));
  REQUIRE(in);
  std::ostringstream got;
  std::string line;
  int line_index = 0;
  while (std::getline(in, line)) {
    for (const auto& span : detect_entities(tokenize(line)))
      got << line_index << '\t' << span.start_token << '\t' << span.end_token << '\t' << span.surface << '\n';
    ++line_index;
  }
  CHECK(got.str() == read_file(golden_path("entity_spans.golden")));
}

TEST_CASE("antonym lookup transfers capitalization") {
  const auto dir = scratch_dir("antonyms");
  const auto file = dir / "antonyms.txt";
  write_file(file, "# test lexicon\ngood: bad, poor\nfast: slow\n");
  const AntonymLexicon lexicon = load_antonyms(file.string());
  CHECK(antonym_of("good", lexicon) == std::string("bad"));
  CHECK(antonym_of("Good", lexicon) == std::string("Bad"));
  CHECK(antonym_of("GOOD", lexicon) == std::string("BAD"));
  CHECK(antonym_of("FAST", lexicon) == std::string("SLOW"));
  CHECK_FALSE(antonym_of("absent", lexicon).has_value());
}

TEST_CASE("load_antonyms rejects malformed entries") {
  const auto dir = scratch_dir("antonyms_bad");
  SUBCASE("self mapping") {
    const auto file = dir / "self.txt";
    write_file(file, "good: good\n");
    CHECK_THROWS_WITH_AS(load_antonyms(file.string()), doctest::Contains("maps to itself"), std::runtime_error);
  }
  SUBCASE("missing colon") {
    const auto file = dir / "colon.txt";
    write_file(file, "good bad\n");
    CHECK_THROWS_WITH_AS(load_antonyms(file.string()), doctest::Contains(":1:"), std::runtime_error);
  }
  SUBCASE("empty antonym list") {
    const auto file = dir / "empty.txt";
    write_file(file, "good:\n");
    CHECK_THROWS_WITH_AS(load_antonyms(file.string()), doctest::Contains("no antonyms"), std::runtime_error);
  }
}

TEST_CASE("bundled antonym lexicon loads and is symmetric") {
  const AntonymLexicon lexicon = load_antonyms(data_path("antonyms.txt"));
  CHECK(lexicon.entries.size() >= 500);
  CHECK(antonym_of("good", lexicon).has_value());
  // Every listed antonym has a reverse entry (the bundled file is
  // generated in both directions).
  for (const auto& [word, antonyms] : lexicon.entries) {
    REQUIRE_FALSE(antonyms.empty());
    CHECK(lexicon.entries.contains(antonyms.front()));
  }
}

TEST_CASE("load_stopwords reads the bundled file") {
  const StopwordSet words = load_stopwords(data_path("stopwords.txt"));
  CHECK(words.contains("the"));
  CHECK(words.contains("it"));
  CHECK_FALSE(words.contains("fleetwood"));
  // The bundled file mirrors the built-in default set.
  CHECK(words == default_sentence_stopwords());
}

}  // namespace
}  // namespace risekit
