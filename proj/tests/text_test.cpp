// Copyright 2026 The termgraph Authors
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

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "termgraph/knowledge_base.hpp"
#include "termgraph/text.hpp"

namespace termgraph {
namespace {

using ::termgraph::testing::BruteForceGreedyTerms;

struct SetVocab {
  std::set<std::string> words;
  bool contains(std::string_view s) const {
    return words.contains(std::string(s));
  }
};

TokenSeq Tok(const std::string& text) { return Tokenize({text, "test"}); }

TEST(Tokenize, LowercasesAndSplitsOnWhitespace) {
  const TokenSeq seq = Tok("Spherical robots are spherical shaped robots");
  EXPECT_EQ(seq.tokens,
            (std::vector<std::string>{"spherical", "robots", "are", "spherical",
                                      "shaped", "robots"}));
}

TEST(Tokenize, HyphenSplitsButKeepsOffsets) {
  const TokenSeq seq = Tok("ball-shaped");
  ASSERT_EQ(seq.tokens, (std::vector<std::string>{"ball", "shaped"}));
  EXPECT_EQ(seq.spans[0], (ByteSpan{0, 4}));
  EXPECT_EQ(seq.spans[1], (ByteSpan{5, 11}));
  EXPECT_EQ(seq.joiners[1], Joiner::kHyphen);
}

TEST(Tokenize, EmptyAndBlankDocumentsFail) {
  for (const char* text : {"", "   \n\t ", " ... ;; "}) {
    try {
      Tok(text);
      FAIL() << "accepted '" << text << "'";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::kEmptyDocument);
    }
  }
}

TEST(Tokenize, PunctuationBreaksAndSpansIncrease) {
  const std::string text = "Motion, in a (spherical) system.  Done";
  const TokenSeq seq = Tok(text);
  EXPECT_EQ(seq.tokens, (std::vector<std::string>{"motion", "in", "a",
                                                  "spherical", "system",
                                                  "done"}));
  EXPECT_EQ(seq.joiners[1], Joiner::kBreak);
  EXPECT_EQ(seq.joiners[2], Joiner::kSpace);
  EXPECT_EQ(seq.joiners[4], Joiner::kBreak);
  ASSERT_EQ(seq.tokens.size(), seq.spans.size());
  for (std::size_t i = 0; i < seq.size(); ++i) {
    EXPECT_LT(seq.spans[i].start, seq.spans[i].end);
    if (i > 0) EXPECT_LE(seq.spans[i - 1].end, seq.spans[i].start);
  }
}

TEST(Tokenize, UnicodeSpaceAndLatin1Case) {
  // U+00A0 no-break space and an uppercase E-acute.
  const TokenSeq seq = Tok("Caf\xC3\x89\xC2\xA0" "Robot");
  EXPECT_EQ(seq.tokens, (std::vector<std::string>{"caf\xC3\xA9", "robot"}));
}

TEST(ExtractTerms, GreedyConsumesLongestFirst) {
  const SetVocab vocab{{"a b", "b c", "c"}};
  const TermSet t = ExtractTerms(Tok("a b c"), vocab);
  EXPECT_EQ(t.terms, (std::vector<std::string>{"a b", "c"}));
  EXPECT_EQ(BruteForceGreedyTerms({"a", "b", "c"}, vocab.words, 3), t.terms);
}

TEST(ExtractTerms, NoMatchesThrows) {
  const SetVocab vocab{{"unobtainium"}};
  try {
    ExtractTerms(Tok("a plain sentence"), vocab);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kNoTermsFound);
  }
}

TEST(ExtractTerms, HyphenatedFormsAndFallback) {
  EXPECT_EQ(ExtractTerms(Tok("a ball-shaped shell"), SetVocab{{"ball-shaped"}})
                .terms,
            std::vector<std::string>{"ball-shaped"});
  EXPECT_EQ(ExtractTerms(Tok("a ball-shaped shell"), SetVocab{{"ball shaped"}})
                .terms,
            std::vector<std::string>{"ball shaped"});
  EXPECT_EQ(ExtractTerms(Tok("a ball-shaped shell"),
                         SetVocab{{"ball", "shaped"}})
                .terms,
            (std::vector<std::string>{"ball", "shaped"}));
  // Space-separated text may still match a hyphenated entry.
  EXPECT_EQ(ExtractTerms(Tok("ball shaped"), SetVocab{{"ball-shaped"}}).terms,
            std::vector<std::string>{"ball-shaped"});
}

TEST(ExtractTerms, PhrasesDoNotCrossPunctuation) {
  const SetVocab vocab{{"robot body", "robot", "body"}};
  const TermSet t = ExtractTerms(Tok("the robot. Body parts"), vocab);
  EXPECT_EQ(t.terms, (std::vector<std::string>{"robot", "body"}));
}

TEST(ExtractTerms, UnderscoreVocabularyEntriesMatchSpaces) {
  const auto load = ParseEmbeddingSnapshot("1 2\nspherical_robot\t1 0\n");
  const TermSet t = ExtractTerms(Tok("a spherical robot"), load.kb);
  EXPECT_EQ(t.terms, std::vector<std::string>{"spherical robot"});
}

TEST(ExtractTerms, MaxNZeroIsUsageError) {
  try {
    ExtractTerms(Tok("a"), SetVocab{{"a"}}, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::kUsage);
  }
}

TEST(ExtractTerms, FixtureTextAgainstToyVocabulary) {
  const auto load =
      LoadEmbeddingSnapshot(TERMGRAPH_DATA_DIR "/toy_technet.emb");
  const Document doc{kb_internal::ReadFile(TERMGRAPH_DATA_DIR
                                           "/spherical_robot.txt"),
                     "spherical_robot.txt"};
  const TermSet t = ExtractTerms(Tokenize(doc), load.kb, 3);
  const std::vector<std::string> expected = {
      "spherical robot", "mobile robot", "ball-shaped", "outer shell",
      "spherical shell", "solid transparent material", "internal driving unit",
      "visible", "center of mass", "robot", "move", "flat surface", "motion",
      "spherical coordinate system", "electric power", "rechargeable battery",
      "electric motor", "sensors", "wireless remote control",
      "autonomous navigation", "data collection", "robot body",
      "drive mechanism", "dust", "water"};
  EXPECT_EQ(t.terms, expected);
  EXPECT_EQ(t.counts_by_n, (std::map<std::size_t, std::size_t>{
                               {1, 7}, {2, 13}, {3, 5}}));
  const auto idu = std::find(t.terms.begin(), t.terms.end(),
                             "internal driving unit") - t.terms.begin();
  EXPECT_EQ(t.frequency(idu), 2u);
  EXPECT_EQ(t.ngram_length(idu), 3u);
}

// ---------------------------------------------------------------------------
// Randomized properties.

struct RandomCase {
  std::vector<std::string> tokens;
  SetVocab vocab;
};

RandomCase MakeCase(std::mt19937_64& rng) {
  const std::vector<std::string> alphabet = {"a", "b", "c", "d", "e"};
  std::uniform_int_distribution<std::size_t> letter(0, alphabet.size() - 1);
  std::uniform_int_distribution<std::size_t> len(1, 12);
  RandomCase c;
  for (std::size_t i = len(rng); i > 0; --i) {
    c.tokens.push_back(alphabet[letter(rng)]);
  }
  std::uniform_int_distribution<std::size_t> order(1, 3);
  std::uniform_int_distribution<std::size_t> count(1, 10);
  for (std::size_t k = count(rng); k > 0; --k) {
    std::string phrase = alphabet[letter(rng)];
    for (std::size_t n = order(rng); n > 1; --n) {
      phrase += " " + alphabet[letter(rng)];
    }
    c.vocab.words.insert(phrase);
  }
  return c;
}

std::string Join(const std::vector<std::string>& tokens) {
  std::string s;
  for (const auto& t : tokens) s += (s.empty() ? "" : " ") + t;
  return s;
}

TEST(ExtractTermsProperty, MatchesBruteForceSegmentation) {
  std::mt19937_64 rng(20260101);
  int compared = 0;
  for (int iter = 0; iter < 2000; ++iter) {
    const RandomCase c = MakeCase(rng);
    for (std::size_t max_n = 1; max_n <= 3; ++max_n) {
      const auto expected = BruteForceGreedyTerms(c.tokens, c.vocab.words, max_n);
      if (expected.empty()) continue;
      const TermSet t = ExtractTerms(Tok(Join(c.tokens)), c.vocab, max_n);
      ASSERT_EQ(t.terms, expected) << Join(c.tokens) << " max_n=" << max_n;
      ++compared;
    }
  }
  EXPECT_GT(compared, 1000);
}

TEST(ExtractTermsProperty, Invariants) {
  std::mt19937_64 rng(7);
  for (int iter = 0; iter < 1000; ++iter) {
    const RandomCase c = MakeCase(rng);
    const TokenSeq seq = Tok(Join(c.tokens));
    TermSet prev;
    bool have_prev = false;
    for (std::size_t max_n = 1; max_n <= 4; ++max_n) {
      TermSet t;
      try {
        t = ExtractTerms(seq, c.vocab, max_n);
      } catch (const Error& e) {
        ASSERT_EQ(e.code(), Errc::kNoTermsFound);
        continue;
      }
      // Determinism.
      ASSERT_EQ(t, ExtractTerms(seq, c.vocab, max_n));
      // Round trip, no duplicates, counts add up.
      std::set<std::string> unique(t.terms.begin(), t.terms.end());
      ASSERT_EQ(unique.size(), t.terms.size());
      std::size_t total = 0;
      for (const auto& [n, k] : t.counts_by_n) total += k;
      ASSERT_EQ(total, t.size());
      std::vector<bool> used(seq.size(), false);
      std::size_t longest = 0;
      for (std::size_t i = 0; i < t.size(); ++i) {
        ASSERT_TRUE(c.vocab.contains(t.terms[i]));
        longest = std::max(longest, t.ngram_length(i));
        for (const TokenRange& r : t.occurrences[i]) {
          ASSERT_LE(r.end, seq.size());
          for (std::size_t k = r.begin; k < r.end; ++k) {
            ASSERT_FALSE(used[k]) << "overlap at token " << k;
            used[k] = true;
          }
        }
      }
      // No vocabulary unigram left at an unconsumed position.
      for (std::size_t k = 0; k < seq.size(); ++k) {
        if (!used[k]) ASSERT_FALSE(c.vocab.contains(seq.tokens[k]));
      }
      if (have_prev) {
        std::size_t prev_longest = 0;
        for (std::size_t i = 0; i < prev.size(); ++i) {
          prev_longest = std::max(prev_longest, prev.ngram_length(i));
        }
        ASSERT_GE(longest, prev_longest);
      }
      prev = t;
      have_prev = true;
    }
  }
}

}  // namespace
}  // namespace termgraph
