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

// Tokenization of a technical text and greedy longest-match extraction of
// knowledge-base vocabulary terms (unigrams and multi-word phrases).

#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "termgraph/error.hpp"

namespace termgraph {

struct Document {
  std::string raw_text;
  std::string source_label;
};

// Half-open byte range [start, end) into Document::raw_text.
struct ByteSpan {
  std::size_t start = 0;
  std::size_t end = 0;
  bool operator==(const ByteSpan&) const = default;
};

// What separated a token from the token before it in the raw text.
enum class Joiner : std::uint8_t {
  kSpace,       // whitespace only
  kHyphen,      // a single hyphen, no whitespace ("ball-shaped")
  kUnderscore,  // a single underscore, no whitespace
  kBreak,       // any other punctuation; phrases never span it
};

struct TokenSeq {
  std::vector<std::string> tokens;
  std::vector<ByteSpan> spans;
  // joiners[i] describes the gap before tokens[i]; joiners[0] is kBreak.
  std::vector<Joiner> joiners;

  std::size_t size() const { return tokens.size(); }
};

// Half-open token index range [begin, end).
struct TokenRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const { return end - begin; }
  bool operator==(const TokenRange&) const = default;
};

struct TermSet {
  std::vector<std::string> terms;
  std::vector<std::vector<TokenRange>> occurrences;
  std::map<std::size_t, std::size_t> counts_by_n;

  std::size_t size() const { return terms.size(); }
  // Number of tokens the term spans (its n-gram order).
  std::size_t ngram_length(std::size_t i) const {
    return occurrences[i].front().size();
  }
  std::size_t frequency(std::size_t i) const { return occurrences[i].size(); }
  bool operator==(const TermSet&) const = default;
};

template <class KB>
concept Vocabulary = requires(const KB& kb, std::string_view term) {
  { kb.contains(term) } -> std::convertible_to<bool>;
};

namespace text_internal {

// Decodes one UTF-8 code point starting at text[pos]. A malformed sequence
// yields U+FFFD with length 1, so the offending byte is kept as a word byte.
inline char32_t DecodeUtf8(std::string_view text, std::size_t pos,
                           std::size_t* length) {
  const auto byte = [&](std::size_t i) {
    return static_cast<unsigned char>(text[i]);
  };
  const unsigned char lead = byte(pos);
  std::size_t need = 0;
  char32_t cp = 0;
  if (lead < 0x80) {
    *length = 1;
    return lead;
  } else if ((lead & 0xE0) == 0xC0) {
    need = 1;
    cp = lead & 0x1F;
  } else if ((lead & 0xF0) == 0xE0) {
    need = 2;
    cp = lead & 0x0F;
  } else if ((lead & 0xF8) == 0xF0) {
    need = 3;
    cp = lead & 0x07;
  } else {
    *length = 1;
    return 0xFFFD;
  }
  for (std::size_t k = 1; k <= need; ++k) {
    if (pos + k >= text.size() || (byte(pos + k) & 0xC0) != 0x80) {
      *length = 1;
      return 0xFFFD;
    }
    cp = (cp << 6) | (byte(pos + k) & 0x3F);
  }
  *length = need + 1;
  return cp;
}

inline bool IsUnicodeSpace(char32_t c) {
  return (c >= 0x09 && c <= 0x0D) || c == 0x20 || c == 0x85 || c == 0xA0 ||
         c == 0x1680 || (c >= 0x2000 && c <= 0x200B) || c == 0x2028 ||
         c == 0x2029 || c == 0x202F || c == 0x205F || c == 0x3000 ||
         c == 0xFEFF;
}

inline bool IsHyphen(char32_t c) {
  return c == '-' || c == 0x2010 || c == 0x2011;
}

inline bool IsPunct(char32_t c) {
  if (c < 0x80) {
    return (c >= 0x21 && c <= 0x2F) || (c >= 0x3A && c <= 0x40) ||
           (c >= 0x5B && c <= 0x60) || (c >= 0x7B && c <= 0x7E);
  }
  switch (c) {
    case 0xA1: case 0xA7: case 0xAB: case 0xB6: case 0xB7: case 0xBB:
    case 0xBF: case 0xD7: case 0xF7:
      return true;
    default:
      break;
  }
  return (c >= 0x2010 && c <= 0x2027) || (c >= 0x2030 && c <= 0x205E) ||
         (c >= 0x3001 && c <= 0x3003) || (c >= 0x3008 && c <= 0x3011) ||
         (c >= 0xFF01 && c <= 0xFF0F);
}

inline void AppendLower(std::string* out, std::string_view text,
                        std::size_t pos, std::size_t length, char32_t cp) {
  if (length == 1 && cp < 0x80) {
    char ch = text[pos];
    if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    out->push_back(ch);
    return;
  }
  // Latin-1 supplement capitals map to their small forms 0x20 above.
  if (length == 2 && cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) {
    const char32_t lower = cp + 0x20;
    out->push_back(static_cast<char>(0xC0 | (lower >> 6)));
    out->push_back(static_cast<char>(0x80 | (lower & 0x3F)));
    return;
  }
  out->append(text.substr(pos, length));
}

inline Joiner ClassifyGap(std::string_view gap) {
  if (gap.empty()) return Joiner::kBreak;
  bool saw_space = false;
  std::size_t hyphens = 0;
  std::size_t underscores = 0;
  std::size_t other = 0;
  for (std::size_t pos = 0; pos < gap.size();) {
    std::size_t length = 1;
    const char32_t cp = DecodeUtf8(gap, pos, &length);
    if (IsUnicodeSpace(cp)) {
      saw_space = true;
    } else if (IsHyphen(cp)) {
      ++hyphens;
    } else if (cp == '_') {
      ++underscores;
    } else {
      ++other;
    }
    pos += length;
  }
  if (other > 0) return Joiner::kBreak;
  if (hyphens + underscores == 0) return Joiner::kSpace;
  if (!saw_space && hyphens == 1 && underscores == 0) return Joiner::kHyphen;
  if (!saw_space && underscores == 1 && hyphens == 0) {
    return Joiner::kUnderscore;
  }
  return Joiner::kBreak;
}

}  // namespace text_internal

// Splits on Unicode whitespace and punctuation and lowercases. Hyphenated
// words become separate tokens; the hyphen is remembered in `joiners` so that
// extraction can retry the joined form.
inline TokenSeq Tokenize(const Document& doc) {
  using namespace text_internal;
  const std::string_view text = doc.raw_text;
  TokenSeq seq;
  std::string current;
  std::size_t token_start = 0;
  std::size_t prev_end = 0;
  bool in_token = false;

  const auto flush = [&](std::size_t end) {
    const Joiner joiner =
        seq.tokens.empty()
            ? Joiner::kBreak
            : ClassifyGap(text.substr(prev_end, token_start - prev_end));
    seq.tokens.push_back(std::move(current));
    seq.spans.push_back({token_start, end});
    seq.joiners.push_back(joiner);
    current.clear();
    prev_end = end;
    in_token = false;
  };

  for (std::size_t pos = 0; pos < text.size();) {
    std::size_t length = 1;
    const char32_t cp = DecodeUtf8(text, pos, &length);
    const bool separator = IsUnicodeSpace(cp) || IsPunct(cp);
    if (separator) {
      if (in_token) flush(pos);
    } else {
      if (!in_token) {
        in_token = true;
        token_start = pos;
      }
      AppendLower(&current, text, pos, length, cp);
    }
    pos += length;
  }
  if (in_token) flush(text.size());

  if (seq.tokens.empty()) {
    throw Error(Errc::kEmptyDocument,
                "no tokens in '" + doc.source_label + "'");
  }
  return seq;
}

namespace text_internal {

// Candidate vocabulary strings for tokens[begin, begin + n): the form that
// mirrors the text's own joiners, the space-joined form and the hyphen-joined
// form, in that order and without repeats.
inline std::vector<std::string> CandidateForms(const TokenSeq& seq,
                                               std::size_t begin,
                                               std::size_t n) {
  std::string mirrored = seq.tokens[begin];
  std::string spaced = seq.tokens[begin];
  std::string hyphened = seq.tokens[begin];
  for (std::size_t k = begin + 1; k < begin + n; ++k) {
    mirrored.push_back(seq.joiners[k] == Joiner::kHyphen ? '-' : ' ');
    spaced.push_back(' ');
    hyphened.push_back('-');
    mirrored += seq.tokens[k];
    spaced += seq.tokens[k];
    hyphened += seq.tokens[k];
  }
  std::vector<std::string> forms;
  forms.push_back(std::move(mirrored));
  for (std::string* form : {&spaced, &hyphened}) {
    if (std::find(forms.begin(), forms.end(), *form) == forms.end()) {
      forms.push_back(std::move(*form));
    }
  }
  return forms;
}

// Longest n such that tokens[begin, begin + n) does not cross a break.
inline std::size_t MaxSpan(const TokenSeq& seq, std::size_t begin,
                           std::size_t max_n) {
  std::size_t n = 1;
  while (n < max_n && begin + n < seq.size() &&
         seq.joiners[begin + n] != Joiner::kBreak) {
    ++n;
  }
  return n;
}

}  // namespace text_internal

// Greedy left-to-right longest match: at each position the longest n-gram
// (n <= max_n) found in the vocabulary is consumed and the scan resumes after
// it. Terms are deduplicated in first-occurrence order.
template <Vocabulary KB>
TermSet ExtractTerms(const TokenSeq& seq, const KB& kb, std::size_t max_n = 3) {
  if (max_n == 0) throw Error(Errc::kUsage, "max_n must be at least 1");
  TermSet out;
  std::unordered_map<std::string, std::size_t> index;
  std::size_t pos = 0;
  while (pos < seq.size()) {
    std::size_t consumed = 0;
    for (std::size_t n = text_internal::MaxSpan(seq, pos, max_n);
         n >= 1 && consumed == 0; --n) {
      for (std::string& form : text_internal::CandidateForms(seq, pos, n)) {
        if (!kb.contains(form)) continue;
        const TokenRange range{pos, pos + n};
        auto [it, inserted] = index.try_emplace(form, out.terms.size());
        if (inserted) {
          out.terms.push_back(std::move(form));
          out.occurrences.push_back({range});
          ++out.counts_by_n[n];
        } else {
          out.occurrences[it->second].push_back(range);
        }
        consumed = n;
        break;
      }
    }
    pos += consumed == 0 ? 1 : consumed;
  }
  if (out.terms.empty()) {
    throw Error(Errc::kNoTermsFound,
                "no knowledge-base vocabulary term occurs in the text");
  }
  return out;
}

}  // namespace termgraph
