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

#pragma once

#include <concepts>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "termgraph/error.hpp"
#include "termgraph/text.hpp"

namespace termgraph {

// Stand-in similarity for taxonomy pairs with no connecting path. Positive so
// the similarity graph stays complete, and below any real path similarity.
inline constexpr double kNoPathSimilarity = 1e-6;

// Dense symmetric N x N matrix; index i is node i, labelled terms[i].
struct SimilarityMatrix {
  std::vector<std::string> terms;
  std::vector<double> values;

  std::size_t size() const { return terms.size(); }
  double at(std::size_t i, std::size_t j) const {
    return values[i * terms.size() + j];
  }
  double& at(std::size_t i, std::size_t j) {
    return values[i * terms.size() + j];
  }
  bool operator==(const SimilarityMatrix&) const = default;
};

template <class KB>
concept SimilaritySource =
    requires(const KB& kb, std::string_view a, std::string_view b) {
      { kb.similarity(a, b) } -> std::convertible_to<double>;
    };

// Each unordered pair is scored once and mirrored; the diagonal is 1.
template <SimilaritySource KB>
SimilarityMatrix BuildSimilarityMatrix(std::span<const std::string> terms,
                                       const KB& kb) {
  const std::size_t n = terms.size();
  if (n < 2) {
    throw Error(Errc::kTooFewTerms,
                "need at least 2 terms, got " + std::to_string(n));
  }
  SimilarityMatrix m;
  m.terms.assign(terms.begin(), terms.end());
  m.values.assign(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    m.at(i, i) = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0;
      try {
        s = kb.similarity(terms[i], terms[j]);
      } catch (const Error& e) {
        if (e.code() != Errc::kNoPath) throw;
        s = kNoPathSimilarity;
      }
      m.at(i, j) = s;
      m.at(j, i) = s;
    }
  }
  return m;
}

template <SimilaritySource KB>
SimilarityMatrix BuildSimilarityMatrix(const TermSet& term_set, const KB& kb) {
  return BuildSimilarityMatrix(std::span<const std::string>(term_set.terms),
                               kb);
}

namespace matrix_internal {

inline std::string CsvField(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) {
    return std::string(s);
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace matrix_internal

// Debug dump: header row and first column carry the term labels.
inline std::string MatrixToCsv(const SimilarityMatrix& m) {
  std::string out = "term";
  for (const auto& t : m.terms) out += "," + matrix_internal::CsvField(t);
  out += "\n";
  char buf[32];
  for (std::size_t i = 0; i < m.size(); ++i) {
    out += matrix_internal::CsvField(m.terms[i]);
    for (std::size_t j = 0; j < m.size(); ++j) {
      std::snprintf(buf, sizeof(buf), ",%.17g", m.at(i, j));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace termgraph
