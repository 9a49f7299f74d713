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

// Knowledge-base snapshots: vocabulary membership plus pairwise similarity.
//
// Two regimes are supported:
//   * EmbeddingKB - one dense vector per term, similarity is the cosine of
//     the two vectors (semantic networks trained as word embeddings).
//   * TaxonomyKB  - lemmas mapped to sense nodes of an is-a hierarchy,
//     similarity is 1 / (1 + d) with d the fewest undirected hops between any
//     sense of one lemma and any sense of the other.
//
// Snapshot file formats (UTF-8 text):
//
//   embedding:  "<N> <D>\n" then N lines "<term>\t<c1> <c2> ... <cD>\n"
//   taxonomy:   "#LEMMAS\n" lines "<lemma>\t<node>[,<node>...]\n"
//               "#EDGES\n"  lines "<child>\t<parent>\n"
//               optional "#NODES\n" lines "<node>\n" for nodes without edges

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "termgraph/error.hpp"

namespace termgraph {

// Lookup key for a vocabulary entry: ASCII-lowercased, underscores read as
// spaces, so "Spherical_Robot" and "spherical robot" are the same term.
inline std::string VocabularyKey(std::string_view term) {
  std::string key(term);
  for (char& ch : key) {
    if (ch == '_') {
      ch = ' ';
    } else if (ch >= 'A' && ch <= 'Z') {
      ch = static_cast<char>(ch - 'A' + 'a');
    }
  }
  return key;
}

namespace kb_internal {

inline std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kIoError, "cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(Errc::kIoError, "cannot read " + path.string());
  return data;
}

// Splits into lines, dropping a trailing '\r' from each.
inline std::vector<std::string_view> SplitLines(std::string_view data) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < data.size()) {
    std::size_t end = data.find('\n', start);
    if (end == std::string_view::npos) end = data.size();
    std::string_view line = data.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

inline std::string_view Trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

template <class T>
bool ParseNumber(std::string_view s, T* out) {
  const char* first = s.data();
  const char* last = s.data() + s.size();
  // from_chars rejects a leading '+', which some float writers emit.
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, *out);
  return ec == std::errc() && ptr == last;
}

inline std::string FormatDouble(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

}  // namespace kb_internal

class EmbeddingKB {
 public:
  explicit EmbeddingKB(std::size_t dimension = 1) : dimension_(dimension) {
    if (dimension == 0) {
      throw Error(Errc::kFormatError, "embedding dimension must be positive");
    }
  }

  // Adds or replaces a term. Returns true when an existing entry was replaced.
  bool Insert(std::string_view term, std::span<const double> vec) {
    if (vec.size() != dimension_) {
      throw Error(Errc::kFormatError,
                  "vector for '" + std::string(term) + "' has " +
                      std::to_string(vec.size()) + " components, expected " +
                      std::to_string(dimension_));
    }
    if (std::all_of(vec.begin(), vec.end(), [](double c) { return c == 0; })) {
      throw Error(Errc::kZeroVector, "term '" + std::string(term) + "'");
    }
    auto [it, inserted] = index_.try_emplace(VocabularyKey(term), terms_.size());
    if (inserted) {
      terms_.emplace_back(term);
      values_.insert(values_.end(), vec.begin(), vec.end());
    } else {
      terms_[it->second] = std::string(term);
      std::copy(vec.begin(), vec.end(),
                values_.begin() + it->second * dimension_);
    }
    return !inserted;
  }

  bool contains(std::string_view term) const {
    return !term.empty() && index_.contains(VocabularyKey(term));
  }

  std::span<const double> vector(std::string_view term) const {
    auto it = index_.find(VocabularyKey(term));
    if (term.empty() || it == index_.end()) {
      throw Error(Errc::kUnknownTerm, "'" + std::string(term) + "'");
    }
    return {values_.data() + it->second * dimension_, dimension_};
  }

  std::size_t dimension() const { return dimension_; }
  std::size_t size() const { return terms_.size(); }
  // Terms in first-insertion order, spelled as in the snapshot.
  const std::vector<std::string>& terms() const { return terms_; }

  bool operator==(const EmbeddingKB& other) const {
    return dimension_ == other.dimension_ && terms_ == other.terms_ &&
           values_ == other.values_;
  }

 private:
  std::size_t dimension_;
  std::vector<std::string> terms_;
  std::vector<double> values_;  // row-major, size() x dimension()
  std::unordered_map<std::string, std::size_t> index_;
};

// cos(v_a, v_b) = <v_a, v_b> / (|v_a| |v_b|). Raw vectors are kept as loaded
// and normalized here.
inline double CosineSimilarity(const EmbeddingKB& kb, std::string_view a,
                               std::string_view b) {
  const auto va = kb.vector(a);
  const auto vb = kb.vector(b);
  double dot = 0, norm_a = 0, norm_b = 0;
  for (std::size_t k = 0; k < va.size(); ++k) {
    dot += va[k] * vb[k];
    norm_a += va[k] * va[k];
    norm_b += vb[k] * vb[k];
  }
  return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

struct EmbeddingLoad {
  EmbeddingKB kb;
  // Term lines whose key repeated an earlier line; the later line wins.
  std::size_t duplicates = 0;
};

inline EmbeddingLoad ParseEmbeddingSnapshot(std::string_view data) {
  using namespace kb_internal;
  const auto lines = SplitLines(data);
  if (lines.empty()) throw Error(Errc::kFormatError, "empty snapshot");

  std::size_t count = 0, dimension = 0;
  {
    const std::string_view header = Trim(lines[0]);
    const std::size_t space = header.find(' ');
    if (space == std::string_view::npos ||
        !ParseNumber(header.substr(0, space), &count) ||
        !ParseNumber(Trim(header.substr(space + 1)), &dimension) ||
        dimension == 0) {
      throw Error(Errc::kFormatError,
                  "bad header '" + std::string(lines[0]) + "'");
    }
  }

  EmbeddingLoad out{EmbeddingKB(dimension), 0};
  std::vector<double> vec;
  vec.reserve(dimension);
  std::size_t seen = 0;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    if (Trim(line).empty()) continue;
    const std::string where = "line " + std::to_string(i + 1);
    const std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos || tab == 0) {
      throw Error(Errc::kFormatError, where + ": expected '<term>\\t<vector>'");
    }
    vec.clear();
    std::string_view rest = line.substr(tab + 1);
    while (true) {
      rest = Trim(rest);
      if (rest.empty()) break;
      std::size_t end = rest.find_first_of(" \t");
      if (end == std::string_view::npos) end = rest.size();
      double component = 0;
      if (!ParseNumber(rest.substr(0, end), &component) ||
          !std::isfinite(component)) {
        throw Error(Errc::kFormatError,
                    where + ": bad component '" +
                        std::string(rest.substr(0, end)) + "'");
      }
      vec.push_back(component);
      rest.remove_prefix(end);
    }
    if (vec.size() != dimension) {
      throw Error(Errc::kFormatError,
                  where + ": " + std::to_string(vec.size()) +
                      " components, header says " + std::to_string(dimension));
    }
    if (out.kb.Insert(line.substr(0, tab), vec)) ++out.duplicates;
    ++seen;
  }
  if (seen != count) {
    throw Error(Errc::kFormatError, "header declares " + std::to_string(count) +
                                        " terms, found " + std::to_string(seen));
  }
  return out;
}

inline EmbeddingLoad LoadEmbeddingSnapshot(const std::filesystem::path& path) {
  return ParseEmbeddingSnapshot(kb_internal::ReadFile(path));
}

// Shortest round-trip float formatting, so parse(Serialize(kb)) == kb.
inline std::string SerializeEmbeddingSnapshot(const EmbeddingKB& kb) {
  std::string out = std::to_string(kb.size()) + " " +
                    std::to_string(kb.dimension()) + "\n";
  for (const std::string& term : kb.terms()) {
    out += term;
    char sep = '\t';
    for (double c : kb.vector(term)) {
      out.push_back(sep);
      out += kb_internal::FormatDouble(c);
      sep = ' ';
    }
    out.push_back('\n');
  }
  return out;
}

class TaxonomyKB {
 public:
  using NodeId = std::size_t;

  // Declares a node; returns its dense id. Idempotent.
  NodeId AddNode(std::string_view name) {
    auto [it, inserted] = node_index_.try_emplace(std::string(name),
                                                  node_names_.size());
    if (inserted) {
      node_names_.emplace_back(name);
      neighbors_.emplace_back();
      parents_.emplace_back();
    }
    return it->second;
  }

  void AddEdge(std::string_view child, std::string_view parent) {
    const NodeId c = AddNode(child);
    const NodeId p = AddNode(parent);
    auto& ps = parents_[c];
    if (std::find(ps.begin(), ps.end(), p) != ps.end()) return;
    ps.push_back(p);
    neighbors_[c].push_back(p);
    if (c != p) neighbors_[p].push_back(c);
  }

  // Adds senses to a lemma; every sense must already be a node.
  void AddLemma(std::string_view lemma, std::span<const std::string> senses) {
    if (senses.empty()) {
      throw Error(Errc::kFormatError,
                  "lemma '" + std::string(lemma) + "' has no senses");
    }
    std::vector<NodeId> ids;
    for (const std::string& sense : senses) {
      auto it = node_index_.find(sense);
      if (it == node_index_.end()) {
        throw Error(Errc::kFormatError, "lemma '" + std::string(lemma) +
                                            "' refers to unknown node '" +
                                            sense + "'");
      }
      ids.push_back(it->second);
    }
    auto [it, inserted] = senses_.try_emplace(VocabularyKey(lemma));
    if (inserted) lemmas_.emplace_back(lemma);
    for (NodeId id : ids) {
      if (std::find(it->second.begin(), it->second.end(), id) ==
          it->second.end()) {
        it->second.push_back(id);
      }
    }
  }

  // Throws CycleDetected unless child -> parent edges form a DAG.
  void CheckAcyclic() const {
    std::vector<std::size_t> pending(node_names_.size(), 0);
    for (const auto& ps : parents_) {
      for (NodeId p : ps) ++pending[p];
    }
    // Kahn's algorithm from the leaves upward.
    std::vector<NodeId> ready;
    for (NodeId n = 0; n < pending.size(); ++n) {
      if (pending[n] == 0) ready.push_back(n);
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
      const NodeId n = ready.back();
      ready.pop_back();
      ++visited;
      for (NodeId p : parents_[n]) {
        if (--pending[p] == 0) ready.push_back(p);
      }
    }
    if (visited != node_names_.size()) {
      for (NodeId n = 0; n < pending.size(); ++n) {
        if (pending[n] != 0) {
          throw Error(Errc::kCycleDetected,
                      "hierarchy cycle through node '" + node_names_[n] + "'");
        }
      }
    }
  }

  bool contains(std::string_view lemma) const {
    return !lemma.empty() && senses_.contains(VocabularyKey(lemma));
  }

  const std::vector<NodeId>& senses(std::string_view lemma) const {
    auto it = senses_.find(VocabularyKey(lemma));
    if (lemma.empty() || it == senses_.end()) {
      throw Error(Errc::kUnknownTerm, "'" + std::string(lemma) + "'");
    }
    return it->second;
  }

  // Fewest undirected hops from any sense of `a` to any sense of `b`, by
  // breadth-first search seeded with every sense of `a`.
  std::size_t SenseDistance(std::string_view a, std::string_view b) const {
    const auto& from = senses(a);
    const auto& to = senses(b);
    std::vector<bool> target(node_names_.size(), false);
    for (NodeId n : to) target[n] = true;

    constexpr std::size_t kUnseen = static_cast<std::size_t>(-1);
    std::vector<std::size_t> dist(node_names_.size(), kUnseen);
    std::deque<NodeId> queue;
    for (NodeId n : from) {
      if (target[n]) return 0;
      dist[n] = 0;
      queue.push_back(n);
    }
    while (!queue.empty()) {
      const NodeId n = queue.front();
      queue.pop_front();
      for (NodeId m : neighbors_[n]) {
        if (dist[m] != kUnseen) continue;
        dist[m] = dist[n] + 1;
        if (target[m]) return dist[m];
        queue.push_back(m);
      }
    }
    throw Error(Errc::kNoPath, "'" + std::string(a) + "' and '" +
                                   std::string(b) +
                                   "' lie in disconnected hierarchies");
  }

  std::size_t node_count() const { return node_names_.size(); }
  std::size_t size() const { return lemmas_.size(); }
  const std::vector<std::string>& lemmas() const { return lemmas_; }
  const std::vector<std::string>& node_names() const { return node_names_; }
  const std::vector<NodeId>& parents(NodeId n) const { return parents_[n]; }
  const std::vector<NodeId>& neighbors(NodeId n) const {
    return neighbors_[n];
  }

  // Structural equality by node names: same lemma -> sense sets and the same
  // edge set, independent of declaration order.
  bool operator==(const TaxonomyKB& other) const {
    return Canonical() == other.Canonical();
  }

 private:
  using CanonicalForm =
      std::pair<std::map<std::string, std::set<std::string>>,
                std::set<std::pair<std::string, std::string>>>;

  CanonicalForm Canonical() const {
    CanonicalForm form;
    for (const auto& [key, ids] : senses_) {
      auto& names = form.first[key];
      for (NodeId id : ids) names.insert(node_names_[id]);
    }
    for (NodeId n = 0; n < parents_.size(); ++n) {
      for (NodeId p : parents_[n]) {
        form.second.emplace(node_names_[n], node_names_[p]);
      }
    }
    for (const auto& name : node_names_) {
      form.second.emplace(name, std::string());
    }
    return form;
  }

  std::vector<std::string> node_names_;
  std::unordered_map<std::string, NodeId> node_index_;
  std::vector<std::vector<NodeId>> parents_;
  std::vector<std::vector<NodeId>> neighbors_;
  std::vector<std::string> lemmas_;
  std::unordered_map<std::string, std::vector<NodeId>> senses_;
};

// 1 / (1 + d), d the minimum hop distance over all sense pairs.
inline double PathSimilarity(const TaxonomyKB& kb, std::string_view a,
                             std::string_view b) {
  return 1.0 / (1.0 + static_cast<double>(kb.SenseDistance(a, b)));
}

inline TaxonomyKB ParseTaxonomySnapshot(std::string_view data) {
  using namespace kb_internal;
  enum class Section { kNone, kLemmas, kEdges, kNodes };
  Section section = Section::kNone;
  TaxonomyKB kb;
  // Lemmas are resolved after all nodes are known, so sections may come in
  // any order.
  std::vector<std::pair<std::string, std::vector<std::string>>> lemma_lines;

  const auto lines = SplitLines(data);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string_view line = lines[i];
    const std::string where = "line " + std::to_string(i + 1);
    if (Trim(line).empty()) continue;
    if (line.front() == '#') {
      const std::string_view name = Trim(line);
      if (name == "#LEMMAS") {
        section = Section::kLemmas;
      } else if (name == "#EDGES") {
        section = Section::kEdges;
      } else if (name == "#NODES") {
        section = Section::kNodes;
      } else {
        throw Error(Errc::kFormatError,
                    where + ": unknown section '" + std::string(name) + "'");
      }
      continue;
    }
    const std::size_t tab = line.find('\t');
    switch (section) {
      case Section::kNone:
        throw Error(Errc::kFormatError, where + ": data before any section");
      case Section::kNodes:
        kb.AddNode(Trim(line));
        break;
      case Section::kEdges: {
        if (tab == std::string_view::npos) {
          throw Error(Errc::kFormatError,
                      where + ": expected '<child>\\t<parent>'");
        }
        const auto child = Trim(line.substr(0, tab));
        const auto parent = Trim(line.substr(tab + 1));
        if (child.empty() || parent.empty() ||
            parent.find('\t') != std::string_view::npos) {
          throw Error(Errc::kFormatError,
                      where + ": expected '<child>\\t<parent>'");
        }
        kb.AddEdge(child, parent);
        break;
      }
      case Section::kLemmas: {
        if (tab == std::string_view::npos || tab == 0) {
          throw Error(Errc::kFormatError,
                      where + ": expected '<lemma>\\t<node>[,<node>...]'");
        }
        std::vector<std::string> senses;
        std::string_view rest = line.substr(tab + 1);
        while (!rest.empty()) {
          std::size_t comma = rest.find(',');
          if (comma == std::string_view::npos) comma = rest.size();
          const auto id = Trim(rest.substr(0, comma));
          if (id.empty()) {
            throw Error(Errc::kFormatError, where + ": empty node id");
          }
          senses.emplace_back(id);
          rest.remove_prefix(std::min(comma + 1, rest.size()));
        }
        lemma_lines.emplace_back(std::string(line.substr(0, tab)),
                                 std::move(senses));
        break;
      }
    }
  }
  for (const auto& [lemma, senses] : lemma_lines) kb.AddLemma(lemma, senses);
  kb.CheckAcyclic();
  return kb;
}

inline TaxonomyKB LoadTaxonomySnapshot(const std::filesystem::path& path) {
  return ParseTaxonomySnapshot(kb_internal::ReadFile(path));
}

inline std::string SerializeTaxonomySnapshot(const TaxonomyKB& kb) {
  std::string out;
  std::vector<bool> has_edge(kb.node_count(), false);
  for (std::size_t n = 0; n < kb.node_count(); ++n) {
    if (!kb.neighbors(n).empty()) has_edge[n] = true;
  }
  if (std::find(has_edge.begin(), has_edge.end(), false) != has_edge.end()) {
    out += "#NODES\n";
    for (std::size_t n = 0; n < kb.node_count(); ++n) {
      if (!has_edge[n]) out += kb.node_names()[n] + "\n";
    }
  }
  out += "#LEMMAS\n";
  for (const std::string& lemma : kb.lemmas()) {
    out += lemma;
    char sep = '\t';
    for (auto id : kb.senses(lemma)) {
      out.push_back(sep);
      out += kb.node_names()[id];
      sep = ',';
    }
    out.push_back('\n');
  }
  out += "#EDGES\n";
  for (std::size_t n = 0; n < kb.node_count(); ++n) {
    for (auto p : kb.parents(n)) {
      out += kb.node_names()[n] + "\t" + kb.node_names()[p] + "\n";
    }
  }
  return out;
}

enum class KbKind { kEmbedding, kTaxonomy };

// A loaded snapshot of either regime behind one interface.
class KnowledgeBase {
 public:
  KnowledgeBase(EmbeddingKB kb, std::string name)
      : impl_(std::move(kb)), name_(std::move(name)) {}
  KnowledgeBase(TaxonomyKB kb, std::string name)
      : impl_(std::move(kb)), name_(std::move(name)) {}

  bool contains(std::string_view term) const {
    return std::visit([&](const auto& kb) { return kb.contains(term); },
                      impl_);
  }

  // Cosine similarity or path similarity depending on the regime. Throws
  // UnknownTerm, and NoPath for disconnected taxonomy senses.
  double similarity(std::string_view a, std::string_view b) const {
    if (const auto* emb = std::get_if<EmbeddingKB>(&impl_)) {
      return CosineSimilarity(*emb, a, b);
    }
    return PathSimilarity(std::get<TaxonomyKB>(impl_), a, b);
  }

  KbKind kind() const {
    return impl_.index() == 0 ? KbKind::kEmbedding : KbKind::kTaxonomy;
  }
  const std::string& name() const { return name_; }
  std::size_t size() const {
    return std::visit([](const auto& kb) { return kb.size(); }, impl_);
  }

  const EmbeddingKB* embedding() const {
    return std::get_if<EmbeddingKB>(&impl_);
  }
  const TaxonomyKB* taxonomy() const { return std::get_if<TaxonomyKB>(&impl_); }

 private:
  std::variant<EmbeddingKB, TaxonomyKB> impl_;
  std::string name_;
};

}  // namespace termgraph
