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

// The end-to-end pipeline, text -> terms -> similarity matrix -> backbone ->
// layout -> rendered graph, and the canonical JSON records exchanged between
// its stages. Every stage record survives a JSON round trip exactly, so a
// chain of separate stage invocations reproduces a single run byte for byte.

#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <unistd.h>

#include <nlohmann/json.hpp>

#include "termgraph/backbone.hpp"
#include "termgraph/error.hpp"
#include "termgraph/export.hpp"
#include "termgraph/knowledge_base.hpp"
#include "termgraph/layout.hpp"
#include "termgraph/remote.hpp"
#include "termgraph/similarity_matrix.hpp"
#include "termgraph/text.hpp"

namespace termgraph {

enum class KbKindOption { kAuto, kEmbedding, kTaxonomy, kRemote };
enum class OutputFormat { kJson, kGraphMl, kDot, kSvg };

inline OutputFormat ParseOutputFormat(std::string_view name) {
  if (name == "json") return OutputFormat::kJson;
  if (name == "graphml") return OutputFormat::kGraphMl;
  if (name == "dot") return OutputFormat::kDot;
  if (name == "svg") return OutputFormat::kSvg;
  throw Error(Errc::kUsage, "unknown output format '" + std::string(name) +
                                "' (json, graphml, dot, svg)");
}

inline KbKindOption ParseKbKind(std::string_view name) {
  if (name == "auto") return KbKindOption::kAuto;
  if (name == "embedding") return KbKindOption::kEmbedding;
  if (name == "taxonomy") return KbKindOption::kTaxonomy;
  if (name == "remote") return KbKindOption::kRemote;
  throw Error(Errc::kUsage, "unknown knowledge-base kind '" +
                                std::string(name) +
                                "' (auto, embedding, taxonomy, remote)");
}

struct PipelineConfig {
  std::string input_path;  // "-" or empty reads standard input
  std::string kb_path;
  KbKindOption kb_kind = KbKindOption::kAuto;
  std::string kb_name;  // defaults to the snapshot file stem
  std::string kb_cache;
  std::string kb_endpoint;  // remote only; CLI fills it from the environment
  std::size_t max_ngram = 3;
  double edge_multiplier = 2.0;
  LayoutParams layout;
  std::string output_path;  // empty writes standard output
  OutputFormat output_format = OutputFormat::kJson;
  bool quiet = false;
};

// Labels carried from the first stage to the rendered document.
struct Provenance {
  std::string kb_name;
  std::string source_label;
  bool operator==(const Provenance&) const = default;
};

struct TermStage {
  Provenance provenance;
  std::size_t max_ngram = 3;
  TermSet term_set;
  bool operator==(const TermStage&) const = default;
};

struct MatrixStage {
  Provenance provenance;
  std::vector<std::size_t> frequencies;
  SimilarityMatrix matrix;
  bool operator==(const MatrixStage&) const = default;
};

struct GraphStage {
  Provenance provenance;
  std::vector<std::size_t> frequencies;
  FilteredGraph graph;
  bool operator==(const GraphStage&) const = default;
};

struct LayoutStage {
  Provenance provenance;
  std::vector<std::size_t> frequencies;
  FilteredGraph graph;
  std::uint64_t seed = 0;
  LayoutPositions layout;
};

// ---------------------------------------------------------------------------
// Stage records <-> JSON.

namespace pipeline_internal {

inline void ExpectStage(const nlohmann::json& j, std::string_view stage) {
  if (!j.is_object() || !j.contains("stage") ||
      j.at("stage") != std::string(stage)) {
    throw Error(Errc::kUsage,
                "expected a '" + std::string(stage) + "' stage record");
  }
}

template <class F>
auto Decode(std::string_view stage, F&& body) {
  try {
    return body();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kUsage, "malformed '" + std::string(stage) +
                                  "' stage record: " + e.what());
  }
}

inline nlohmann::json ProvenanceJson(const Provenance& p) {
  return {{"kb_name", p.kb_name}, {"source_label", p.source_label}};
}

inline Provenance ProvenanceFrom(const nlohmann::json& j) {
  return {j.at("kb_name").get<std::string>(),
          j.at("source_label").get<std::string>()};
}

inline nlohmann::json EdgesJson(const std::vector<Edge>& edges) {
  nlohmann::json out = nlohmann::json::array();
  for (const Edge& e : edges) {
    out.push_back(
        {{"u", e.u}, {"v", e.v}, {"weight", e.weight}, {"in_mst", e.in_mst}});
  }
  return out;
}

inline std::vector<Edge> EdgesFrom(const nlohmann::json& j) {
  std::vector<Edge> edges;
  for (const auto& e : j) {
    edges.push_back({e.at("u").get<std::size_t>(), e.at("v").get<std::size_t>(),
                     e.at("weight").get<double>(), e.at("in_mst").get<bool>()});
  }
  return edges;
}

inline nlohmann::json ParseJsonText(std::string_view text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kUsage, std::string("stage input is not JSON: ") +
                                  e.what());
  }
}

}  // namespace pipeline_internal

inline std::string TermStageToJson(const TermStage& s) {
  using namespace pipeline_internal;
  nlohmann::json terms = nlohmann::json::array();
  for (std::size_t i = 0; i < s.term_set.size(); ++i) {
    nlohmann::json occ = nlohmann::json::array();
    for (const auto& r : s.term_set.occurrences[i]) {
      occ.push_back({r.begin, r.end});
    }
    terms.push_back({{"term", s.term_set.terms[i]},
                     {"n", s.term_set.ngram_length(i)},
                     {"occurrences", std::move(occ)}});
  }
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [n, count] : s.term_set.counts_by_n) {
    counts[std::to_string(n)] = count;
  }
  nlohmann::json j = ProvenanceJson(s.provenance);
  j["stage"] = "terms";
  j["max_ngram"] = s.max_ngram;
  j["N"] = s.term_set.size();
  j["terms"] = std::move(terms);
  j["counts_by_n"] = std::move(counts);
  return CanonicalJson(j);
}

inline TermStage TermStageFromJson(std::string_view text) {
  using namespace pipeline_internal;
  const auto j = ParseJsonText(text);
  ExpectStage(j, "terms");
  return Decode("terms", [&] {
    TermStage s;
    s.provenance = ProvenanceFrom(j);
    s.max_ngram = j.at("max_ngram").get<std::size_t>();
    for (const auto& t : j.at("terms")) {
      s.term_set.terms.push_back(t.at("term").get<std::string>());
      std::vector<TokenRange> occ;
      for (const auto& r : t.at("occurrences")) {
        occ.push_back({r.at(0).get<std::size_t>(), r.at(1).get<std::size_t>()});
      }
      if (occ.empty()) throw Error(Errc::kUsage, "term without occurrences");
      s.term_set.occurrences.push_back(std::move(occ));
      ++s.term_set.counts_by_n[s.term_set.occurrences.back().front().size()];
    }
    return s;
  });
}

inline std::string MatrixStageToJson(const MatrixStage& s) {
  using namespace pipeline_internal;
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t i = 0; i < s.matrix.size(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t k = 0; k < s.matrix.size(); ++k) {
      row.push_back(s.matrix.at(i, k));
    }
    rows.push_back(std::move(row));
  }
  nlohmann::json j = ProvenanceJson(s.provenance);
  j["stage"] = "matrix";
  j["terms"] = s.matrix.terms;
  j["frequencies"] = s.frequencies;
  j["values"] = std::move(rows);
  return CanonicalJson(j);
}

inline MatrixStage MatrixStageFromJson(std::string_view text) {
  using namespace pipeline_internal;
  const auto j = ParseJsonText(text);
  ExpectStage(j, "matrix");
  return Decode("matrix", [&] {
    MatrixStage s;
    s.provenance = ProvenanceFrom(j);
    s.matrix.terms = j.at("terms").get<std::vector<std::string>>();
    s.frequencies = j.at("frequencies").get<std::vector<std::size_t>>();
    const std::size_t n = s.matrix.terms.size();
    const auto& rows = j.at("values");
    if (rows.size() != n || s.frequencies.size() != n) {
      throw Error(Errc::kUsage, "matrix record dimensions disagree");
    }
    for (const auto& row : rows) {
      if (row.size() != n) {
        throw Error(Errc::kUsage, "matrix record is not square");
      }
      for (const auto& v : row) s.matrix.values.push_back(v.get<double>());
    }
    return s;
  });
}

inline std::string GraphStageToJson(const GraphStage& s) {
  using namespace pipeline_internal;
  nlohmann::json j = ProvenanceJson(s.provenance);
  j["stage"] = "filtered_graph";
  j["terms"] = s.graph.terms;
  j["frequencies"] = s.frequencies;
  j["edge_budget"] = s.graph.edge_budget;
  j["edges"] = EdgesJson(s.graph.edges);
  return CanonicalJson(j);
}

inline GraphStage GraphStageFromJson(std::string_view text) {
  using namespace pipeline_internal;
  const auto j = ParseJsonText(text);
  ExpectStage(j, "filtered_graph");
  return Decode("filtered_graph", [&] {
    GraphStage s;
    s.provenance = ProvenanceFrom(j);
    s.graph.terms = j.at("terms").get<std::vector<std::string>>();
    s.frequencies = j.at("frequencies").get<std::vector<std::size_t>>();
    s.graph.edge_budget = j.at("edge_budget").get<std::size_t>();
    s.graph.edges = EdgesFrom(j.at("edges"));
    for (const Edge& e : s.graph.edges) {
      if (e.u >= e.v || e.v >= s.graph.terms.size()) {
        throw Error(Errc::kUsage, "edge endpoints out of range");
      }
    }
    return s;
  });
}

inline std::string LayoutStageToJson(const LayoutStage& s) {
  using namespace pipeline_internal;
  nlohmann::json positions = nlohmann::json::array();
  for (const Point& p : s.layout.coords) positions.push_back({p.x, p.y});
  nlohmann::json j = ProvenanceJson(s.provenance);
  j["stage"] = "layout";
  j["terms"] = s.graph.terms;
  j["frequencies"] = s.frequencies;
  j["edge_budget"] = s.graph.edge_budget;
  j["edges"] = EdgesJson(s.graph.edges);
  j["seed"] = s.seed;
  j["positions"] = std::move(positions);
  j["iterations_used"] = s.layout.iterations_used;
  j["converged"] = s.layout.converged;
  j["final_max_displacement"] = s.layout.final_max_displacement;
  return CanonicalJson(j);
}

inline LayoutStage LayoutStageFromJson(std::string_view text) {
  using namespace pipeline_internal;
  const auto j = ParseJsonText(text);
  ExpectStage(j, "layout");
  return Decode("layout", [&] {
    LayoutStage s;
    s.provenance = ProvenanceFrom(j);
    s.graph.terms = j.at("terms").get<std::vector<std::string>>();
    s.frequencies = j.at("frequencies").get<std::vector<std::size_t>>();
    s.graph.edge_budget = j.at("edge_budget").get<std::size_t>();
    s.graph.edges = EdgesFrom(j.at("edges"));
    s.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& p : j.at("positions")) {
      s.layout.coords.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    }
    s.layout.iterations_used = j.at("iterations_used").get<std::size_t>();
    s.layout.converged = j.at("converged").get<bool>();
    s.layout.final_max_displacement =
        j.at("final_max_displacement").get<double>();
    if (s.layout.coords.size() != s.graph.terms.size()) {
      throw Error(Errc::kUsage, "layout record has wrong position count");
    }
    return s;
  });
}

// ---------------------------------------------------------------------------
// Stages.

inline TermStage RunExtract(const Document& doc, const KnowledgeBase& kb,
                            std::size_t max_ngram) {
  TermStage s;
  s.provenance = {kb.name(), doc.source_label};
  s.max_ngram = max_ngram;
  s.term_set = ExtractTerms(Tokenize(doc), kb, max_ngram);
  return s;
}

inline MatrixStage RunMatrix(const TermStage& terms, const KnowledgeBase& kb) {
  MatrixStage s;
  s.provenance = terms.provenance;
  for (std::size_t i = 0; i < terms.term_set.size(); ++i) {
    s.frequencies.push_back(terms.term_set.frequency(i));
  }
  s.matrix = BuildSimilarityMatrix(terms.term_set, kb);
  return s;
}

inline GraphStage RunFilter(const MatrixStage& matrix, double edge_multiplier) {
  return {matrix.provenance, matrix.frequencies,
          FilterBackbone(matrix.matrix, edge_multiplier)};
}

inline LayoutStage RunLayoutStage(const GraphStage& graph,
                                  const LayoutParams& params) {
  LayoutStage s;
  s.provenance = graph.provenance;
  s.frequencies = graph.frequencies;
  s.graph = graph.graph;
  s.seed = params.seed;
  s.layout = RunLayout(graph.graph, params);
  return s;
}

inline GraphDocument ToGraphDocument(const LayoutStage& s) {
  return MakeGraphDocument(
      s.graph, s.layout, s.frequencies,
      {s.provenance.kb_name, s.provenance.source_label, 0, 0, s.seed});
}

inline std::string Render(const GraphDocument& doc, OutputFormat format) {
  switch (format) {
    case OutputFormat::kJson: return ToJson(doc);
    case OutputFormat::kGraphMl: return ToGraphMl(doc);
    case OutputFormat::kDot: return ToDot(doc);
    case OutputFormat::kSvg: return ToSvg(doc);
  }
  return ToJson(doc);
}

// ---------------------------------------------------------------------------
// I/O helpers.

// Reads a file, or standard input for "" and "-". Unreadable input is a
// usage error.
inline std::string ReadInput(const std::string& path) {
  if (path.empty() || path == "-") {
    return std::string((std::istreambuf_iterator<char>(std::cin)),
                       std::istreambuf_iterator<char>());
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::kUsage, "cannot read input " + path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

inline std::string InputLabel(const std::string& path) {
  return path.empty() || path == "-" ? "stdin" : path;
}

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file. Empty path writes standard output.
inline void WriteOutputAtomic(const std::string& path, std::string_view bytes) {
  if (path.empty() || path == "-") {
    std::cout.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    std::cout.flush();
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw std::runtime_error("cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw std::runtime_error("cannot move output into place at " + path);
  }
}

// A snapshot whose first non-blank line starts with '#' is a taxonomy.
inline KbKind DetectSnapshotKind(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::kIoError, "cannot open knowledge base " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (kb_internal::Trim(line).empty()) continue;
    return line.front() == '#' ? KbKind::kTaxonomy : KbKind::kEmbedding;
  }
  throw Error(Errc::kFormatError, "knowledge base " + path + " is empty");
}

// Loads the configured knowledge base. For the remote kind, `remote_terms`
// lists the strings to fetch.
inline KnowledgeBase LoadKnowledgeBase(
    const PipelineConfig& config,
    std::span<const std::string> remote_terms = {}) {
  std::string name = config.kb_name;
  if (config.kb_kind == KbKindOption::kRemote) {
    if (config.kb_cache.empty()) {
      throw Error(Errc::kUsage, "the remote knowledge base needs --kb-cache");
    }
    if (name.empty()) name = "remote";
    RemoteOptions options;
    options.endpoint = config.kb_endpoint;
    options.cache_dir = config.kb_cache;
    return KnowledgeBase(FetchRemoteTerms(options, remote_terms).kb, name);
  }
  if (config.kb_path.empty()) {
    throw Error(Errc::kUsage, "no knowledge base given (--kb)");
  }
  if (name.empty()) name = std::filesystem::path(config.kb_path).stem().string();
  KbKind kind = config.kb_kind == KbKindOption::kTaxonomy ? KbKind::kTaxonomy
                                                          : KbKind::kEmbedding;
  if (config.kb_kind == KbKindOption::kAuto) {
    kind = DetectSnapshotKind(config.kb_path);
  }
  if (kind == KbKind::kTaxonomy) {
    return KnowledgeBase(LoadTaxonomySnapshot(config.kb_path), name);
  }
  return KnowledgeBase(LoadEmbeddingSnapshot(config.kb_path).kb, name);
}

// Process exit status for a library error.
inline int ExitCodeFor(Errc code) {
  switch (code) {
    case Errc::kUsage:
    case Errc::kBudgetTooSmall:
      return 2;
    case Errc::kIoError:
    case Errc::kFormatError:
    case Errc::kZeroVector:
    case Errc::kCycleDetected:
    case Errc::kNetworkError:
    case Errc::kApiFormatError:
    case Errc::kUnknownTerm:
      return 3;
    case Errc::kEmptyDocument:
    case Errc::kNoTermsFound:
    case Errc::kTooFewTerms:
    case Errc::kNoPath:
      return 4;
    case Errc::kNumericalBlowup:
      return 5;
  }
  return 1;
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitIo = 1;

struct PipelineResult {
  GraphDocument document;
  LayoutStage layout;
  std::string output;  // rendered bytes in the configured format
};

// Runs every stage in memory. Nothing is written; see RunPipelineToOutput.
inline PipelineResult RunPipeline(const PipelineConfig& config) {
  config.layout.Validate();
  EdgeBudget(2, config.edge_multiplier);
  Document doc{ReadInput(config.input_path), InputLabel(config.input_path)};
  std::vector<std::string> remote_terms;
  if (config.kb_kind == KbKindOption::kRemote) {
    remote_terms = CandidateTerms(Tokenize(doc), config.max_ngram);
  }
  const KnowledgeBase kb = LoadKnowledgeBase(config, remote_terms);
  const TermStage terms = RunExtract(doc, kb, config.max_ngram);
  const MatrixStage matrix = RunMatrix(terms, kb);
  const GraphStage graph = RunFilter(matrix, config.edge_multiplier);
  PipelineResult result;
  result.layout = RunLayoutStage(graph, config.layout);
  result.document = ToGraphDocument(result.layout);
  result.output = Render(result.document, config.output_format);
  return result;
}

inline std::string SummaryLine(const LayoutStage& s) {
  return "termgraph: N=" + std::to_string(s.graph.node_count()) +
         " edges=" + std::to_string(s.graph.edges.size()) +
         " converged=" + (s.layout.converged ? "true" : "false") +
         " iterations=" + std::to_string(s.layout.iterations_used);
}

// Runs the pipeline, writes the output atomically and reports on `err`.
// Returns the process exit status.
inline int RunPipelineToOutput(const PipelineConfig& config,
                               std::ostream& err) {
  try {
    const PipelineResult result = RunPipeline(config);
    WriteOutputAtomic(config.output_path, result.output);
    if (!config.quiet) err << SummaryLine(result.layout) << "\n";
    return kExitOk;
  } catch (const Error& e) {
    err << "termgraph: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "termgraph: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace termgraph
