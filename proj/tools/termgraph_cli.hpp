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

// Command-line front end. Options live on the top-level app so a flat
// key=value config file (--config) can set any of them; flags given on the
// command line win over the file, and the file wins over built-in defaults.
//
//   termgraph run     text + kb            -> rendered graph (--format)
//   termgraph extract text + kb            -> terms record
//   termgraph matrix  terms record + kb    -> matrix record (--csv dump)
//   termgraph filter  matrix record        -> filtered_graph record
//   termgraph layout  filtered_graph record -> layout record
//   termgraph render  layout record        -> rendered graph (--format)
//
// Exit status: 0 ok, 1 output I/O failure, 2 usage, 3 knowledge-base load,
// 4 no terms found, 5 numerical failure.

#pragma once

#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "termgraph/pipeline.hpp"

namespace termgraph::cli {

namespace internal {

struct Options {
  PipelineConfig config;
  std::string kb_kind = "auto";
  std::string format = "json";
  std::string csv_path;
};

inline void Note(const Options& o, std::ostream& err, const std::string& s) {
  if (!o.config.quiet) err << s << "\n";
}

inline std::string CountsSummary(const TermSet& terms) {
  std::string s;
  for (const auto& [n, count] : terms.counts_by_n) {
    if (!s.empty()) s += ", ";
    s += std::to_string(n) + "-gram " + std::to_string(count);
  }
  return s;
}

inline int Extract(const Options& o, std::ostream& err) {
  const PipelineConfig& c = o.config;
  Document doc{ReadInput(c.input_path), InputLabel(c.input_path)};
  std::vector<std::string> remote_terms;
  if (c.kb_kind == KbKindOption::kRemote) {
    remote_terms = CandidateTerms(Tokenize(doc), c.max_ngram);
  }
  const KnowledgeBase kb = LoadKnowledgeBase(c, remote_terms);
  const TermStage stage = RunExtract(doc, kb, c.max_ngram);
  WriteOutputAtomic(c.output_path, TermStageToJson(stage));
  Note(o, err, "termgraph extract: N=" + std::to_string(stage.term_set.size()) +
                   " (" + CountsSummary(stage.term_set) + ")");
  return kExitOk;
}

inline int Matrix(const Options& o, std::ostream& err) {
  const PipelineConfig& c = o.config;
  const TermStage terms = TermStageFromJson(ReadInput(c.input_path));
  const KnowledgeBase kb = LoadKnowledgeBase(c, terms.term_set.terms);
  const MatrixStage stage = RunMatrix(terms, kb);
  if (!o.csv_path.empty()) WriteOutputAtomic(o.csv_path, MatrixToCsv(stage.matrix));
  WriteOutputAtomic(c.output_path, MatrixStageToJson(stage));
  const std::size_t n = stage.matrix.size();
  Note(o, err, "termgraph matrix: N=" + std::to_string(n) +
                   " pairs=" + std::to_string(n * (n - 1) / 2));
  return kExitOk;
}

inline int Filter(const Options& o, std::ostream& err) {
  const PipelineConfig& c = o.config;
  const GraphStage stage = RunFilter(
      MatrixStageFromJson(ReadInput(c.input_path)), c.edge_multiplier);
  WriteOutputAtomic(c.output_path, GraphStageToJson(stage));
  Note(o, err, "termgraph filter: N=" + std::to_string(stage.graph.node_count()) +
                   " edges=" + std::to_string(stage.graph.edges.size()));
  return kExitOk;
}

inline int Layout(const Options& o, std::ostream& err) {
  const PipelineConfig& c = o.config;
  c.layout.Validate();
  const LayoutStage stage =
      RunLayoutStage(GraphStageFromJson(ReadInput(c.input_path)), c.layout);
  WriteOutputAtomic(c.output_path, LayoutStageToJson(stage));
  Note(o, err, SummaryLine(stage));
  return kExitOk;
}

inline int RenderStage(const Options& o, std::ostream& /*err*/) {
  const PipelineConfig& c = o.config;
  const LayoutStage stage = LayoutStageFromJson(ReadInput(c.input_path));
  WriteOutputAtomic(c.output_path,
                    Render(ToGraphDocument(stage), c.output_format));
  return kExitOk;
}

}  // namespace internal

// Parses arguments and runs one subcommand. Returns the exit status.
inline int RunCli(int argc, const char* const* argv,
                  std::ostream& err = std::cerr) {
  using internal::Options;
  Options o;
  PipelineConfig& c = o.config;

  CLI::App app{"Turn a technical text into a filtered, laid-out term graph"};
  app.name("termgraph");
  app.set_config("--config", "", "key=value file supplying option defaults");
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("-i,--input", c.input_path,
                 "input file: text for run/extract, stage record otherwise "
                 "(default: stdin)");
  app.add_option("--kb", c.kb_path, "knowledge-base snapshot file");
  app.add_option("--kb-kind", o.kb_kind, "auto | embedding | taxonomy | remote")
      ->capture_default_str();
  app.add_option("--kb-name", c.kb_name,
                 "name recorded in outputs (default: snapshot file stem)");
  app.add_option("--kb-cache", c.kb_cache,
                 "cache directory for the remote knowledge base");
  app.add_option("--max-ngram", c.max_ngram, "longest phrase, in words")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--edge-multiplier", c.edge_multiplier,
                 "edge budget is ceil(multiplier * N)")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", c.layout.seed, "layout seed")->capture_default_str();
  app.add_option("--max-iters", c.layout.max_iterations,
                 "layout iteration cap")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--epsilon", c.layout.convergence_epsilon,
                 "layout stops once no node moves this far in a step")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--repulsion", c.layout.repulsion_scaling,
                 "layout repulsion scaling")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--gravity", c.layout.gravity, "layout gravity")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  app.add_option("--weight-floor", c.layout.weight_floor,
                 "smallest edge weight used for attraction")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("-o,--output", c.output_path, "output file (default: stdout)");
  app.add_option("--format", o.format, "json | graphml | dot | svg")
      ->capture_default_str();
  app.add_option("--csv", o.csv_path, "matrix: also dump the matrix as CSV");
  app.add_flag("-q,--quiet", c.quiet, "no summary on stderr");

  std::map<std::string, int (*)(const Options&, std::ostream&)> stages = {
      {"extract", internal::Extract}, {"matrix", internal::Matrix},
      {"filter", internal::Filter},   {"layout", internal::Layout},
      {"render", internal::RenderStage}};
  app.add_subcommand("run", "full pipeline: text -> rendered graph");
  app.add_subcommand("extract", "text -> terms record");
  app.add_subcommand("matrix", "terms record -> similarity matrix record");
  app.add_subcommand("filter", "matrix record -> filtered_graph record");
  app.add_subcommand("layout", "filtered_graph record -> layout record");
  app.add_subcommand("render", "layout record -> rendered graph");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "termgraph: " << e.what() << "\n";
    return ExitCodeFor(Errc::kUsage);
  }

  try {
    c.kb_kind = ParseKbKind(o.kb_kind);
    c.output_format = ParseOutputFormat(o.format);
    if (c.kb_kind == KbKindOption::kRemote) {
      if (const char* url = std::getenv(kRemoteEndpointEnv)) c.kb_endpoint = url;
    }
    const std::string name = app.get_subcommands().front()->get_name();
    if (name == "run") return RunPipelineToOutput(c, err);
    return stages.at(name)(o, err);
  } catch (const Error& e) {
    err << "termgraph: " << e.what() << "\n";
    return ExitCodeFor(e.code());
  } catch (const std::exception& e) {
    err << "termgraph: " << e.what() << "\n";
    return kExitIo;
  }
}

inline int RunCli(const std::vector<std::string>& args,
                  std::ostream& err = std::cerr) {
  std::vector<const char*> argv = {"termgraph"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return RunCli(static_cast<int>(argv.size()), argv.data(), err);
}

}  // namespace termgraph::cli
