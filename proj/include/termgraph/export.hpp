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

// Serializers for the laid-out backbone graph: canonical JSON (see
// docs/graph.schema.json), GraphML, Graphviz DOT and a plain grayscale SVG.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "termgraph/backbone.hpp"
#include "termgraph/error.hpp"
#include "termgraph/layout.hpp"

namespace termgraph {

struct GraphNode {
  std::size_t id = 0;
  std::string label;
  double x = 0;
  double y = 0;
  std::size_t degree = 0;
  std::size_t frequency = 0;
  bool operator==(const GraphNode&) const = default;
};

struct GraphEdge {
  std::size_t source = 0;
  std::size_t target = 0;
  double weight = 0;
  bool in_mst = false;
  bool operator==(const GraphEdge&) const = default;
};

struct GraphMetadata {
  std::string kb_name;
  std::string source_label;
  std::size_t n = 0;
  std::size_t edge_budget = 0;
  std::uint64_t seed = 0;
  bool operator==(const GraphMetadata&) const = default;
};

struct GraphDocument {
  std::vector<GraphNode> nodes;
  std::vector<GraphEdge> edges;
  GraphMetadata metadata;

  // Throws kFormatError on duplicate node ids, dangling edge endpoints or a
  // node count that disagrees with metadata.
  void Validate() const {
    std::set<std::size_t> ids;
    for (const auto& node : nodes) {
      if (!ids.insert(node.id).second) {
        throw Error(Errc::kFormatError,
                    "duplicate node id " + std::to_string(node.id));
      }
    }
    for (const auto& edge : edges) {
      if (!ids.contains(edge.source) || !ids.contains(edge.target)) {
        throw Error(Errc::kFormatError,
                    "edge " + std::to_string(edge.source) + "-" +
                        std::to_string(edge.target) +
                        " refers to a missing node");
      }
    }
    if (metadata.n != nodes.size()) {
      throw Error(Errc::kFormatError, "metadata N disagrees with node count");
    }
  }

  bool operator==(const GraphDocument&) const = default;
};

inline GraphDocument MakeGraphDocument(
    const FilteredGraph& graph, const LayoutPositions& layout,
    const std::vector<std::size_t>& frequencies, GraphMetadata metadata) {
  const std::size_t n = graph.node_count();
  if (layout.coords.size() != n || frequencies.size() != n) {
    throw Error(Errc::kFormatError,
                "layout or frequencies do not match the graph");
  }
  GraphDocument doc;
  std::vector<std::size_t> degree(n, 0);
  for (const Edge& e : graph.edges) {
    ++degree[e.u];
    ++degree[e.v];
    doc.edges.push_back({e.u, e.v, e.weight, e.in_mst});
  }
  for (std::size_t i = 0; i < n; ++i) {
    doc.nodes.push_back({i, graph.terms[i], layout.coords[i].x,
                         layout.coords[i].y, degree[i], frequencies[i]});
  }
  metadata.n = n;
  metadata.edge_budget = graph.edge_budget;
  doc.metadata = std::move(metadata);
  return doc;
}

namespace export_internal {

inline std::string Fixed17(double value) {
  if (!std::isfinite(value)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

inline void WriteCanonical(const nlohmann::json& j, int depth,
                           std::string* out) {
  const auto indent = [&](int d) { out->append(2 * d, ' '); };
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        *out += "{}";
        return;
      }
      *out += "{\n";
      bool first = true;
      // nlohmann::json keeps object keys in a std::map, i.e. sorted.
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) *out += ",\n";
        first = false;
        indent(depth + 1);
        *out += nlohmann::json(it.key()).dump();
        *out += ": ";
        WriteCanonical(it.value(), depth + 1, out);
      }
      *out += "\n";
      indent(depth);
      *out += "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        *out += "[]";
        return;
      }
      *out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0) *out += ",\n";
        indent(depth + 1);
        WriteCanonical(j[i], depth + 1, out);
      }
      *out += "\n";
      indent(depth);
      *out += "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      *out += Fixed17(j.get<double>());
      return;
    default:
      *out += j.dump();
      return;
  }
}

inline std::string XmlEscape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline std::string DotEscape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      out.push_back('\\');
      out.push_back(c);
    } else if (c == '\n') {
      out += "\\n";
    } else {
      out.push_back(c);
    }
  }
  return out;
}

inline std::string Num(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

// Compact formatting for drawing coordinates.
inline std::string Coord(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return buf;
}

}  // namespace export_internal

// Object keys sorted, two-space indentation, floats with 17 significant
// digits, trailing newline. Equal values serialize to identical bytes.
inline std::string CanonicalJson(const nlohmann::json& j) {
  std::string out;
  export_internal::WriteCanonical(j, 0, &out);
  out += "\n";
  return out;
}

inline nlohmann::json GraphDocumentToJsonValue(const GraphDocument& doc) {
  nlohmann::json nodes = nlohmann::json::array();
  for (const auto& node : doc.nodes) {
    nodes.push_back({{"id", node.id},
                     {"label", node.label},
                     {"x", node.x},
                     {"y", node.y},
                     {"degree", node.degree},
                     {"frequency", node.frequency}});
  }
  nlohmann::json edges = nlohmann::json::array();
  for (const auto& edge : doc.edges) {
    edges.push_back({{"source", edge.source},
                     {"target", edge.target},
                     {"weight", edge.weight},
                     {"in_mst", edge.in_mst}});
  }
  return {{"nodes", std::move(nodes)},
          {"edges", std::move(edges)},
          {"metadata",
           {{"kb_name", doc.metadata.kb_name},
            {"source_label", doc.metadata.source_label},
            {"N", doc.metadata.n},
            {"edge_budget", doc.metadata.edge_budget},
            {"seed", doc.metadata.seed}}}};
}

inline std::string ToJson(const GraphDocument& doc) {
  return CanonicalJson(GraphDocumentToJsonValue(doc));
}

inline GraphDocument GraphDocumentFromJsonValue(const nlohmann::json& j) {
  GraphDocument doc;
  try {
    for (const auto& node : j.at("nodes")) {
      doc.nodes.push_back({node.at("id").get<std::size_t>(),
                           node.at("label").get<std::string>(),
                           node.at("x").get<double>(),
                           node.at("y").get<double>(),
                           node.at("degree").get<std::size_t>(),
                           node.at("frequency").get<std::size_t>()});
    }
    for (const auto& edge : j.at("edges")) {
      doc.edges.push_back({edge.at("source").get<std::size_t>(),
                           edge.at("target").get<std::size_t>(),
                           edge.at("weight").get<double>(),
                           edge.at("in_mst").get<bool>()});
    }
    const auto& meta = j.at("metadata");
    doc.metadata.kb_name = meta.at("kb_name").get<std::string>();
    doc.metadata.source_label = meta.at("source_label").get<std::string>();
    doc.metadata.n = meta.at("N").get<std::size_t>();
    doc.metadata.edge_budget = meta.at("edge_budget").get<std::size_t>();
    doc.metadata.seed = meta.at("seed").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kFormatError, std::string("graph document: ") + e.what());
  }
  doc.Validate();
  return doc;
}

inline GraphDocument ParseGraphJson(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::kFormatError, std::string("graph document: ") + e.what());
  }
  return GraphDocumentFromJsonValue(j);
}

inline std::string ToGraphMl(const GraphDocument& doc) {
  using export_internal::Num;
  using export_internal::XmlEscape;
  std::string out =
      "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
      "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
      "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
      "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n"
      "  <key id=\"kb_name\" for=\"graph\" attr.name=\"kb_name\" "
      "attr.type=\"string\"/>\n"
      "  <key id=\"source_label\" for=\"graph\" attr.name=\"source_label\" "
      "attr.type=\"string\"/>\n"
      "  <key id=\"edge_budget\" for=\"graph\" attr.name=\"edge_budget\" "
      "attr.type=\"long\"/>\n"
      "  <key id=\"seed\" for=\"graph\" attr.name=\"seed\" "
      "attr.type=\"string\"/>\n"
      "  <key id=\"label\" for=\"node\" attr.name=\"label\" "
      "attr.type=\"string\"/>\n"
      "  <key id=\"x\" for=\"node\" attr.name=\"x\" attr.type=\"double\"/>\n"
      "  <key id=\"y\" for=\"node\" attr.name=\"y\" attr.type=\"double\"/>\n"
      "  <key id=\"degree\" for=\"node\" attr.name=\"degree\" "
      "attr.type=\"long\"/>\n"
      "  <key id=\"frequency\" for=\"node\" attr.name=\"frequency\" "
      "attr.type=\"long\"/>\n"
      "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" "
      "attr.type=\"double\"/>\n"
      "  <key id=\"in_mst\" for=\"edge\" attr.name=\"in_mst\" "
      "attr.type=\"boolean\"/>\n"
      "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  out += "    <data key=\"kb_name\">" + XmlEscape(doc.metadata.kb_name) +
         "</data>\n";
  out += "    <data key=\"source_label\">" +
         XmlEscape(doc.metadata.source_label) + "</data>\n";
  out += "    <data key=\"edge_budget\">" +
         std::to_string(doc.metadata.edge_budget) + "</data>\n";
  out += "    <data key=\"seed\">" + std::to_string(doc.metadata.seed) +
         "</data>\n";
  for (const auto& node : doc.nodes) {
    out += "    <node id=\"n" + std::to_string(node.id) + "\">\n";
    out += "      <data key=\"label\">" + XmlEscape(node.label) + "</data>\n";
    out += "      <data key=\"x\">" + Num(node.x) + "</data>\n";
    out += "      <data key=\"y\">" + Num(node.y) + "</data>\n";
    out += "      <data key=\"degree\">" + std::to_string(node.degree) +
           "</data>\n";
    out += "      <data key=\"frequency\">" + std::to_string(node.frequency) +
           "</data>\n";
    out += "    </node>\n";
  }
  for (std::size_t i = 0; i < doc.edges.size(); ++i) {
    const auto& edge = doc.edges[i];
    out += "    <edge id=\"e" + std::to_string(i) + "\" source=\"n" +
           std::to_string(edge.source) + "\" target=\"n" +
           std::to_string(edge.target) + "\">\n";
    out += "      <data key=\"weight\">" + Num(edge.weight) + "</data>\n";
    out += std::string("      <data key=\"in_mst\">") +
           (edge.in_mst ? "true" : "false") + "</data>\n";
    out += "    </edge>\n";
  }
  out += "  </graph>\n</graphml>\n";
  return out;
}

// Positions go into `pos` with a trailing '!' so neato -n keeps them fixed.
inline std::string ToDot(const GraphDocument& doc) {
  using export_internal::DotEscape;
  using export_internal::Num;
  std::string out = "graph termgraph {\n";
  out += "  graph [kb_name=\"" + DotEscape(doc.metadata.kb_name) +
         "\", source_label=\"" + DotEscape(doc.metadata.source_label) +
         "\", edge_budget=" + std::to_string(doc.metadata.edge_budget) +
         ", seed=\"" + std::to_string(doc.metadata.seed) + "\"];\n";
  out += "  node [shape=circle, color=\"#000000\", fontcolor=\"#000000\"];\n";
  for (const auto& node : doc.nodes) {
    out += "  n" + std::to_string(node.id) + " [label=\"" +
           DotEscape(node.label) + "\", pos=\"" + Num(node.x) + "," +
           Num(node.y) + "!\", degree=" + std::to_string(node.degree) +
           ", frequency=" + std::to_string(node.frequency) + "];\n";
  }
  for (const auto& edge : doc.edges) {
    out += "  n" + std::to_string(edge.source) + " -- n" +
           std::to_string(edge.target) + " [weight=" + Num(edge.weight) +
           ", in_mst=" + (edge.in_mst ? "true" : "false") +
           (edge.in_mst ? ", penwidth=2.5, color=\"#333333\""
                        : ", penwidth=1, color=\"#999999\"") +
           "];\n";
  }
  out += "}\n";
  return out;
}

struct SvgStyle {
  // Off: tree edges are drawn in a single accent colour instead of dark gray.
  bool grayscale = true;
  double mst_stroke_factor = 2.5;
};

// One circle and one label per node, one line per edge. The viewBox is the
// coordinate bounding box widened by 5% of its extent on every side.
inline std::string ToSvg(const GraphDocument& doc, const SvgStyle& style = {}) {
  using export_internal::Coord;
  using export_internal::XmlEscape;
  double min_x = 0, max_x = 0, min_y = 0, max_y = 0;
  if (!doc.nodes.empty()) {
    min_x = max_x = doc.nodes.front().x;
    min_y = max_y = doc.nodes.front().y;
    for (const auto& node : doc.nodes) {
      min_x = std::min(min_x, node.x);
      max_x = std::max(max_x, node.x);
      min_y = std::min(min_y, node.y);
      max_y = std::max(max_y, node.y);
    }
  }
  double width = max_x - min_x;
  double height = max_y - min_y;
  const double extent = std::max({width, height, 0.0});
  if (width <= 0) width = extent > 0 ? extent : 1.0;
  if (height <= 0) height = extent > 0 ? extent : 1.0;
  if (max_x == min_x) min_x -= width / 2;
  if (max_y == min_y) min_y -= height / 2;
  const double margin_x = 0.05 * width;
  const double margin_y = 0.05 * height;
  const double scale = std::max(width, height);
  const double radius = 0.008 * scale;
  const double font = 0.018 * scale;
  const double edge_stroke = 0.0015 * scale;

  std::unordered_map<std::size_t, const GraphNode*> by_id;
  for (const auto& node : doc.nodes) by_id.emplace(node.id, &node);
  const auto find = [&](std::size_t id) -> const GraphNode& {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(Errc::kFormatError, "edge refers to missing node");
    }
    return *it->second;
  };

  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" +
         Coord(min_x - margin_x) + " " + Coord(min_y - margin_y) + " " +
         Coord(width + 2 * margin_x) + " " + Coord(height + 2 * margin_y) +
         "\">\n";
  out += "  <g stroke-linecap=\"round\">\n";
  for (const auto& edge : doc.edges) {
    const GraphNode& a = find(edge.source);
    const GraphNode& b = find(edge.target);
    const char* colour = edge.in_mst ? (style.grayscale ? "#333333" : "#1f4e9c")
                                     : "#aaaaaa";
    const double stroke =
        edge.in_mst ? edge_stroke * style.mst_stroke_factor : edge_stroke;
    out += "    <line x1=\"" + Coord(a.x) + "\" y1=\"" + Coord(a.y) +
           "\" x2=\"" + Coord(b.x) + "\" y2=\"" + Coord(b.y) + "\" stroke=\"" +
           colour + "\" stroke-width=\"" + Coord(stroke) + "\"/>\n";
  }
  out += "  </g>\n  <g fill=\"#ffffff\" stroke=\"#000000\" stroke-width=\"" +
         Coord(edge_stroke) + "\">\n";
  for (const auto& node : doc.nodes) {
    out += "    <circle cx=\"" + Coord(node.x) + "\" cy=\"" + Coord(node.y) +
           "\" r=\"" + Coord(radius) + "\"/>\n";
  }
  out += "  </g>\n  <g font-family=\"sans-serif\" font-size=\"" + Coord(font) +
         "\" fill=\"#000000\" text-anchor=\"middle\">\n";
  for (const auto& node : doc.nodes) {
    const std::string label =
        node.label.empty() ? std::to_string(node.id) : node.label;
    out += "    <text x=\"" + Coord(node.x) + "\" y=\"" +
           Coord(node.y - 1.5 * radius) + "\">" + XmlEscape(label) +
           "</text>\n";
  }
  out += "  </g>\n</svg>\n";
  return out;
}

}  // namespace termgraph
