#pragma once

// JSON graph files:
//   {"nodes":[{"id","label","effectiveness","cost","capacity"}],
//    "edges":[{"from","to","weight","objective_cost"}]}
// Missing "capacity" = unbounded, missing "objective_cost" = 0, unknown keys
// are rejected.

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "mcbsg/error.hpp"
#include "mcbsg/graph.hpp"

namespace mcbsg {

using Json = nlohmann::ordered_json;

namespace io {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path + "'", {path});
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write '" + path + "'", {path});
  out << content;
}

inline Json parse_json(std::string_view text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorKind::ParseError,
                origin + ": invalid JSON at byte " + std::to_string(e.byte),
                {origin, std::to_string(e.byte)});
  }
}

inline void require_object(const Json& j, const std::string& where) {
  if (!j.is_object())
    throw Error(ErrorKind::ParseError, where + ": expected an object", {where});
}

inline void reject_unknown_keys(const Json& j, const std::string& where,
                                std::initializer_list<std::string_view> known) {
  for (const auto& item : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || item.key() == k;
    if (!ok)
      throw Error(ErrorKind::ParseError,
                  where + ": unknown key '" + item.key() + "'", {where, item.key()});
  }
}

inline const Json& required(const Json& j, const std::string& key,
                            const std::string& where) {
  auto it = j.find(key);
  if (it == j.end())
    throw Error(ErrorKind::ParseError, where + ": missing key '" + key + "'",
                {where, key});
  return *it;
}

inline double number(const Json& j, const std::string& where) {
  if (!j.is_number())
    throw Error(ErrorKind::ParseError, where + ": expected a number", {where});
  return j.get<double>();
}

inline std::string string(const Json& j, const std::string& where) {
  if (!j.is_string())
    throw Error(ErrorKind::ParseError, where + ": expected a string", {where});
  return j.get<std::string>();
}

inline const Json& array(const Json& j, const std::string& where) {
  if (!j.is_array())
    throw Error(ErrorKind::ParseError, where + ": expected an array", {where});
  return j;
}

}  // namespace io

inline SkillsGraph graph_from_json(const Json& doc, GraphOptions options = {}) {
  io::require_object(doc, "graph");
  io::reject_unknown_keys(doc, "graph", {"nodes", "edges"});

  std::vector<SkillNode> nodes;
  const Json& jnodes = io::array(io::required(doc, "nodes", "graph"), "nodes");
  for (std::size_t i = 0; i < jnodes.size(); ++i) {
    const std::string where = "nodes[" + std::to_string(i) + "]";
    const Json& jn = jnodes[i];
    io::require_object(jn, where);
    io::reject_unknown_keys(jn, where,
                            {"id", "label", "effectiveness", "cost", "capacity"});
    SkillNode n;
    n.id = io::string(io::required(jn, "id", where), where + ".id");
    n.label = jn.contains("label") ? io::string(jn["label"], where + ".label") : n.id;
    n.effectiveness = io::number(io::required(jn, "effectiveness", where),
                                 where + ".effectiveness");
    n.cost = io::number(io::required(jn, "cost", where), where + ".cost");
    if (jn.contains("capacity") && !jn["capacity"].is_null())
      n.capacity = io::number(jn["capacity"], where + ".capacity");
    nodes.push_back(std::move(n));
  }

  std::vector<DependencyEdge> edges;
  if (doc.contains("edges")) {
    const Json& jedges = io::array(doc["edges"], "edges");
    for (std::size_t i = 0; i < jedges.size(); ++i) {
      const std::string where = "edges[" + std::to_string(i) + "]";
      const Json& je = jedges[i];
      io::require_object(je, where);
      io::reject_unknown_keys(je, where, {"from", "to", "weight", "objective_cost"});
      DependencyEdge e;
      e.from = io::string(io::required(je, "from", where), where + ".from");
      e.to = io::string(io::required(je, "to", where), where + ".to");
      e.weight = io::number(io::required(je, "weight", where), where + ".weight");
      if (je.contains("objective_cost"))
        e.objective_cost = io::number(je["objective_cost"], where + ".objective_cost");
      edges.push_back(std::move(e));
    }
  }
  return build_graph(std::move(nodes), std::move(edges), options);
}

inline SkillsGraph parse_graph(std::string_view text, GraphOptions options = {},
                               const std::string& origin = "graph") {
  return graph_from_json(io::parse_json(text, origin), options);
}

inline SkillsGraph load_graph(const std::string& path, GraphOptions options = {}) {
  return parse_graph(io::read_file(path), options, path);
}

inline Json graph_to_json(const SkillsGraph& graph) {
  Json nodes = Json::array();
  for (const auto& n : graph.nodes()) {
    Json jn = {{"id", n.id},
               {"label", n.label},
               {"effectiveness", n.effectiveness},
               {"cost", n.cost}};
    if (n.capacity) jn["capacity"] = *n.capacity;
    nodes.push_back(std::move(jn));
  }
  Json edges = Json::array();
  for (const auto& e : graph.edges())
    edges.push_back({{"from", e.from},
                     {"to", e.to},
                     {"weight", e.weight},
                     {"objective_cost", e.objective_cost}});
  return Json{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

inline Json scores_to_json(const Scores& scores) {
  Json out = Json::object();
  for (const auto& [id, value] : scores.entries()) out[id] = value;
  return out;
}

}  // namespace mcbsg
