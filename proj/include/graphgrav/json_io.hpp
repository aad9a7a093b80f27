#pragma once

// JSON encodings of graphs, regions, settings and reports.
//   graph:   {"vertices":[str], "edges":[{"u":str,"v":str,"len":float}]}
//   region:  {"sigma":[str]}
//   setting: {"lengths":[{"u":str,"v":str,"len":float}]}

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "graphgrav/action.hpp"
#include "graphgrav/curvature.hpp"
#include "graphgrav/error.hpp"
#include "graphgrav/graph.hpp"
#include "graphgrav/search.hpp"
#include "graphgrav/tree_dynamics.hpp"

namespace graphgrav {

using Json = nlohmann::ordered_json;

inline Json parse_json(const std::string& text, const std::string& origin = "input") {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(Errc::Parse, origin + ": " + e.what());
  }
}

inline Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Parse, "cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

namespace detail {

template <class T>
T field(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(Errc::Parse, std::string(where) + ": missing \"" + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw Error(Errc::Parse, std::string(where) + ": \"" + key + "\" has the wrong type");
  }
}

inline std::vector<WeightedEdge> edge_list(const Json& arr, const char* where) {
  if (!arr.is_array()) throw Error(Errc::Parse, std::string(where) + " must be an array");
  std::vector<WeightedEdge> out;
  for (const auto& e : arr) {
    out.push_back({field<std::string>(e, "u", where), field<std::string>(e, "v", where),
                   field<double>(e, "len", where)});
  }
  return out;
}

}  // namespace detail

inline WeightedGraph graph_from_json(const Json& j) {
  auto ids = detail::field<std::vector<std::string>>(j, "vertices", "graph");
  if (!j.contains("edges")) throw Error(Errc::Parse, "graph: missing \"edges\"");
  return build_graph(std::move(ids), detail::edge_list(j.at("edges"), "graph edges"));
}

inline Json graph_to_json(const WeightedGraph& g) {
  Json j;
  j["vertices"] = g.names();
  j["edges"] = Json::array();
  for (const auto& e : g.edges()) {
    j["edges"].push_back({{"u", g.name(e.u)}, {"v", g.name(e.v)}, {"len", e.length}});
  }
  return j;
}

inline Region region_from_json(const WeightedGraph& g, const Json& j) {
  auto ids = detail::field<std::vector<std::string>>(j, "sigma", "region");
  return extract_region(g, ids);
}

inline Json region_to_json(const WeightedGraph& g, const Region& r) {
  Json j;
  j["sigma"] = Json::array();
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    if (r.contains(v)) j["sigma"].push_back(g.name(v));
  }
  return j;
}

// Every edge of g must appear exactly once.
inline Setting setting_from_json(const WeightedGraph& g, const Json& j) {
  if (!j.contains("lengths")) throw Error(Errc::Parse, "setting: missing \"lengths\"");
  auto entries = detail::edge_list(j.at("lengths"), "setting lengths");
  Setting s{std::vector<double>(g.edge_count(), 0.0)};
  std::vector<char> seen(g.edge_count(), 0);
  for (const auto& we : entries) {
    EdgeIndex e = g.require_edge(g.index_of(we.u), g.index_of(we.v));
    if (seen[e]) throw Error(Errc::DuplicateEdge, "setting lists <" + we.u + "," + we.v + "> twice");
    seen[e] = 1;
    if (!(we.length > 0.0)) {
      throw Error(Errc::NonpositiveLength, "setting gives <" + we.u + "," + we.v + "> length " +
                                               std::to_string(we.length));
    }
    s.lengths[e] = we.length;
  }
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    if (!seen[e]) {
      throw Error(Errc::BadParams, "setting misses <" + g.name(g.edge(e).u) + "," +
                                       g.name(g.edge(e).v) + ">");
    }
  }
  return s;
}

// Partial setting: listed edges only.
inline PartialSetting partial_setting_from_json(const WeightedGraph& g, const Json& j) {
  if (!j.contains("lengths")) throw Error(Errc::Parse, "setting: missing \"lengths\"");
  PartialSetting out;
  for (const auto& we : detail::edge_list(j.at("lengths"), "setting lengths")) {
    if (!(we.length > 0.0)) throw Error(Errc::NonpositiveLength, "fixed length must be positive");
    out[g.require_edge(g.index_of(we.u), g.index_of(we.v))] = we.length;
  }
  return out;
}

inline Json setting_to_json(const WeightedGraph& g, const Setting& s) {
  Json j;
  j["lengths"] = Json::array();
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    j["lengths"].push_back(
        {{"u", g.name(g.edge(e).u)}, {"v", g.name(g.edge(e).v)}, {"len", s.lengths.at(e)}});
  }
  return j;
}

inline Json edge_key(const WeightedGraph& g, EdgeIndex e) {
  return Json::array({g.name(g.edge(e).u), g.name(g.edge(e).v)});
}

inline Json action_to_json(const WeightedGraph& g, const ActionReport& r) {
  Json j;
  j["variant"] = variant_name(r.variant);
  j["total"] = r.total;
  j["bound_upper"] = r.bound_upper;
  j["identity_total"] = r.identity_total;
  j["per_edge"] = Json::array();
  for (const auto& [e, k] : r.per_edge) {
    j["per_edge"].push_back({{"edge", edge_key(g, e)}, {"kappa", k}});
  }
  return j;
}

inline Json eom_to_json(const WeightedGraph& g, const EomReport& r) {
  Json j;
  j["is_solution"] = r.is_solution;
  j["max_abs_residual"] = r.max_abs_residual;
  j["max_rel_residual"] = r.max_rel_residual;
  j["residuals"] = Json::array();
  for (std::size_t k = 0; k < r.edges.size(); ++k) {
    j["residuals"].push_back({{"edge", edge_key(g, r.edges[k])}, {"residual", r.residuals[k]}});
  }
  return j;
}

inline Json search_to_json(const WeightedGraph& g, const SearchResult& r) {
  Json j;
  j["objective"] = r.objective;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["status"] = status_name(r.status);
  j["restarts_used"] = r.restarts_used;
  j["at_box_boundary"] = r.at_box_boundary;
  j["setting"] = setting_to_json(g, r.setting);
  return j;
}

}  // namespace graphgrav
