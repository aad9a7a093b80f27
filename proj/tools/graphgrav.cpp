// graphgrav command-line front end.
//
// Exit codes: 0 ok, 1 semantic failure (not a solution, search did not
// converge, a reproduced value off), 2 parse error, 3 invariant violation.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include "graphgrav/graphgrav.hpp"

namespace gg = graphgrav;

namespace {

struct Globals {
  std::optional<double> t;
  double eps = 1e-4;
  double tol = 1e-9;
  std::uint64_t seed = 42;
  std::string out;
};

void emit(const Globals& G, const gg::Json& j) {
  std::string text = j.dump(2) + "\n";
  if (G.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(G.out);
  if (!f) throw gg::Error(gg::Errc::BadParams, "cannot write " + G.out);
  f << text;
}

gg::WeightedGraph load_graph(const std::string& graph_file, const std::string& setting_file) {
  auto g = gg::graph_from_json(gg::read_json_file(graph_file));
  if (!setting_file.empty()) {
    g = g.with_setting(gg::setting_from_json(g, gg::read_json_file(setting_file)));
  }
  return g;
}

gg::Json graph_bundle(const gg::WeightedGraph& g) {
  gg::Json j;
  j["graph"] = gg::graph_to_json(g);
  j["setting"] = gg::setting_to_json(g, g.setting());
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lin-Lu-Yau curvature, graph action and tree equations of motion"};
  app.require_subcommand(1);
  Globals G;
  app.add_option("--t", G.t, "finite t in (0,1) instead of the t->0 limit");
  app.add_option("--eps", G.eps, "matching length for perfect-matching settings");
  app.add_option("--tol", G.tol, "residual tolerance");
  app.add_option("--seed", G.seed, "random seed");
  app.add_option("--out", G.out, "write JSON here instead of stdout");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a graph family and a length setting");
  std::string kind;
  int q = 2, depth = 2, n = 4, radius = 1, margin = 2, m_count = 1, s_count = 1;
  double ratio = 2.0, alpha = 0.25, y = 3.0;
  gen->add_option("kind", kind,
                  "tree | path | complete | cycle | hex | matching | half-half | two-progression")
      ->required();
  gen->add_option("--q", q);
  gen->add_option("--depth", depth);
  gen->add_option("--n", n, "vertex count (complete, cycle, matching) or edge count (path)");
  gen->add_option("--radius", radius);
  gen->add_option("--margin", margin);
  gen->add_option("--ratio", ratio, "half-half ratio r > 1");
  gen->add_option("--alpha", alpha);
  gen->add_option("--y", y);
  gen->add_option("--m", m_count);
  gen->add_option("--s", s_count);

  // shared file options
  std::string graph_file, setting_file, region_file, boundary_file, init_file, variant = "plain",
                                                                              objective = "min";
  int restarts = 20;

  auto* curv = app.add_subcommand("curvature", "per-edge curvature");
  curv->add_option("graph", graph_file)->required();
  curv->add_option("--setting", setting_file);

  auto* act = app.add_subcommand("action", "action of a graph or region");
  act->add_option("graph", graph_file)->required();
  act->add_option("--setting", setting_file);
  act->add_option("--region", region_file);
  act->add_option("--variant", variant, "plain | ghy | region | tree");

  auto* ver = app.add_subcommand("verify-eom", "check the tree equations of motion");
  ver->add_option("graph", graph_file)->required();
  ver->add_option("--setting", setting_file);

  auto* solve = app.add_subcommand("solve-eom", "Newton solve with fixed boundary lengths");
  solve->add_option("graph", graph_file)->required();
  solve->add_option("--boundary", boundary_file, "setting JSON listing the fixed edges");
  solve->add_option("--init", init_file, "full setting used as the starting point");

  auto* search = app.add_subcommand("search", "extremize the action over free edges");
  search->add_option("graph", graph_file)->required();
  search->add_option("--fixed", boundary_file, "setting JSON listing the fixed edges");
  search->add_option("--objective", objective, "min | max");
  search->add_option("--restarts", restarts);

  auto* bounds = app.add_subcommand("bounds", "c^2/d bounds and the 2|E| action bound");
  bounds->add_option("graph", graph_file)->required();
  bounds->add_option("--setting", setting_file);

  auto* repro = app.add_subcommand("reproduce", "recompute the reference values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (gen->parsed()) {
      gg::Json j;
      if (kind == "tree") {
        j = graph_bundle(gg::gen_tree(q, depth));
      } else if (kind == "path") {
        j = graph_bundle(gg::gen_path(n));
      } else if (kind == "complete") {
        j = graph_bundle(gg::gen_complete(n));
      } else if (kind == "cycle") {
        j = graph_bundle(gg::gen_cycle(n));
      } else if (kind == "hex") {
        auto hex = gg::gen_hex_region({radius, margin});
        j = graph_bundle(hex.graph);
        j["region"] = gg::region_to_json(hex.graph, hex.region);
      } else if (kind == "matching") {
        auto g = gg::gen_complete(n);
        auto match = gg::find_perfect_matching(g);
        if (!match) throw gg::Error(gg::Errc::NotPerfect, "no perfect matching");
        j = graph_bundle(g.with_setting(gg::matching_setting(g, *match, G.eps)));
      } else if (kind == "half-half") {
        auto s = gg::half_half_setting(q, depth, std::vector<double>(depth, ratio));
        j = graph_bundle(gg::gen_tree(q, depth).with_setting(s));
      } else if (kind == "two-progression") {
        auto roots = gg::two_progression_x(alpha, y);
        double x = -1.0;
        for (double r : roots) {
          if (r > 0.0) x = r;
        }
        if (x <= 0.0) throw gg::Error(gg::Errc::InconsistentParams, "no positive root x");
        auto s = gg::two_progression_setting(q, m_count, s_count, alpha, x, y, depth);
        j = graph_bundle(gg::gen_tree(q, depth).with_setting(s));
        j["x"] = x;
      } else {
        throw gg::Error(gg::Errc::BadParams, "unknown family '" + kind + "'");
      }
      emit(G, j);
      return 0;
    }

    if (curv->parsed()) {
      auto g = load_graph(graph_file, setting_file);
      gg::GeodesicTable geo(g);
      gg::Json j;
      j["mode"] = G.t ? "finite_t" : "limit";
      if (G.t) j["t"] = *G.t;
      j["edges"] = gg::Json::array();
      for (gg::EdgeIndex e = 0; e < g.edge_count(); ++e) {
        const auto& ed = g.edge(e);
        gg::Json row;
        row["edge"] = gg::edge_key(g, e);
        if (G.t) {
          row["kappa_t"] = gg::kappa_t(g, geo, ed.u, ed.v, *G.t);
        } else {
          auto rep = gg::kappa_report(g, geo, ed.u, ed.v);
          row["kappa"] = rep.kappa;
          row["breakpoint_t"] = rep.breakpoint_t;
        }
        j["edges"].push_back(row);
      }
      emit(G, j);
      return 0;
    }

    if (act->parsed()) {
      auto g = load_graph(graph_file, setting_file);
      gg::GeodesicTable geo(g);
      gg::ActionReport rep;
      if (variant == "plain") {
        std::vector<gg::EdgeIndex> edges;
        if (region_file.empty()) {
          for (gg::EdgeIndex e = 0; e < g.edge_count(); ++e) edges.push_back(e);
        } else {
          edges = gg::region_from_json(g, gg::read_json_file(region_file)).sigma_edges;
        }
        rep = gg::action_plain(g, geo, edges);
      } else {
        if (region_file.empty()) {
          throw gg::Error(gg::Errc::BadParams, "variant '" + variant + "' needs --region");
        }
        auto region = gg::region_from_json(g, gg::read_json_file(region_file));
        if (variant == "ghy") {
          rep = gg::action_ghy(g, region);
        } else if (variant == "region") {
          rep = gg::action_region_plain(g, region);
        } else if (variant == "tree") {
          rep = gg::tree_action_hex(g, region);
        } else {
          throw gg::Error(gg::Errc::BadParams, "unknown variant '" + variant + "'");
        }
      }
      emit(G, gg::action_to_json(g, rep));
      return 0;
    }

    if (ver->parsed()) {
      auto g = load_graph(graph_file, setting_file);
      auto rep = gg::verify_solution(g, g.setting(), G.tol);
      emit(G, gg::eom_to_json(g, rep));
      return rep.is_solution ? 0 : 1;
    }

    if (solve->parsed()) {
      auto g = gg::graph_from_json(gg::read_json_file(graph_file));
      gg::PartialSetting boundary;
      if (!boundary_file.empty()) {
        boundary = gg::partial_setting_from_json(g, gg::read_json_file(boundary_file));
      }
      gg::Setting init = g.setting();
      if (!init_file.empty()) {
        init = gg::setting_from_json(g, gg::read_json_file(init_file));
      } else {
        std::mt19937_64 rng(G.seed);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        for (double& l : init.lengths) l *= std::exp(u(rng));
      }
      gg::NewtonOptions opt;
      opt.tol = G.tol;
      auto res = gg::newton_solve_teom(g, boundary, init, opt);
      emit(G, gg::search_to_json(g, res));
      return res.converged ? 0 : 1;
    }

    if (search->parsed()) {
      auto g = gg::graph_from_json(gg::read_json_file(graph_file));
      gg::PartialSetting fixed;
      if (!boundary_file.empty()) {
        fixed = gg::partial_setting_from_json(g, gg::read_json_file(boundary_file));
      }
      gg::Objective obj;
      if (objective == "min") {
        obj = gg::Objective::Min;
      } else if (objective == "max") {
        obj = gg::Objective::Max;
      } else {
        throw gg::Error(gg::Errc::BadParams, "objective must be min or max");
      }
      gg::ExtremizeOptions opt;
      opt.restarts = restarts;
      opt.seed = G.seed;
      auto res = gg::extremize_action(g, fixed, obj, opt);
      emit(G, gg::search_to_json(g, res));
      return 0;
    }

    if (bounds->parsed()) {
      auto g = load_graph(graph_file, setting_file);
      gg::GeodesicTable geo(g);
      gg::Json j;
      bool ok = true;
      j["vertices"] = gg::Json::array();
      for (gg::Vertex v = 0; v < g.vertex_count(); ++v) {
        auto rb = gg::ratio_bounds(g, geo, v);
        ok = ok && rb.lower_ok && rb.upper_ok;
        j["vertices"].push_back({{"vertex", g.name(v)},
                                 {"ratio", rb.ratio},
                                 {"degree", rb.degree},
                                 {"lower_ok", rb.lower_ok},
                                 {"upper_ok", rb.upper_ok},
                                 {"all_equal", rb.all_equal}});
      }
      double s = gg::action_plain(g).total;
      double bound = gg::bound_upper_global(g);
      ok = ok && s <= bound + 1e-9;
      j["action"] = s;
      j["bound_upper_global"] = bound;
      j["all_hold"] = ok;
      emit(G, j);
      return ok ? 0 : 1;
    }

    if (repro->parsed()) {
      auto rows = gg::reproduce_all(G.seed);
      gg::Json j = gg::Json::array();
      bool all = true;
      for (const auto& r : rows) {
        all = all && r.pass;
        j.push_back({{"id", r.id},
                     {"criterion", r.name},
                     {"expected", r.expected},
                     {"computed", r.computed},
                     {"pass", r.pass},
                     {"note", r.note}});
      }
      emit(G, {{"rows", j}, {"all_pass", all}});
      return all ? 0 : 1;
    }
  } catch (const gg::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code() == gg::Errc::Parse ? 2 : 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
