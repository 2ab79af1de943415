#ifndef CTOPO_CLI_HPP
#define CTOPO_CLI_HPP

#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "ctopo/designer.hpp"
#include "ctopo/dot.hpp"
#include "ctopo/generators.hpp"
#include "ctopo/io.hpp"
#include "ctopo/oracle.hpp"
#include "ctopo/system_model.hpp"

namespace ctopo::cli {

enum ExitCode : int { kOk = 0, kNegative = 1, kUsage = 2 };

namespace detail {

inline std::string format_cost(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

inline void print_edges(std::ostream& out, const EdgeSet& edges, const std::string& indent = "  ") {
  for (const auto& e : edges) out << indent << to_string(e) << "\n";
}

inline void print_report(std::ostream& out, const ControllabilityReport& r) {
  out << (r.controllable ? "structurally controllable" : "not structurally controllable") << "\n";
  out << "accessible: " << (r.accessible ? "yes" : "no") << "\n";
  if (!r.inaccessible_states.empty()) {
    out << "inaccessible states:";
    for (const auto& s : r.inaccessible_states) out << " " << to_string(s);
    out << "\n";
  }
  out << "maximum matching: " << r.matching_size << " of " << r.state_count << " (deficiency "
      << r.matching_deficiency() << ")\n";
}

inline void print_design(std::ostream& out, const DesignResult& r) {
  out << r.union_edges.size() << (r.union_edges.size() == 1 ? " interconnection" : " interconnections")
      << " needed\n";
  print_edges(out, r.union_edges);
  out << "stage 1 cost: " << format_cost(r.stage1_cost) << " (" << r.stage1_edges.size() << " edges)\n";
  out << "stage 2 cost: " << format_cost(r.stage2_cost) << " (" << r.stage2_edges.size() << " edges)\n";
  out << "total cost: " << format_cost(r.union_cost) << "\n";
  out << "lower bound: " << format_cost(r.lower_bound) << "\n";
  out << "ratio bound: " << format_cost(r.ratio_bound) << "\n";
}

inline void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidArgument(path + ": cannot write file");
  f << text;
}

inline int infeasible(std::ostream& out, const Infeasible& e, bool pretty) {
  if (pretty) {
    out << "infeasible: " << e.what() << "\n";
  } else {
    out << io::Json{{"error", "infeasible"}, {"message", e.what()}, {"report", io::to_json(e.report())}}.dump(2)
        << "\n";
  }
  return kNegative;
}

}  // namespace detail

/// Runs the command line tool; returns the process exit status.
inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interconnection topology design for structural controllability", "ctopo"};
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Human-readable output instead of JSON");

  std::string instance_path, edges_path;

  auto* check = app.add_subcommand("check", "Test structural controllability of a composite");
  check->add_option("instance", instance_path, "Instance file")->required();
  check->add_option("--edges", edges_path, "Interconnection overlay file");
  check->add_flag("--pretty", pretty, "Human-readable output");

  bool weighted = false, switched = false, json_flag = false;
  std::string dot_prefix;
  auto* design_cmd = app.add_subcommand("design", "Design an interconnection topology");
  design_cmd->add_option("instance", instance_path, "Instance file")->required();
  design_cmd->add_flag("--weighted", weighted, "Use the instance's interconnection costs");
  design_cmd->add_flag("--switched", switched, "Design over the union of all modes");
  design_cmd->add_option("--emit-dot", dot_prefix, "Write <prefix>-bipartite.dot and <prefix>-condensation.dot");
  design_cmd->add_flag("--json", json_flag, "JSON output (default)");
  design_cmd->add_flag("--pretty", pretty, "Human-readable output");

  double budget = 0.0;
  bool compare = false;
  std::string target = "full";
  std::size_t max_candidates = OracleOptions{}.max_candidates;
  std::uint64_t max_explored = OracleOptions{}.max_explored;
  auto* oracle = app.add_subcommand("oracle", "Exact minimum by exhaustive search");
  oracle->add_option("instance", instance_path, "Instance file")->required();
  auto* budget_opt = oracle->add_option("--budget", budget, "Decide whether cost <= budget is achievable");
  oracle->add_flag("--compare", compare, "Also run the designer and report the ratio");
  oracle->add_flag("--weighted", weighted, "Use the instance's interconnection costs");
  oracle->add_option("--target", target, "full, matching or accessibility")
      ->check(CLI::IsMember({"full", "matching", "accessibility"}));
  oracle->add_option("--max-candidates", max_candidates, "Candidate edge cap");
  oracle->add_option("--max-explored", max_explored, "Subset evaluation cap");
  oracle->add_flag("--pretty", pretty, "Human-readable output");

  std::string graph_path;
  std::size_t leader = 0;
  auto* reduction = app.add_subcommand("gen-reduction", "Build the hardness-reduction instance of a graph");
  reduction->add_option("graph", graph_path, "Graph file {\"vertices\": r, \"edges\": [[a, b], ...]}")->required();
  reduction->add_option("--leader", leader, "Vertex whose subsystem gets the input")->required();

  RandomInstanceOptions ro;
  auto* random = app.add_subcommand("gen-random", "Generate a reproducible random instance");
  random->add_option("--k", ro.subsystems, "Number of subsystems")->check(CLI::PositiveNumber);
  random->add_option("--n-min", ro.min_states, "Minimum state dimension")->check(CLI::PositiveNumber);
  random->add_option("--n-max", ro.max_states, "Maximum state dimension")->check(CLI::PositiveNumber);
  random->add_option("--m-min", ro.min_inputs, "Minimum input dimension");
  random->add_option("--m-max", ro.max_inputs, "Maximum input dimension");
  random->add_option("--density", ro.neighbor_density, "Probability of each ordered neighbour pair")
      ->check(CLI::Range(0.0, 1.0));
  random->add_option("--pattern-density", ro.pattern_density, "Probability of each A/B entry")
      ->check(CLI::Range(0.0, 1.0));
  random->add_option("--seed", ro.seed, "Random seed");

  std::string view = "digraph";
  auto* export_dot = app.add_subcommand("export-dot", "Render an instance as Graphviz DOT");
  export_dot->add_option("instance", instance_path, "Instance file")->required();
  export_dot->add_option("--view", view, "digraph, bipartite or condensation")
      ->check(CLI::IsMember({"digraph", "bipartite", "condensation"}));
  export_dot->add_option("--edges", edges_path, "Interconnection overlay file");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (*check) {
      auto inst = io::load_instance(instance_path);
      EdgeSet edges = edges_path.empty() ? EdgeSet{} : io::load_edges(edges_path);
      ControllabilityReport r;
      try {
        r = check_composite(inst, edges);
      } catch (const InadmissibleEdge& e) {
        err << "error: " << (edges_path.empty() ? std::string("edges") : edges_path) << ": " << e.what() << "\n";
        return kUsage;
      }
      if (pretty) {
        detail::print_report(out, r);
      } else {
        out << io::to_json(r).dump(2) << "\n";
      }
      return r.controllable ? kOk : kNegative;
    }

    if (*design_cmd) {
      auto inst = io::load_instance(instance_path);
      DesignResult r;
      try {
        r = switched ? design_switched(inst, weighted) : weighted ? design_weighted(inst) : design(inst);
      } catch (const Infeasible& e) {
        return detail::infeasible(out, e, pretty);
      }
      if (!dot_prefix.empty()) {
        const auto& target_inst = switched ? union_instance(inst).instance : inst;
        detail::write_file(dot_prefix + "-bipartite.dot", dot::bipartite(target_inst, r.stage1_edges));
        detail::write_file(dot_prefix + "-condensation.dot", dot::condensation(target_inst, r.stage2_edges));
      }
      if (pretty) {
        detail::print_design(out, r);
      } else {
        out << io::to_json(r).dump(2) << "\n";
      }
      return kOk;
    }

    if (*oracle) {
      auto inst = io::load_instance(instance_path);
      OracleOptions opt;
      opt.max_candidates = max_candidates;
      opt.max_explored = max_explored;
      std::optional<double> alpha;
      if (budget_opt->count() > 0) alpha = budget;
      OracleResult r;
      try {
        if (target == "matching") {
          if (alpha) throw InvalidArgument("--budget applies to the full target only");
          r = exact_min_for_matching(inst, weighted, opt);
        } else if (target == "accessibility") {
          if (alpha) throw InvalidArgument("--budget applies to the full target only");
          r = exact_min_for_accessibility(inst, weighted, opt);
        } else {
          r = exact_min_interconnections(inst, alpha, weighted, opt);
        }
      } catch (const Infeasible& e) {
        return detail::infeasible(out, e, pretty);
      } catch (const TooLarge& e) {
        if (pretty) {
          out << "too large: " << e.what() << "\n";
        } else {
          out << io::Json{{"error", "too-large"}, {"message", e.what()}}.dump(2) << "\n";
        }
        return kNegative;
      }
      auto doc = io::to_json(r);
      std::optional<DesignResult> d;
      if (compare) {
        d = weighted ? design_weighted(inst) : design(inst);
        doc["design_union_cost"] = d->union_cost;
        if (std::isfinite(r.optimum_cost)) {
          doc["ratio"] = r.optimum_cost > 0.0 ? d->union_cost / r.optimum_cost : 1.0;
        }
      }
      if (pretty) {
        if (alpha) {
          out << (*r.within_budget ? "yes" : "no") << ": cost <= " << detail::format_cost(*alpha)
              << (*r.within_budget ? " is achievable" : " is not achievable") << "\n";
        }
        if (std::isfinite(r.optimum_cost)) {
          out << "minimum cost: " << detail::format_cost(r.optimum_cost) << "\n";
          detail::print_edges(out, r.optimum_edges);
        }
        out << "subsets explored: " << r.explored << "\n";
        if (d) {
          out << "designer cost: " << detail::format_cost(d->union_cost) << "\n";
          if (doc.contains("ratio")) out << "ratio: " << doc["ratio"].get<double>() << "\n";
        }
      } else {
        out << doc.dump(2) << "\n";
      }
      return alpha && !*r.within_budget ? kNegative : kOk;
    }

    if (*reduction) {
      auto g = io::graph_from_json(io::parse_text(io::read_file(graph_path), graph_path));
      out << io::to_json(gen_reduction(g, leader)).dump(2) << "\n";
      return kOk;
    }

    if (*random) {
      out << io::to_json(gen_random(ro)).dump(2) << "\n";
      return kOk;
    }

    if (*export_dot) {
      auto inst = io::load_instance(instance_path);
      EdgeSet edges = edges_path.empty() ? EdgeSet{} : io::load_edges(edges_path);
      for (const auto& e : edges) {
        if (!inst.admits(e)) throw InadmissibleEdge(e);
      }
      if (view == "digraph") {
        out << dot::digraph(inst, edges);
      } else if (view == "bipartite") {
        out << dot::bipartite(inst, edges);
      } else {
        out << dot::condensation(inst, edges);
      }
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace ctopo::cli

#endif  // CTOPO_CLI_HPP
