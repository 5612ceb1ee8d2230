#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wordwalks/entropy.hpp"
#include "wordwalks/json_io.hpp"
#include "wordwalks/schreier.hpp"
#include "wordwalks/simulate.hpp"
#include "wordwalks/spectral.hpp"

// Command-line front end: reproducible experiments with a JSON summary
// (carrying the resolved manifest) and per-trial CSV.
//
// Exit codes: 0 success, 2 validation error, 3 certification or
// hypothesis failure.

namespace ww::cli {

namespace fs = std::filesystem;

struct OutputOptions {
  std::string out_dir;
  std::string format = "json";  // json | csv | both
};

namespace detail {

inline void add_output_options(CLI::App* cmd, OutputOptions& out) {
  cmd->add_option("--out", out.out_dir, "directory for summary.json / CSV artifacts");
  cmd->add_option("--format", out.format, "artifacts to write: json|csv|both")
      ->check(CLI::IsMember({"json", "csv", "both"}))
      ->capture_default_str();
}

inline void emit(const OutputOptions& opts, const Json& summary, const std::string& csv_name,
                 const std::string& csv_content, std::ostream& out) {
  out << summary.dump(2) << "\n";
  if (opts.out_dir.empty()) return;
  fs::create_directories(opts.out_dir);
  if (opts.format == "json" || opts.format == "both") {
    std::ofstream f(fs::path(opts.out_dir) / "summary.json");
    f << summary.dump(2) << "\n";
  }
  if (!csv_content.empty() && (opts.format == "csv" || opts.format == "both")) {
    std::ofstream f(fs::path(opts.out_dir) / csv_name);
    f << csv_content;
  }
}

inline std::string num(double v) { return Json(v).dump(); }

// --kernel/--base/--graph values may be shorthand strings, inline
// JSON, or paths to JSON files.
inline Json load_inline_or_file(const std::string& arg) {
  if (!arg.empty() && arg.front() == '{') return Json::parse(arg);
  std::ifstream f(arg);
  require(f.good(), "cannot read JSON file '" + arg + "'");
  Json j;
  f >> j;
  return j;
}

inline bool looks_like_json(const std::string& arg) {
  return (!arg.empty() && arg.front() == '{') ||
         arg.size() > 5 && arg.substr(arg.size() - 5) == ".json";
}

inline GraphSpec resolve_graph_arg(const std::string& arg) {
  if (looks_like_json(arg)) return parse_graph_spec(load_inline_or_file(arg));
  return parse_graph_shorthand(arg);
}

inline KernelSpec resolve_base_kernel_arg(const std::string& arg, const std::string& graph_arg) {
  if (looks_like_json(arg)) {
    auto spec = parse_kernel_spec(load_inline_or_file(arg));
    require(!spec.is_lamplighter(), "expected a base-graph kernel");
    return spec;
  }
  return parse_base_kernel_shorthand(arg, graph_arg);
}

// full kernel: base shorthand, or "sws"/"wos:a" with --base, or JSON
inline KernelSpec resolve_any_kernel_arg(const std::string& arg, const std::string& base_arg,
                                         const std::string& graph_arg) {
  if (looks_like_json(arg)) return parse_kernel_spec(load_inline_or_file(arg));
  auto colon = arg.find(':');
  std::string head = colon == std::string::npos ? arg : arg.substr(0, colon);
  if (head == "sws" || head == "wos") {
    require(!base_arg.empty(), "lamplighter kernels need --base");
    KernelSpec spec;
    spec.kind = head == "sws" ? KernelSpec::Kind::Sws : KernelSpec::Kind::Wos;
    spec.base.push_back(resolve_base_kernel_arg(base_arg, graph_arg));
    if (head == "wos") {
      require(colon != std::string::npos, "wos:a requires the mixing weight a");
      spec.a = std::stod(arg.substr(colon + 1));
    }
    return spec;
  }
  return resolve_base_kernel_arg(arg, graph_arg);
}

// Calls fn(kernel, base_graph, origin, metric) with the concrete base
// kernel; metric is the graph distance from the origin.
template <class F>
Json with_base_kernel(const KernelSpec& spec, F&& fn) {
  switch (spec.kind) {
    case KernelSpec::Kind::Srw:
      switch (spec.graph.family) {
        case GraphSpec::Family::Lattice: {
          LatticeGraph g(spec.graph.param);
          return fn(srw(g), g, g.origin(),
                    [g](const LatticeGraph::vertex_type& v) {
                      return static_cast<double>(g.distance(g.origin(), v));
                    });
        }
        case GraphSpec::Family::HomTreeFamily: {
          HomTree g(spec.graph.param);
          return fn(srw(g), g, g.origin(),
                    [](const std::string& w) { return static_cast<double>(w.size()); });
        }
        case GraphSpec::Family::Oriented: {
          OrientedTree g(spec.graph.param);
          return fn(srw(g), g, g.origin(), [g](const OrientedTree::Vertex& v) {
            return static_cast<double>(g.distance(g.origin(), v));
          });
        }
      }
      throw ValidationError("kernel: bad graph family");
    case KernelSpec::Kind::Biased: {
      ZLineGraph g;
      return fn(BiasedZ(spec.p), g, 0LL,
                [](long long x) { return static_cast<double>(std::llabs(x)); });
    }
    case KernelSpec::Kind::Oriented: {
      OrientedTreeKernel k(spec.q);
      OrientedTree g = k.tree;
      return fn(k, g, g.origin(), [g](const OrientedTree::Vertex& v) {
        return static_cast<double>(g.distance(g.origin(), v));
      });
    }
    default:
      throw ValidationError("expected a base-graph kernel");
  }
}

// Calls fn(lamplighter_kernel, base_graph, zero_config_start).
template <class F>
Json with_lamplighter_kernel(const KernelSpec& spec, F&& fn) {
  require(spec.is_lamplighter(), "expected a lamplighter kernel (sws or wos)");
  const auto& bspec = spec.base.at(0);
  auto lamp = LampKernel::uniform();
  return with_base_kernel(bspec, [&](auto base, auto graph, auto origin, auto) {
    using V = decltype(origin);
    LampState<V> start{{}, origin};
    if (spec.kind == KernelSpec::Kind::Wos) {
      return fn(walk_or_switch(spec.a, std::move(base), lamp), graph, start);
    }
    return fn(switch_walk_switch(lamp, std::move(base)), graph, start);
  });
}

inline std::string trials_csv(const std::vector<double>& per_trial, long long n) {
  std::string csv = "trial,n,statistic\n";
  for (std::size_t i = 0; i < per_trial.size(); ++i) {
    csv += std::to_string(i) + "," + std::to_string(n) + "," + num(per_trial[i]) + "\n";
  }
  return csv;
}

inline Json estimate_summary(const std::string& command, const Json& manifest,
                             const Estimate& est) {
  return {{"command", command},
          {"manifest", manifest},
          {"estimate", est.value},
          {"stderr", est.std_error},
          {"trials", est.trials},
          {"seed", manifest.at("seed")}};
}

}  // namespace detail

// ----------------------------------------------------------------------

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"walks on wreath products and language entropy on labelled digraphs"};
  app.require_subcommand(1);

  // shared option storage
  std::string kernel_arg, base_arg, graph_arg;
  std::uint64_t seed = 0;
  long long horizon = 1000;
  int trials = 100;
  int threads = 1;
  OutputOptions output;

  Json summary;
  std::string csv_name = "trials.csv";
  std::string csv;

  // ---------------- simulate ----------------
  auto* sim = app.add_subcommand("simulate", "Monte-Carlo estimators");
  sim->require_subcommand(1);

  auto add_sim_common = [&](CLI::App* cmd, bool needs_kernel) {
    if (needs_kernel) {
      cmd->add_option("--kernel", kernel_arg, "kernel spec (shorthand or JSON)")->required();
    }
    cmd->add_option("--base", base_arg, "base kernel for lamplighter constructions");
    cmd->add_option("--graph", graph_arg, "graph spec, e.g. lattice:1 | homtree:3 | oriented:2");
    cmd->add_option("--seed", seed, "base seed (required; no wall-clock default)")->required();
    cmd->add_option("--n", horizon, "horizon (steps)")->capture_default_str();
    cmd->add_option("--trials", trials, "number of trials")->capture_default_str();
    cmd->add_option("--threads", threads, "worker threads")->capture_default_str();
    detail::add_output_options(cmd, output);
  };

  auto* roe = sim->add_subcommand("rate-of-escape", "mean of d(o, X_n)/n");
  add_sim_common(roe, true);
  roe->callback([&] {
    auto spec = detail::resolve_base_kernel_arg(kernel_arg, graph_arg);
    SimConfig cfg{seed, horizon, trials, threads};
    Json manifest = {{"kernel", spec.to_json()}, {"n", horizon}, {"trials", trials},
                     {"seed", seed}, {"threads", threads}};
    summary = detail::with_base_kernel(spec, [&](auto k, auto, auto origin, auto metric) {
      auto res = rate_of_escape(k, origin, metric, cfg);
      csv = detail::trials_csv(res.per_trial, horizon);
      return detail::estimate_summary("simulate/rate-of-escape", manifest, res.estimate);
    });
  });

  auto* sup = sim->add_subcommand("support-growth", "mean of |supp(eta_n)|/n");
  add_sim_common(sup, true);
  sup->callback([&] {
    auto spec = detail::resolve_any_kernel_arg(kernel_arg, base_arg, graph_arg);
    SimConfig cfg{seed, horizon, trials, threads};
    Json manifest = {{"kernel", spec.to_json()}, {"n", horizon}, {"trials", trials},
                     {"seed", seed}, {"threads", threads}};
    summary = detail::with_lamplighter_kernel(spec, [&](auto k, auto, auto start) {
      auto res = support_growth(k, start, cfg);
      csv = detail::trials_csv(res.per_trial, horizon);
      return detail::estimate_summary("simulate/support-growth", manifest, res.estimate);
    });
  });

  auto* rng_cmd = sim->add_subcommand("range", "number of distinct visited points R_n");
  add_sim_common(rng_cmd, true);
  rng_cmd->callback([&] {
    auto spec = detail::resolve_base_kernel_arg(kernel_arg, graph_arg);
    SimConfig cfg{seed, horizon, trials, threads};
    Json manifest = {{"kernel", spec.to_json()}, {"n", horizon}, {"trials", trials},
                     {"seed", seed}, {"threads", threads}};
    summary = detail::with_base_kernel(spec, [&](auto k, auto, auto origin, auto) {
      auto per_trial = run_trials(cfg, [&](int, RngStream& stream) {
        auto cur = origin;
        ww::detail::RangeTracker<decltype(origin)> tracker;
        for (long long i = 0; i < horizon; ++i) {
          k.step(cur, stream);
          tracker.add(cur);
        }
        return static_cast<double>(tracker.finalize());
      });
      csv = detail::trials_csv(per_trial, horizon);
      return detail::estimate_summary("simulate/range", manifest, summarize(per_trial));
    });
  });

  auto* swsret = sim->add_subcommand(
      "sws-return", "switch-walk-switch return probability via E[2^-R_n 1{X_n=o}]");
  add_sim_common(swsret, false);
  swsret->get_option("--base")->required();
  swsret->callback([&] {
    auto spec = detail::resolve_base_kernel_arg(base_arg, graph_arg);
    SimConfig cfg{seed, horizon, trials, threads};
    Json manifest = {{"base", spec.to_json()}, {"n", horizon}, {"trials", trials},
                     {"seed", seed}, {"threads", threads}};
    summary = detail::with_base_kernel(spec, [&](auto k, auto, auto origin, auto) {
      auto res = sws_return_probability(k, origin, horizon, cfg);
      csv = detail::trials_csv(res.per_trial, horizon);
      return detail::estimate_summary("simulate/sws-return", manifest, res.estimate);
    });
  });

  double laplace_t = 1.0;
  auto* lap = sim->add_subcommand("laplace-range", "mean of exp(-t R_n)");
  add_sim_common(lap, false);
  lap->get_option("--base")->required();
  lap->add_option("--t", laplace_t, "Laplace parameter t >= 0")->capture_default_str();
  lap->callback([&] {
    auto spec = detail::resolve_base_kernel_arg(base_arg, graph_arg);
    SimConfig cfg{seed, horizon, trials, threads};
    Json manifest = {{"base", spec.to_json()}, {"t", laplace_t}, {"n", horizon},
                     {"trials", trials}, {"seed", seed}, {"threads", threads}};
    summary = detail::with_base_kernel(spec, [&](auto k, auto, auto origin, auto) {
      auto res = laplace_range(k, origin, laplace_t, horizon, cfg);
      csv = detail::trials_csv(res.per_trial, horizon);
      auto s = detail::estimate_summary("simulate/laplace-range", manifest, res.estimate);
      s["minus_log_estimate"] =
          res.estimate.value > 0 ? -std::log(res.estimate.value) : 0.0;
      return s;
    });
  });

  int tree_q = 2;
  long long budget = 1'000'000;
  int max_runs = 100;
  long long want_transitions = 10'000;
  auto* cuts = sim->add_subcommand("cutpoints",
                                   "cut points of the induced spine chain on the oriented tree");
  cuts->add_option("--q", tree_q, "oriented tree branching (q >= 2)")->capture_default_str();
  cuts->add_option("--transitions", want_transitions, "induced transitions to pool")
      ->capture_default_str();
  cuts->add_option("--budget", budget, "tree steps per run")->capture_default_str();
  cuts->add_option("--max-runs", max_runs, "cap on pooled runs")->capture_default_str();
  cuts->add_option("--seed", seed)->required();
  detail::add_output_options(cuts, output);
  cuts->callback([&] {
    auto k = oriented_tree_kernel(tree_q);
    auto runs = induced_chain_pooled(k, seed, budget,
                                     static_cast<std::size_t>(want_transitions), max_runs);
    std::vector<double> densities;
    std::size_t cuts_total = 0, transitions = 0;
    bool all_verified = true;
    csv = "run,transitions,density\n";
    for (std::size_t i = 0; i < runs.size(); ++i) {
      auto rep = cut_points(runs[i].y);
      densities.push_back(rep.density);
      cuts_total += rep.times.size();
      transitions += runs[i].y.size() - 1;
      // independent re-check of the defining disjointness
      for (std::size_t c = 0; c < rep.times.size(); ++c) {
        std::size_t t = rep.times[c];
        std::set<long long> past(runs[i].y.begin(), runs[i].y.begin() + t + 1);
        for (std::size_t j = t + 1; j < runs[i].y.size(); ++j) {
          if (past.count(runs[i].y[j])) {
            all_verified = false;
            break;
          }
        }
      }
      csv += std::to_string(i) + "," + std::to_string(runs[i].y.size() - 1) + "," +
             detail::num(rep.density) + "\n";
    }
    auto est = summarize(densities);
    Json manifest = {{"q", tree_q}, {"transitions", want_transitions}, {"budget", budget},
                     {"max_runs", max_runs}, {"seed", seed}};
    summary = {{"command", "simulate/cutpoints"}, {"manifest", manifest},
               {"estimate", est.value},          {"stderr", est.std_error},
               {"runs", static_cast<int>(runs.size())}, {"transitions", transitions},
               {"cut_points", cuts_total},       {"verified", all_verified},
               {"seed", seed}};
  });

  int ball_radius = 2;
  auto* lim = sim->add_subcommand("limit-config",
                                  "stabilization of the lamp configuration on a ball");
  add_sim_common(lim, true);
  lim->add_option("--radius", ball_radius, "ball radius around the origin")
      ->capture_default_str();
  lim->callback([&] {
    auto spec = detail::resolve_any_kernel_arg(kernel_arg, base_arg, graph_arg);
    SimConfig cfg{seed, horizon, trials, threads};
    Json manifest = {{"kernel", spec.to_json()}, {"radius", ball_radius}, {"n", horizon},
                     {"trials", trials}, {"seed", seed}, {"threads", threads}};
    summary = detail::with_lamplighter_kernel(spec, [&](auto k, auto graph, auto start) {
      auto per_trial = run_trials(cfg, [&](int, RngStream& stream) {
        auto traj = run_trajectory(k, start, horizon, stream);
        auto rep = limit_configuration(graph, traj.states, ball_radius);
        return rep.censored ? 0.0 : 1.0;
      });
      auto est = summarize(per_trial);
      csv = detail::trials_csv(per_trial, horizon);
      Json s = detail::estimate_summary("simulate/limit-config", manifest, est);
      s["stabilized_fraction"] = est.value;
      // the first trial's ball configuration, serialized
      RngStream stream0(seed, 0);
      auto traj0 = run_trajectory(k, start, horizon, stream0);
      auto rep0 = limit_configuration(graph, traj0.states, ball_radius);
      Json lamps = Json::array();
      for (const auto& v : rep0.config.support) lamps.push_back(vertex_to_json(v));
      s["first_trial"] = {{"censored", rep0.censored},
                          {"stabilization_time", rep0.stabilization_time},
                          {"ball_config", lamps},
                          {"final_state", lamp_state_to_json(traj0.states.back())}};
      return s;
    });
  });

  // ---------------- spectral ----------------
  auto* spec_cmd = app.add_subcommand("spectral", "spectral radius and Green function by DP");
  spec_cmd->require_subcommand(1);

  int nmax = 400;
  auto* rho = spec_cmd->add_subcommand("rho", "spectral radius via even-time return roots");
  rho->add_option("--kernel", kernel_arg)->required();
  rho->add_option("--graph", graph_arg);
  rho->add_option("--nmax", nmax, "even DP horizon")->capture_default_str();
  detail::add_output_options(rho, output);
  rho->callback([&] {
    auto spec = detail::resolve_base_kernel_arg(kernel_arg, graph_arg);
    Json manifest = {{"kernel", spec.to_json()}, {"nmax", nmax}};
    RhoEstimate result;
    if (spec.kind == KernelSpec::Kind::Srw &&
        spec.graph.family == GraphSpec::Family::HomTreeFamily) {
      // exact distance-from-origin lumping; the tree ball itself grows
      // exponentially with the DP horizon
      HomTreeRadialChain radial(spec.graph.param);
      result = spectral_radius_dp(radial, 0LL, nmax);
      manifest["lumping"] = "radial";
    } else if (spec.kind == KernelSpec::Kind::Oriented) {
      OrientedRadialChain radial(OrientedTreeKernel(spec.q));
      result = spectral_radius_dp(radial, {}, nmax);
      manifest["lumping"] = "radial";
    } else {
      summary = detail::with_base_kernel(spec, [&](auto k, auto, auto origin, auto) {
        auto r = spectral_radius_dp(k, origin, nmax);
        return Json{{"roots", r.roots}, {"estimate", r.estimate}};
      });
      result.estimate = summary.at("estimate").get<double>();
      result.roots = summary.at("roots").get<std::vector<double>>();
    }
    csv_name = "roots.csv";
    csv = "n,root\n";
    for (std::size_t m = 1; m < result.roots.size(); ++m) {
      if (result.roots[m] > 0) {
        csv += std::to_string(2 * m) + "," + detail::num(result.roots[m]) + "\n";
      }
    }
    summary = {{"command", "spectral/rho"}, {"manifest", manifest},
               {"estimate", result.estimate}, {"nmax", nmax}};
  });

  double green_z = 1.0;
  int green_steps = 200;
  auto* green = spec_cmd->add_subcommand("green", "partial sums of the Green function at the origin");
  green->add_option("--kernel", kernel_arg)->required();
  green->add_option("--graph", graph_arg);
  green->add_option("--z", green_z, "argument z >= 0")->capture_default_str();
  green->add_option("--nsteps", green_steps, "partial-sum horizon N")->capture_default_str();
  detail::add_output_options(green, output);
  green->callback([&] {
    auto spec = detail::resolve_base_kernel_arg(kernel_arg, graph_arg);
    Json manifest = {{"kernel", spec.to_json()}, {"z", green_z}, {"nsteps", green_steps}};
    double value = 0;
    if (spec.kind == KernelSpec::Kind::Srw &&
        spec.graph.family == GraphSpec::Family::HomTreeFamily) {
      HomTreeRadialChain radial(spec.graph.param);
      value = truncated_green(radial, 0LL, 0LL, green_z, green_steps);
      manifest["lumping"] = "radial";
    } else if (spec.kind == KernelSpec::Kind::Oriented) {
      OrientedRadialChain radial(OrientedTreeKernel(spec.q));
      value = truncated_green(radial, {}, {}, green_z, green_steps);
      manifest["lumping"] = "radial";
    } else {
      summary = detail::with_base_kernel(spec, [&](auto k, auto, auto origin, auto) {
        return Json{{"value", truncated_green(k, origin, origin, green_z, green_steps)}};
      });
      value = summary.at("value").get<double>();
    }
    summary = {{"command", "spectral/green"}, {"manifest", manifest},
               {"partial_sum", value}, {"z", green_z}, {"nsteps", green_steps}};
  });

  // ---------------- entropy ----------------
  auto* ent = app.add_subcommand("entropy", "language entropy on labelled digraphs");
  ent->require_subcommand(1);

  std::string graph_file, forbid_arg;
  int from_x = 0, to_y = 0, raw_n = 0;

  auto* report = ent->add_subcommand("report", "growth sensitivity report");
  report->add_option("--graph", graph_file, "digraph JSON (file or inline)")->required();
  report->add_option("--forbid", forbid_arg, "comma-separated forbidden factors")->required();
  report->add_option("--from", from_x, "raw count sequence: source vertex")->capture_default_str();
  report->add_option("--to", to_y, "raw count sequence: target vertex")->capture_default_str();
  report->add_option("--nmax", raw_n, "raw count sequence length")->capture_default_str();
  detail::add_output_options(report, output);
  report->callback([&] {
    auto g = digraph_from_json(detail::load_inline_or_file(graph_file));
    std::vector<std::string> words;
    for (auto&& part : CLI::detail::split(forbid_arg, ',')) words.push_back(part);
    auto f = FactorSet::parse(words, g);
    auto rep = growth_sensitivity_report(g, f);
    Json manifest = {{"graph", digraph_to_json(g)}, {"forbid", words},
                     {"from", from_x}, {"to", to_y}, {"nmax", raw_n}};
    summary = {{"command", "entropy/report"}, {"manifest", manifest}};
    if (!rep.ok()) {
      summary["violations"] = rep.violations;
      throw CertificationError("hypothesis violations: " +
                               CLI::detail::join(rep.violations, "; "));
    }
    summary["h"] = rep.h;
    summary["sup_h_F"] = rep.sup_h_f;
    summary["strict"] = rep.strict;
    summary["K"] = rep.k_const;
    summary["D"] = rep.d_const;
    Json hf = Json::array();
    for (const auto& row : rep.h_f) {
      Json r = Json::array();
      for (double v : row) r.push_back(std::isinf(v) ? Json("-inf") : Json(v));
      hf.push_back(r);
    }
    summary["h_F"] = hf;
    if (raw_n > 0) {
      csv_name = "counts.csv";
      csv = "n,count,restricted\n";
      for (int n = 0; n <= raw_n; ++n) {
        csv += std::to_string(n) + "," + std::to_string(count_words(g, from_x, to_y, n)) +
               "," + std::to_string(count_restricted(g, f, from_x, to_y, n)) + "\n";
      }
    }
  });

  auto* ident = ent->add_subcommand("identity-check", "h = log(rho(P) |Sigma|), two routes");
  ident->add_option("--graph", graph_file)->required();
  detail::add_output_options(ident, output);
  ident->callback([&] {
    auto g = digraph_from_json(detail::load_inline_or_file(graph_file));
    auto chk = entropy_spectral_identity_check(g);
    summary = {{"command", "entropy/identity-check"},
               {"manifest", {{"graph", digraph_to_json(g)}}},
               {"h_counting", chk.h_counting},
               {"log_rho_sigma", chk.log_rho_sigma},
               {"delta", chk.delta}};
  });

  auto* substoch = ent->add_subcommand("substoch-check", "strict substochasticity of P_F^(D+R)");
  substoch->add_option("--graph", graph_file)->required();
  substoch->add_option("--forbid", forbid_arg)->required();
  detail::add_output_options(substoch, output);
  substoch->callback([&] {
    auto g = digraph_from_json(detail::load_inline_or_file(graph_file));
    std::vector<std::string> words;
    for (auto&& part : CLI::detail::split(forbid_arg, ',')) words.push_back(part);
    auto f = FactorSet::parse(words, g);
    auto wg = uniform_weighting(g);
    auto rep = substochastic_bound_check(wg, f);
    summary = {{"command", "entropy/substoch-check"},
               {"manifest", {{"graph", digraph_to_json(g)}, {"forbid", words}}},
               {"k", rep.k},
               {"D", rep.d_const},
               {"R", rep.r_const},
               {"eps0", rep.eps0},
               {"max_row_sum", rep.max_row_sum},
               {"row_sums", rep.row_sums},
               {"pass", rep.pass}};
  });

  // ---------------- schreier ----------------
  std::string group_arg = "z2", subgroup_arg, psi_arg, graph_out;
  int radius = 6;
  auto* schreier_cmd = app.add_subcommand("schreier", "Schreier coset graphs X(G,K,psi)");
  auto* build = schreier_cmd->add_subcommand("build", "build a coset graph");
  build->add_option("--group", group_arg, "z2 | zd:d | freeprod:k")->capture_default_str();
  build->add_option("--subgroup", subgroup_arg,
                    "generators: ints for z2, ';'-separated vectors for zd, trivial otherwise");
  build->add_option("--psi", psi_arg, "labels, e.g. a=t | a=1,b=-1 | a=a,b=b")->required();
  build->add_option("--radius", radius, "BFS radius for infinite families")
      ->capture_default_str();
  build->add_option("--graph-out", graph_out, "write the digraph JSON here");
  detail::add_output_options(build, output);
  build->callback([&] {
    std::vector<std::string> alphabet;
    std::vector<std::string> images;
    for (auto&& part : CLI::detail::split(psi_arg, ',')) {
      auto eq = part.find('=');
      require(eq != std::string::npos, "psi: expected label=image pairs");
      alphabet.push_back(part.substr(0, eq));
      images.push_back(part.substr(eq + 1));
    }
    SchreierGraph sg;
    if (group_arg == "z2") {
      std::vector<int> psi;
      for (const auto& im : images) {
        if (im == "t" || im == "1") {
          psi.push_back(1);
        } else if (im == "e" || im == "0") {
          psi.push_back(0);
        } else {
          throw ValidationError("psi image for z2 must be e|t");
        }
      }
      std::vector<int> gens;
      if (!subgroup_arg.empty() && subgroup_arg != "trivial") {
        for (auto&& part : CLI::detail::split(subgroup_arg, ',')) gens.push_back(std::stoi(part));
      }
      sg = build_schreier(FiniteGroupTable::z2(), gens, alphabet, psi);
    } else if (group_arg.rfind("zd:", 0) == 0) {
      int dim = std::stoi(group_arg.substr(3));
      auto parse_vec = [&](const std::string& s) {
        std::vector<long long> v;
        for (auto&& part : CLI::detail::split(s, ' ')) {
          if (!part.empty()) v.push_back(std::stoll(part));
        }
        if (v.empty()) {
          for (auto&& part : CLI::detail::split(s, ',')) v.push_back(std::stoll(part));
        }
        require(static_cast<int>(v.size()) == dim, "zd: vector of wrong dimension");
        return v;
      };
      std::vector<std::vector<long long>> gens;
      if (!subgroup_arg.empty() && subgroup_arg != "trivial") {
        for (auto&& part : CLI::detail::split(subgroup_arg, ';')) gens.push_back(parse_vec(part));
      }
      std::vector<std::vector<long long>> psi;
      for (const auto& im : images) psi.push_back(parse_vec(im));
      sg = build_schreier(dim, gens, alphabet, psi, radius);
    } else if (group_arg.rfind("freeprod:", 0) == 0) {
      int k = std::stoi(group_arg.substr(9));
      require(subgroup_arg.empty() || subgroup_arg == "trivial",
              "freeprod supports only the trivial subgroup");
      std::vector<std::string> psi;
      for (const auto& im : images) psi.push_back(im == "e" ? std::string{} : im);
      sg = build_schreier(FreeProductZ2(k), alphabet, psi, radius);
    } else {
      throw ValidationError("unknown group '" + group_arg + "'");
    }
    Json gj = digraph_to_json(sg.graph);
    if (!graph_out.empty()) {
      std::ofstream f(graph_out);
      f << gj.dump(2) << "\n";
    }
    summary = {{"command", "schreier/build"},
               {"manifest",
                {{"group", group_arg}, {"subgroup", subgroup_arg}, {"psi", psi_arg},
                 {"radius", radius}}},
               {"graph", gj},
               {"vertices", sg.graph.num_vertices},
               {"origin", sg.origin},
               {"truncated", sg.truncated},
               {"cosets", sg.coset_names},
               {"fully_deterministic", check_fully_deterministic(sg.graph)}};
  });

  // ---------------- parse and dispatch ----------------
  std::vector<const char*> argv;
  argv.push_back("wordwalks");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const HorizonError& e) {
    err << "certification error: " << e.what() << "\n";
    return 3;
  } catch (const CertificationError& e) {
    err << "certification error: " << e.what() << "\n";
    if (!summary.is_null()) out << summary.dump(2) << "\n";
    return 3;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const Json::exception& e) {
    err << "validation error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "validation error: " << e.what() << "\n";
    return 2;
  }

  detail::emit(output, summary, csv_name, csv, out);
  return 0;
}

}  // namespace ww::cli
