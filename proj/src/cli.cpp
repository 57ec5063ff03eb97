#include "smatch/cli.hpp"

#include <chrono>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "smatch/instances.hpp"
#include "smatch/io.hpp"
#include "smatch/matching.hpp"
#include "smatch/oracle.hpp"

namespace smatch {

namespace {

using json = nlohmann::ordered_json;

json to_json(const MatchPair& m) {
  return json{{"x", m.xs}, {"y", m.ys}};
}

json to_json(const std::vector<MatchPair>& matches) {
  json arr = json::array();
  for (const MatchPair& m : matches) arr.push_back(to_json(m));
  return arr;
}

json histogram_json(const std::vector<MatchPair>& matches) {
  std::map<std::size_t, std::size_t> counts;
  for (const MatchPair& m : matches) ++counts[m.support_size()];
  json out = json::object();
  for (const auto& [size, count] : counts) out[std::to_string(size)] = count;
  return out;
}

json simple_report_json(const SimpleMatchReport& report) {
  json per_neuron = json::object();
  for (const auto& [v, count] : report.per_neuron_counts) per_neuron[to_string(v)] = count;
  return json{{"exhaustive", report.exhaustive},
              {"truncated", report.truncated},
              {"count", report.matches.size()},
              {"matches", to_json(report.matches)},
              {"per_neuron_counts", per_neuron},
              {"size_histogram", histogram_json(report.matches)}};
}

void write_histogram_csv(const std::vector<MatchPair>& matches,
                         const std::filesystem::path& path) {
  std::map<std::size_t, std::size_t> counts;
  for (const MatchPair& m : matches) ++counts[m.support_size()];
  std::ofstream out(path);
  if (!out) fail(ErrorKind::parse, "cannot write " + path.string());
  out << "size,count\n";
  for (const auto& [size, count] : counts) out << size << ',' << count << '\n';
}

void write_curve_csv(const SimilarityCurve& curve, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::parse, "cannot write " + path.string());
  char buf[64];
  out << "epsilon,similarity\n";
  for (const SimilarityPoint& p : curve.points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", p.epsilon, p.similarity);
    out << buf;
  }
}

// Flags shared by every subcommand that consumes a problem.
struct ProblemArgs {
  std::string x_path;
  std::string y_path;
  double epsilon = 0.0;
  double slack = 0.0;
  double rank_tol = 1e-12;
  std::string zero_policy = "reject";

  void attach(CLI::App* cmd, bool with_eps = true) {
    cmd->add_option("--x", x_path, "activations of network X (CSV or SMAT binary)")->required();
    cmd->add_option("--y", y_path, "activations of network Y (CSV or SMAT binary)")->required();
    if (with_eps) {
      cmd->add_option("--eps", epsilon, "match tolerance, in [0,1)")->required();
    }
    cmd->add_option("--slack", slack, "multiplicative boundary slack on the threshold");
    cmd->add_option("--rank-tol", rank_tol, "relative singular-value cutoff factor");
    cmd->add_option("--zero-policy", zero_policy,
                    "zero activation rows: reject | drop | keep");
  }

  NumericPolicy policy() const {
    NumericPolicy p;
    p.rank_tol_factor = rank_tol;
    p.boundary_slack = slack;
    p.zero_vector_policy = zero_vector_policy_from_string(zero_policy);
    return p;
  }

  MatchProblem load(json& inputs) const {
    const NumericPolicy pol = policy();
    ActivationMatrix x = io::load_activations(x_path, pol);
    ActivationMatrix y = io::load_activations(y_path, pol);
    inputs["x"] = json{{"path", x_path}, {"rows", x.rows()}, {"cols", x.cols()}};
    inputs["y"] = json{{"path", y_path}, {"rows", y.rows()}, {"cols", y.cols()}};
    inputs["epsilon"] = epsilon;
    inputs["policy"] = json{{"rank_tol_factor", pol.rank_tol_factor},
                            {"boundary_slack", pol.boundary_slack},
                            {"zero_vector_policy", to_string(pol.zero_vector_policy)}};
    return MatchProblem(std::move(x), std::move(y), epsilon, pol);
  }
};

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::size_t end = comma == std::string::npos ? text.size() : comma;
    try {
      std::size_t used = 0;
      const double v = std::stod(text.substr(start, end - start), &used);
      if (used != end - start) throw std::invalid_argument("trailing junk");
      out.push_back(v);
    } catch (const std::exception&) {
      fail(ErrorKind::invalid_input, "bad --eps-list entry: '" + text.substr(start, end - start) + "'");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) fail(ErrorKind::invalid_input, "--eps-list is empty");
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{
      "smatch: epsilon-approximate subspace matching between two sets of neuron\n"
      "activation vectors. Activation files hold one neuron per row (CSV or SMAT\n"
      "binary); neuron indices in reports and --neuron flags are 0-based and\n"
      "written side:index (e.g. y:3). Angles are in radians.\n"};
  app.require_subcommand(1);

  // ---- maxmatch -----------------------------------------------------------
  auto* maxmatch = app.add_subcommand("maxmatch", "maximum match and similarity s(eps)");
  ProblemArgs max_args;
  max_args.attach(maxmatch);

  // ---- minmatch -----------------------------------------------------------
  auto* minmatch = app.add_subcommand("minmatch", "one v-minimal match for --neuron");
  ProblemArgs min_args;
  min_args.attach(minmatch);
  std::string min_neuron;
  std::string min_order = "asc";
  std::uint64_t min_seed = 0;
  minmatch->add_option("--neuron", min_neuron, "neuron, e.g. x:0 or y:3")->required();
  minmatch->add_option("--order", min_order, "removal check order: asc | shuffle");
  minmatch->add_option("--seed", min_seed, "seed for --order shuffle");

  // ---- allmin -------------------------------------------------------------
  auto* allmin = app.add_subcommand("allmin", "all v-minimal matches for --neuron");
  ProblemArgs allmin_args;
  allmin_args.attach(allmin);
  std::string allmin_neuron;
  std::size_t allmin_budget = 0;
  allmin->add_option("--neuron", allmin_neuron, "neuron, e.g. x:0 or y:3")->required();
  allmin->add_option("--budget", allmin_budget,
                     "stop after this many matches (0 = unlimited; the search is "
                     "exponential in the number of v-minimal matches)");

  // ---- simple -------------------------------------------------------------
  auto* simple = app.add_subcommand("simple", "exhaustive simple matches + size histogram");
  ProblemArgs simple_args;
  simple_args.attach(simple);
  std::size_t simple_budget = 0;
  std::string simple_csv;
  simple->add_option("--budget", simple_budget, "per-neuron v-minimal budget (0 = unlimited)");
  simple->add_option("--csv-out", simple_csv, "write the size histogram as CSV");

  // ---- sample-simple ------------------------------------------------------
  auto* sampled = app.add_subcommand("sample-simple",
                                     "randomized simple-match sampling (shuffled orders)");
  ProblemArgs sampled_args;
  sampled_args.attach(sampled);
  std::size_t sample_iters = 1;
  std::uint64_t sample_seed = 0;
  std::string sampled_csv;
  sampled->add_option("--iters", sample_iters, "shuffled runs per neuron")->required();
  sampled->add_option("--seed", sample_seed, "base seed");
  sampled->add_option("--csv-out", sampled_csv, "write the size histogram as CSV");

  // ---- sweep --------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "similarity curve over an epsilon list");
  ProblemArgs sweep_args;
  sweep_args.attach(sweep, /*with_eps=*/false);
  std::string eps_list;
  std::string conv_dims;
  std::size_t sample_d = 0;
  std::size_t sweep_repeats = 1;
  std::uint64_t sweep_seed = 0;
  std::string sweep_csv;
  sweep->add_option("--eps-list", eps_list, "comma-separated epsilon values")->required();
  sweep->add_option("--conv", conv_dims,
                    "treat rows as conv maps: h,w,d_images (enables paired sampling)");
  sweep->add_option("--sample-d", sample_d, "columns to sample per repeat (with --conv)");
  sweep->add_option("--repeats", sweep_repeats, "sampling repeats to average (with --conv)");
  sweep->add_option("--seed", sweep_seed, "sampling seed (with --conv)");
  sweep->add_option("--csv-out", sweep_csv, "write the curve as CSV");

  // ---- gen ----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "write a generated instance to activation files");
  std::string gen_kind;
  std::size_t gen_n = 4;
  std::size_t gen_d = 4;
  std::size_t gen_nx = 0;
  std::size_t gen_ny = 0;
  double gen_eps0 = 0.2;
  std::uint64_t gen_seed = 0;
  std::string gen_out_x;
  std::string gen_out_y;
  gen->add_option("--kind", gen_kind,
                  "identical | rotated | appendix_c1 | appendix_c2 | remark_a1 | "
                  "hadamard | random_gaussian")
      ->required();
  gen->add_option("--n", gen_n, "neurons per side");
  gen->add_option("--d", gen_d, "samples (identical/rotated/random_gaussian)");
  gen->add_option("--nx", gen_nx, "X-side neurons (random_gaussian; 0 = --n)");
  gen->add_option("--ny", gen_ny, "Y-side neurons (random_gaussian; 0 = --n)");
  gen->add_option("--eps0", gen_eps0, "construction parameter (hadamard, remark_a1)");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--out-x", gen_out_x, "output file for X (*.csv = CSV, else binary)")->required();
  gen->add_option("--out-y", gen_out_y, "output file for Y")->required();

  // ---- oracle -------------------------------------------------------------
  auto* oracle_cmd = app.add_subcommand("oracle", "brute-force enumeration report (small instances)");
  ProblemArgs oracle_args;
  oracle_args.attach(oracle_cmd);
  std::size_t oracle_limit = 12;
  oracle_cmd->add_option("--limit", oracle_limit, "max total neurons for enumeration");

  // ---- check --------------------------------------------------------------
  auto* check = app.add_subcommand("check", "strong-independence / stability hypotheses");
  ProblemArgs check_args;
  check_args.attach(check, /*with_eps=*/false);
  double check_theta = 0.0;
  double check_lambda = 0.0;
  double check_eps = 0.0;
  std::size_t check_ind_limit = 8;
  std::size_t check_sta_limit = 10;
  auto* theta_opt =
      check->add_option("--independence", check_theta, "theta (radians) for both sides");
  auto* lambda_opt = check->add_option("--stability", check_lambda, "lambda (> 1)");
  auto* check_eps_opt = check->add_option("--eps", check_eps, "epsilon for the stability band");
  lambda_opt->needs(check_eps_opt);
  check->add_option("--limit-independence", check_ind_limit, "row cap for the angle check");
  check->add_option("--limit-stability", check_sta_limit, "per-side row cap for stability");

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("smatch");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  const auto started = std::chrono::steady_clock::now();
  json report;
  try {
    if (maxmatch->parsed()) {
      report["command"] = "maxmatch";
      json inputs;
      const MatchProblem problem = max_args.load(inputs);
      report["inputs"] = inputs;
      const MatchPair m = max_match(problem);
      report["result"] = json{{"max_match", to_json(m)},
                              {"sizes", json{{"x", m.xs.size()}, {"y", m.ys.size()}}},
                              {"similarity", similarity(problem)}};
    } else if (minmatch->parsed()) {
      report["command"] = "minmatch";
      json inputs;
      const MatchProblem problem = min_args.load(inputs);
      report["inputs"] = inputs;
      const NeuronId v = neuron_from_string(min_neuron);
      OrderSpec order;
      if (min_order == "asc") {
        order = {CheckOrder::ascending, 0};
      } else if (min_order == "shuffle") {
        order = {CheckOrder::shuffle, min_seed};
      } else {
        fail(ErrorKind::invalid_input, "--order must be asc or shuffle, got: " + min_order);
      }
      const std::optional<MatchPair> m = min_match(problem, v, order);
      json result{{"neuron", to_string(v)}, {"order", min_order}};
      if (min_order == "shuffle") result["seed"] = min_seed;
      result["status"] = m ? "ok" : "not_in_maximum_match";
      result["match"] = m ? to_json(*m) : json(nullptr);
      report["result"] = result;
    } else if (allmin->parsed()) {
      report["command"] = "allmin";
      json inputs;
      const MatchProblem problem = allmin_args.load(inputs);
      report["inputs"] = inputs;
      const NeuronId v = neuron_from_string(allmin_neuron);
      const AllMinResult r = all_min_match(problem, v, {allmin_budget});
      report["result"] = json{{"neuron", to_string(v)},
                              {"budget", allmin_budget},
                              {"count", r.matches.size()},
                              {"truncated", r.truncated},
                              {"matches", to_json(r.matches)}};
      if (r.truncated) {
        err << "warning: budget of " << allmin_budget
            << " v-minimal matches reached; enumeration stopped early\n";
      }
    } else if (simple->parsed()) {
      report["command"] = "simple";
      json inputs;
      const MatchProblem problem = simple_args.load(inputs);
      report["inputs"] = inputs;
      const SimpleMatchReport r = simple_matches(problem, {simple_budget, 0});
      report["result"] = simple_report_json(r);
      if (r.truncated) {
        err << "warning: per-neuron budget of " << simple_budget
            << " reached; simple-match set may be incomplete\n";
      }
      if (!simple_csv.empty()) write_histogram_csv(r.matches, simple_csv);
    } else if (sampled->parsed()) {
      report["command"] = "sample-simple";
      json inputs;
      const MatchProblem problem = sampled_args.load(inputs);
      report["inputs"] = inputs;
      const SimpleMatchReport r = sampled_simple_matches(problem, sample_iters, sample_seed);
      json result = simple_report_json(r);
      result["iterations"] = sample_iters;
      result["seed"] = sample_seed;
      report["result"] = result;
      if (!sampled_csv.empty()) write_histogram_csv(r.matches, sampled_csv);
    } else if (sweep->parsed()) {
      report["command"] = "sweep";
      const std::vector<double> epsilons = parse_eps_list(eps_list);
      const NumericPolicy pol = sweep_args.policy();
      json inputs;
      ActivationMatrix x = io::load_activations(sweep_args.x_path, pol);
      ActivationMatrix y = io::load_activations(sweep_args.y_path, pol);
      inputs["x"] = json{{"path", sweep_args.x_path}, {"rows", x.rows()}, {"cols", x.cols()}};
      inputs["y"] = json{{"path", sweep_args.y_path}, {"rows", y.rows()}, {"cols", y.cols()}};
      inputs["epsilons"] = epsilons;
      inputs["policy"] = json{{"rank_tol_factor", pol.rank_tol_factor},
                              {"boundary_slack", pol.boundary_slack},
                              {"zero_vector_policy", to_string(pol.zero_vector_policy)}};
      report["inputs"] = inputs;

      SimilarityCurve curve;
      json result;
      if (!conv_dims.empty()) {
        std::size_t h = 0, w = 0, dimg = 0;
        if (std::sscanf(conv_dims.c_str(), "%zu,%zu,%zu", &h, &w, &dimg) != 3) {
          fail(ErrorKind::invalid_input, "--conv expects h,w,d_images");
        }
        if (sample_d == 0) fail(ErrorKind::invalid_input, "--conv needs --sample-d");
        const io::ConvTensorLayout tx(std::move(x), h, w, dimg);
        const io::ConvTensorLayout ty(std::move(y), h, w, dimg);
        // same seed on both sides: each repeat pairs identical input coordinates
        const std::vector<ActivationMatrix> xs = io::conv_sample(tx, sample_d, sweep_repeats, sweep_seed);
        const std::vector<ActivationMatrix> ys = io::conv_sample(ty, sample_d, sweep_repeats, sweep_seed);
        json per_repeat = json::array();
        std::vector<double> mean(epsilons.size(), 0.0);
        for (std::size_t r = 0; r < sweep_repeats; ++r) {
          const SimilarityCurve c = similarity_sweep(xs[r], ys[r], pol, epsilons);
          json row = json::array();
          for (std::size_t i = 0; i < c.points.size(); ++i) {
            mean[i] += c.points[i].similarity;
            row.push_back(c.points[i].similarity);
          }
          per_repeat.push_back(row);
        }
        for (std::size_t i = 0; i < epsilons.size(); ++i) {
          curve.points.push_back({epsilons[i], mean[i] / static_cast<double>(sweep_repeats)});
        }
        result["conv"] = json{{"height", h},       {"width", w},
                              {"d_images", dimg},  {"sample_d", sample_d},
                              {"repeats", sweep_repeats}, {"seed", sweep_seed}};
        result["per_repeat"] = per_repeat;
      } else {
        curve = similarity_sweep(x, y, pol, epsilons);
      }
      json points = json::array();
      for (const SimilarityPoint& p : curve.points) {
        points.push_back(json{{"epsilon", p.epsilon}, {"similarity", p.similarity}});
      }
      result["curve"] = points;
      report["result"] = result;
      if (!sweep_csv.empty()) write_curve_csv(curve, sweep_csv);
    } else if (gen->parsed()) {
      report["command"] = "gen";
      instances::InstanceSpec spec;
      spec.kind = instances::instance_kind_from_string(gen_kind);
      spec.n = gen_n;
      spec.d = gen_d;
      spec.epsilon0 = gen_eps0;
      spec.seed = gen_seed;
      spec.n_x = gen_nx;
      spec.n_y = gen_ny;
      const instances::InstancePair pair = instances::generate(spec);
      io::save_activations(pair.x, gen_out_x);
      io::save_activations(pair.y, gen_out_y);
      report["inputs"] = json{{"kind", gen_kind},   {"n", gen_n},       {"d", gen_d},
                              {"nx", gen_nx},       {"ny", gen_ny},     {"eps0", gen_eps0},
                              {"seed", gen_seed}};
      report["result"] =
          json{{"out_x", json{{"path", gen_out_x}, {"rows", pair.x.rows()}, {"cols", pair.x.cols()}}},
               {"out_y", json{{"path", gen_out_y}, {"rows", pair.y.rows()}, {"cols", pair.y.cols()}}}};
    } else if (oracle_cmd->parsed()) {
      report["command"] = "oracle";
      json inputs;
      const MatchProblem problem = oracle_args.load(inputs);
      inputs["limit"] = oracle_limit;
      report["inputs"] = inputs;
      const oracle::OracleReport r = oracle::oracle_report(problem, oracle_limit);
      json minimal = json::object();
      for (const auto& [v, matches] : r.minimal_by_neuron) {
        minimal[to_string(v)] = to_json(matches);
      }
      report["result"] = json{{"count", r.all_matches.size()},
                              {"all_matches", to_json(r.all_matches)},
                              {"maximum", to_json(r.maximum)},
                              {"simple", to_json(r.simple)},
                              {"minimal_by_neuron", minimal}};
    } else if (check->parsed()) {
      report["command"] = "check";
      if (theta_opt->count() == 0 && lambda_opt->count() == 0) {
        fail(ErrorKind::invalid_input, "check needs --independence and/or --stability");
      }
      const NumericPolicy pol = check_args.policy();
      json inputs;
      ActivationMatrix x = io::load_activations(check_args.x_path, pol);
      ActivationMatrix y = io::load_activations(check_args.y_path, pol);
      inputs["x"] = json{{"path", check_args.x_path}, {"rows", x.rows()}, {"cols", x.cols()}};
      inputs["y"] = json{{"path", check_args.y_path}, {"rows", y.rows()}, {"cols", y.cols()}};
      report["inputs"] = inputs;
      json result;
      if (theta_opt->count() > 0) {
        result["independence"] =
            json{{"theta", check_theta},
                 {"x_ok", oracle::check_strong_independence(x, check_theta, pol, check_ind_limit)},
                 {"y_ok", oracle::check_strong_independence(y, check_theta, pol, check_ind_limit)}};
      }
      if (lambda_opt->count() > 0) {
        const MatchProblem problem(std::move(x), std::move(y), check_eps, pol);
        result["stability"] = json{{"lambda", check_lambda},
                                   {"epsilon", check_eps},
                                   {"ok", oracle::check_stability(problem, check_lambda,
                                                                  check_sta_limit)}};
      }
      report["result"] = result;
    }
  } catch (const Error& e) {
    json record{{"error", json{{"kind", to_string(e.kind())}, {"message", e.what()}}}};
    out << record.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    json record{{"error", json{{"kind", "internal"}, {"message", e.what()}}}};
    out << record.dump(2) << "\n";
    return 1;
  }

  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;
  report["timing"] = json{{"seconds", elapsed.count()}};
  out << report.dump(2) << "\n";
  return 0;
}

}  // namespace smatch
