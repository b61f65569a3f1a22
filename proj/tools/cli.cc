// Copyright 2026 The ffprotect Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <system_error>
#include <vector>

#include "CLI11.hpp"
#include "ffp/baseline.h"
#include "ffp/mc_oracle.h"
#include "ffp/parallel.h"
#include "ffp/sweep.h"
#include "table.h"

namespace ffp::cli {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kVerifySigmas = 4.0;
constexpr double kSigmaFloor = 1e-12;

struct Options {
  std::optional<double> r;
  std::string state;
  std::string pair;
  bool average = false;
  std::optional<double> alpha;
  int resolution = 101;
  bool compare_wmr = false;
  int scatter_resolution = 0;
  std::string format = "csv";
  std::string output;
  std::uint64_t seed = 42;
  long long samples = 100000;
  double p = 0.7;
  double p_u = 0.3;
  double p_v = 0.2;
  double perturb = 0.0;
  int workers = 0;
};

struct Angles {
  double theta = 0.0;
  double phi = 0.0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  return s;
}

Angles parse_angles(std::string_view text) {
  Angles a;
  bool have_theta = false;
  while (!text.empty()) {
    const std::size_t comma = text.find(',');
    const std::string_view item = trim(text.substr(0, comma));
    text = comma == std::string_view::npos ? std::string_view{} : text.substr(comma + 1);
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) throw std::invalid_argument("expected key=value, got '" + std::string(item) + "'");
    const std::string_view key = trim(item.substr(0, eq));
    const double value = parse_angle(trim(item.substr(eq + 1)));
    if (key == "theta") {
      a.theta = value;
      have_theta = true;
    } else if (key == "phi") {
      a.phi = value;
    } else {
      throw std::invalid_argument("unknown key '" + std::string(key) + "' (expected theta or phi)");
    }
  }
  if (!have_theta) throw std::invalid_argument("theta is required");
  return a;
}

std::optional<Scenario> scenario_from(const Options& o) {
  if (!o.state.empty()) return Scenario{SingleStateScenario{parse_state(o.state)}};
  if (!o.pair.empty()) return Scenario{parse_pair(o.pair)};
  if (o.average) return Scenario{BlochAverageScenario{}};
  return std::nullopt;
}

std::string scenario_label(const Options& o) {
  if (!o.state.empty()) return "state";
  if (!o.pair.empty()) return "pair";
  return "average";
}

nlohmann::ordered_json metadata(const std::string& command, nlohmann::ordered_json config) {
  nlohmann::ordered_json m;
  m["tool"] = "ffprotect";
  m["version"] = FFP_VERSION;
  m["git_revision"] = FFP_GIT_REVISION;
  m["command"] = command;
  m["config"] = std::move(config);
  return m;
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

void emit(const Table& table, const Options& o, const nlohmann::ordered_json& meta, std::ostream& out) {
  std::ofstream file;
  std::ostream* os = &out;
  if (!o.output.empty()) {
    file.open(o.output, std::ios::binary | std::ios::trunc);
    if (!file) throw std::runtime_error("cannot open output file '" + o.output + "'");
    os = &file;
  }
  if (o.format == "json") {
    table.write_json(*os, meta);
  } else {
    table.write_csv(*os);
  }
  os->flush();
  if (!*os) throw std::runtime_error("failed writing output");
}

SweepGrid grid_from(const Options& o) {
  SweepGrid g;
  g.resolution = o.resolution;
  g.validate();
  return g;
}

nlohmann::ordered_json common_config(const Options& o) {
  nlohmann::ordered_json c;
  if (o.r) c["r"] = *o.r;
  c["scenario"] = scenario_label(o);
  if (!o.state.empty()) c["state"] = o.state;
  if (!o.pair.empty()) c["pair"] = o.pair;
  c["resolution"] = o.resolution;
  c["format"] = o.format;
  c["workers"] = resolve_workers(o.workers);
  return c;
}

void cmd_exact(const Options& o, std::ostream& out) {
  const ChannelParams channel(*o.r);
  const Scenario scenario = scenario_from(o).value_or(Scenario{BlochAverageScenario{}});
  const auto axis = exact_p_axis(channel, grid_from(o));
  Table t({"p", "g_fin", "f_value", "f_no_control"});
  for (const ExactCurvePoint& pt : exact_curve(scenario, channel, axis)) {
    t.add_row({pt.p, pt.success_prob, opt_cell(pt.fidelity), pt.bare_fidelity});
  }
  emit(t, o, metadata("exact", common_config(o)), out);
}

void cmd_optimal(const std::string& name, const Options& o, std::ostream& out, std::ostream& err) {
  const ChannelParams channel(*o.r);
  const Scenario scenario = scenario_from(o).value_or(Scenario{BlochAverageScenario{}});
  const SweepGrid grid = grid_from(o);

  Table t({"series", "fidelity", "success_prob", "p", "p_u", "p_v", "q", "q_r", "wmr_success_at_fidelity"});
  const auto frontier = optimal_frontier(scenario, channel, grid, o.workers);
  std::optional<std::vector<WmrFrontierPoint>> wmr;
  if (o.compare_wmr) wmr = wmr_frontier(scenario, channel, grid, o.workers);
  if (!frontier) err << "warning: no strength on the grid survives post-selection\n";

  if (frontier) {
    for (const FrontierPoint& pt : *frontier) {
      Cell wmr_at;
      if (wmr) wmr_at = opt_cell(frontier_success_at<WmrFrontierPoint>(*wmr, pt.fidelity));
      t.add_row({std::string("frontier"), pt.fidelity, pt.success_prob, pt.strengths.p(), pt.strengths.p_u(),
                 pt.strengths.p_v(), Cell{}, Cell{}, wmr_at});
    }
  }
  if (wmr) {
    for (const WmrFrontierPoint& pt : *wmr) {
      t.add_row({std::string("wmr_frontier"), pt.fidelity, pt.success_prob, Cell{}, Cell{}, Cell{}, pt.strengths.q(),
                 pt.strengths.q_r(), Cell{}});
    }
  }
  const double bare = ScenarioAverager(scenario).bare_fidelity(channel);
  t.add_row({std::string("no_control"), bare, 1.0, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}, Cell{}});

  if (o.scatter_resolution > 0) {
    SweepGrid coarse;
    coarse.resolution = o.scatter_resolution;
    coarse.refine_near_one = false;
    coarse.validate();
    for (const FrontierPoint& pt : evaluate_grid(scenario, channel, coarse, o.workers)) {
      t.add_row({std::string("scatter"), pt.fidelity, pt.success_prob, pt.strengths.p(), pt.strengths.p_u(),
                 pt.strengths.p_v(), Cell{}, Cell{}, Cell{}});
    }
  }

  auto config = common_config(o);
  config["compare_wmr"] = o.compare_wmr;
  config["scatter_resolution"] = o.scatter_resolution;
  emit(t, o, metadata(name, std::move(config)), out);
}

void cmd_entangled(const Options& o, std::ostream& out) {
  if (*o.alpha < 0.0 || *o.alpha > 1.0) throw std::domain_error("--alpha must lie in [0, 1]");
  const ChannelParams channel(*o.r);
  const Complex alpha(*o.alpha, 0.0);
  const EsdScan scan = esd_scan(alpha, channel, channel, grid_from(o));
  const bool predicates_defined = std::sqrt(1.0 - *o.alpha * *o.alpha) >= *o.alpha;

  Table t({"series", "p", "post_strength", "success_prob", "concurrence", "esd_bare", "esd_baseline"});
  for (const EsdRow& row : scan.feed_forward) {
    Cell bare_flag, baseline_flag;
    if (predicates_defined) {
      const auto cfg = TwoQubitConfig::with_exact_strengths(alpha, row.strength, row.strength, channel, channel);
      const EsdPredicates pred = esd_predicates(cfg);
      bare_flag = pred.bare;
      baseline_flag = pred.baseline;
    }
    t.add_row({std::string("feed_forward"), row.strength, row.post_strength, row.success_prob,
               opt_cell(row.concurrence), bare_flag, baseline_flag});
  }
  for (const EsdRow& row : scan.baseline) {
    t.add_row({std::string("wmr"), row.strength, row.post_strength, row.success_prob, opt_cell(row.concurrence),
               Cell{}, Cell{}});
  }
  const WmrTwoQubitConfig bare_cfg(alpha, channel, channel, WmrStrengths(0.0, 0.0), WmrStrengths(0.0, 0.0));
  const TwoQubitResult bare = run_wmr_two_qubit(bare_cfg);
  t.add_row({std::string("bare"), Cell{}, Cell{}, bare.success_prob, opt_cell(bare.concurrence), Cell{}, Cell{}});

  nlohmann::ordered_json config;
  config["r"] = *o.r;
  config["alpha"] = *o.alpha;
  config["resolution"] = o.resolution;
  config["format"] = o.format;
  emit(t, o, metadata("entangled", std::move(config)), out);
}

struct Check {
  std::string quantity;
  double analytic;
  double estimate;
  double sigma;
};

double binomial_sigma(double prob, double n) { return std::sqrt(std::max(0.0, prob * (1.0 - prob)) / n); }

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.samples < 1) throw std::invalid_argument("--samples must be at least 1");
  const ChannelParams channel(o.r.value_or(0.6));
  const PureState input = o.state.empty() ? parse_state("theta=0.5pi") : parse_state(o.state);
  const MeasurementStrengths strengths(o.p, o.p_u, o.p_v);

  SingleTrajectoryConfig cfg{input, strengths, channel};
  cfg.samples = static_cast<std::uint64_t>(o.samples);
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  const McEstimate mc = simulate_single(cfg);
  const ProtocolResult analytic = run_protocol(input, strengths, channel);
  const double n = static_cast<double>(mc.samples);

  std::vector<Check> checks;
  const double g = analytic.success_prob + o.perturb;
  checks.push_back({"success_prob", g, mc.success_prob_hat, binomial_sigma(analytic.success_prob, n)});
  if (analytic.fidelity && mc.fidelity_hat) {
    checks.push_back({"fidelity", *analytic.fidelity + o.perturb, *mc.fidelity_hat, mc.fidelity_std_error});
  }

  const auto pre_ops = pre_measurement(strengths.p());
  const std::array<PreResult, 2> pres{PreResult::kFirst, PreResult::kSecond};
  const std::array<FeedForward, 2> forward{FeedForward::kIdentity, FeedForward::kFlip};
  for (std::size_t i = 0; i < 2; ++i) {
    const Vec<2> branch = feed_forward(forward[i]) * pre_ops[i] * input.ket();
    const double g_pre = branch.squaredNorm();
    const double g_jump = channel.r() * std::norm(branch(1));
    std::uint64_t pre_count = 0, jump_count = 0;
    for (Trajectory tr : {Trajectory::kNoJump, Trajectory::kJump}) {
      for (bool acc : {false, true}) {
        pre_count += mc.count(pres[i], tr, acc);
        if (tr == Trajectory::kJump) jump_count += mc.count(pres[i], tr, acc);
      }
    }
    const std::string tag = "pre" + std::to_string(i + 1);
    checks.push_back({"prob_" + tag, g_pre, pre_count / n, binomial_sigma(g_pre, n)});
    checks.push_back({"prob_" + tag + "_jump", g_jump, jump_count / n, binomial_sigma(g_jump, n)});
  }
  for (const BranchOutcome& b : analytic.branches) {
    const std::string name = std::string("accepted_pre") + (b.pre == PreResult::kFirst ? "1" : "2") +
                             (b.trajectory == Trajectory::kJump ? "_jump" : "_no_jump");
    checks.push_back({name, b.weight, mc.count(b.pre, b.trajectory, true) / n, binomial_sigma(b.weight, n)});
  }

  Table t({"quantity", "analytic", "estimate", "sigma", "verdict"});
  int failures = 0;
  for (const Check& c : checks) {
    const bool pass = std::abs(c.estimate - c.analytic) <= kVerifySigmas * std::max(c.sigma, kSigmaFloor);
    if (!pass) ++failures;
    t.add_row({c.quantity, c.analytic, c.estimate, c.sigma, std::string(pass ? "PASS" : "FAIL")});
  }

  nlohmann::ordered_json config;
  config["r"] = channel.r();
  config["state"] = o.state.empty() ? "theta=0.5pi" : o.state;
  config["p"] = o.p;
  config["p_u"] = o.p_u;
  config["p_v"] = o.p_v;
  config["seed"] = o.seed;
  config["samples"] = o.samples;
  config["perturb_analytic"] = o.perturb;
  config["workers"] = resolve_workers(o.workers);
  emit(t, o, metadata("verify", std::move(config)), out);

  if (failures > 0) {
    err << "verify: " << failures << " of " << checks.size() << " quantities outside " << kVerifySigmas
        << " sigma\n";
    return kExitStatistical;
  }
  err << "verify: all " << checks.size() << " quantities within " << kVerifySigmas << " sigma\n";
  return kExitOk;
}

void add_output_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--output", o.output, "Write to this file instead of stdout");
  cmd->add_option("--workers", o.workers, "Worker threads (0 = automatic)")
      ->envname(kWorkersEnv)
      ->check(CLI::NonNegativeNumber);
}

void add_scenario_options(CLI::App* cmd, Options& o, bool pair_required) {
  auto* state = cmd->add_option("--state", o.state, "Single input state, e.g. theta=0.5pi,phi=0");
  auto* pair = cmd->add_option("--pair", o.pair, "Nonorthogonal pair, e.g. theta=0.4375pi,phi=0");
  if (pair_required) {
    pair->required();
    state->excludes(pair);
    return;
  }
  auto* average = cmd->add_flag("--average", o.average, "Uniform Bloch-sphere average (default)");
  state->excludes(pair)->excludes(average);
  pair->excludes(average);
}

}  // namespace

double parse_angle(std::string_view text) {
  text = trim(text);
  double scale = 1.0;
  if (text.size() >= 2 && text.substr(text.size() - 2) == "pi") {
    scale = kPi;
    text.remove_suffix(2);
    text = trim(text);
    if (text.empty()) return kPi;
    if (text.back() == '*') text.remove_suffix(1);
  }
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw std::invalid_argument("malformed angle '" + std::string(text) + "'");
  }
  return value * scale;
}

PureState parse_state(std::string_view text) {
  const Angles a = parse_angles(text);
  return PureState::from_bloch(a.theta, a.phi);
}

NonorthogonalPair parse_pair(std::string_view text) {
  const Angles a = parse_angles(text);
  return NonorthogonalPair(a.theta, a.phi);
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Feed-forward protection of qubits against amplitude damping", "ffprotect"};
  app.set_version_flag("--version", std::string(FFP_VERSION) + " (" + FFP_GIT_REVISION + ")");
  app.require_subcommand(1);
  Options o;

  auto* exact = app.add_subcommand("exact", "Exact-protection curves over the pre-measurement strength");
  exact->add_option("--r", o.r, "Damping probability")->required();
  exact->add_option("--resolution", o.resolution, "Uniform points on the admissible p range");
  add_scenario_options(exact, o, false);
  add_output_options(exact, o);

  auto* optimal = app.add_subcommand("optimal", "Fidelity/success frontier over all strengths");
  auto* nonorth = app.add_subcommand("nonorthogonal", "Frontier for a nonorthogonal pair (optimal with --pair)");
  for (auto* cmd : {optimal, nonorth}) {
    cmd->add_option("--r", o.r, "Damping probability")->required();
    cmd->add_option("--resolution", o.resolution, "Points per strength axis");
    cmd->add_flag("--compare-wmr", o.compare_wmr, "Add the weak-measurement-reversal frontier");
    cmd->add_option("--scatter-resolution", o.scatter_resolution, "Also emit every point of a coarse grid")
        ->check(CLI::NonNegativeNumber);
    add_scenario_options(cmd, o, cmd == nonorth);
    add_output_options(cmd, o);
  }

  auto* entangled = app.add_subcommand("entangled", "Concurrence vs success probability for alpha|00>+beta|11>");
  entangled->add_option("--alpha", o.alpha, "Real amplitude of |00>")->required();
  entangled->add_option("--r", o.r, "Damping probability on both qubits")->required();
  entangled->add_option("--resolution", o.resolution, "Uniform points per strength axis");
  add_output_options(entangled, o);

  auto* verify = app.add_subcommand("verify", "Monte Carlo check of the analytic single-qubit results");
  verify->add_option("--r", o.r, "Damping probability (default 0.6)");
  verify->add_option("--state", o.state, "Input state (default theta=0.5pi)");
  verify->add_option("--p", o.p, "Pre-measurement strength");
  verify->add_option("--pu", o.p_u, "Post-selection strength after outcome 1");
  verify->add_option("--pv", o.p_v, "Post-selection strength after outcome 2");
  verify->add_option("--seed", o.seed, "Random seed");
  verify->add_option("--samples", o.samples, "Trajectories");
  verify->add_option("--perturb-analytic", o.perturb, "Offset added to analytic G and F (negative control)");
  add_output_options(verify, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (exact->parsed()) {
      cmd_exact(o, out);
    } else if (optimal->parsed()) {
      cmd_optimal("optimal", o, out, err);
    } else if (nonorth->parsed()) {
      cmd_optimal("nonorthogonal", o, out, err);
    } else if (entangled->parsed()) {
      cmd_entangled(o, out);
    } else if (verify->parsed()) {
      return cmd_verify(o, out, err);
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace ffp::cli
