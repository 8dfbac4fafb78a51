// blockseg: segment | simulate | experiment | theory-check
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "blockseg/dp.hpp"
#include "blockseg/evaluate.hpp"
#include "blockseg/experiment.hpp"
#include "blockseg/io.hpp"
#include "blockseg/prefix_stats.hpp"
#include "blockseg/simulate.hpp"

using json = nlohmann::ordered_json;
using namespace blockseg;

namespace {

constexpr int kExitFlags = 1;
constexpr int kExitIo = 2;
constexpr int kExitInfeasible = 3;
constexpr int kExitBoundViolated = 4;

std::vector<double> parse_reals(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    size_t pos = 0;
    const double v = std::stod(item, &pos);
    if (pos != item.size()) throw CLI::ValidationError("not a number: " + item);
    out.push_back(v);
  }
  return out;
}

json seg_json(const Segmentation& s) { return json(s.b); }
json seg_json_one_based(const Segmentation& s) { return json(s.to_one_based()); }

int cmd_segment(const std::string& input, const std::string& output, SegConfig cfg) {
  const ObservationMatrix y = load_matrix(input, cfg);
  const PrefixStats stats(y, cfg);
  const SegmentationResult res = select_k(stats, cfg);

  json j;
  j["n"] = y.n();
  j["config"] = {{"c", cfg.c},
                 {"min_len", cfg.min_len},
                 {"k_max", cfg.k_max},
                 {"symmetrize", cfg.symmetrize}};
  j["m01"] = res.m01;
  j["per_k"] = json::array();
  for (const PerKRecord& r : res.per_k) {
    json rec;
    rec["k"] = r.k;
    rec["feasible"] = r.feasible;
    if (r.feasible) {
      rec["boundaries"] = seg_json(r.boundaries);
      rec["t"] = seg_json_one_based(r.boundaries);
      rec["criterion"] = r.criterion;
    } else {
      rec["boundaries"] = nullptr;
      rec["t"] = nullptr;
      rec["criterion"] = nullptr;
    }
    j["per_k"].push_back(rec);
  }
  j["k_hat"] = res.k_hat;
  j["boundaries_hat"] = seg_json(res.boundaries_hat);
  j["t_hat"] = seg_json_one_based(res.boundaries_hat);

  std::ofstream out(output);
  if (!out) throw IoError("cannot write " + output);
  out << j.dump(2) << '\n';
  return 0;
}

int cmd_simulate(const SimSpec& spec, const SegConfig& cfg, const std::string& output) {
  const auto [y, t_star] = generate(spec, cfg);
  save_matrix(y, output);

  json side;
  side["n"] = spec.n;
  side["tau"] = spec.truth.tau;
  side["mu"] = spec.truth.mu;
  side["mu0"] = spec.truth.mu0;
  side["sigma"] = spec.truth.sigma;
  side["omega"] = spec.truth.omega;
  side["seed"] = spec.seed;
  side["boundaries"] = seg_json(t_star);
  side["t"] = seg_json_one_based(t_star);
  const std::string sidecar = output + ".truth.json";
  std::ofstream out(sidecar);
  if (!out) throw IoError("cannot write " + sidecar);
  out << side.dump(2) << '\n';
  return 0;
}

int cmd_theory_check(const GroundTruth& truth, const SegConfig& cfg, int n,
                     const std::string& mode_str, const Lemma1Options& opts, int deco_pairs,
                     double sigma, std::ostream& out) {
  const Lemma1Mode mode = lemma1_mode_from_string(mode_str);
  const Lemma1Report rep = lemma1_check(truth, cfg, n, mode, opts);

  // decomposition identity on random (segmentation, seed) pairs at this n
  const DerivedConfig d = validate_config(cfg, n);
  Xoshiro256pp rng(opts.sample_seed ^ 0x9e3779b97f4a7c15ULL);
  double max_rel_err = 0.0;
  for (int p = 0; p < deco_pairs; ++p) {
    SimSpec spec;
    spec.n = n;
    spec.truth = truth;
    spec.truth.sigma = sigma;
    spec.seed = rng.next();
    const auto [y, t_star] = generate(spec, cfg);

    const int k_lo = d.k_lo;
    const int k_hi = std::min(d.k_hi, truth.k_star() + 2);
    const int K = k_lo + static_cast<int>(rng.next() % static_cast<std::uint64_t>(k_hi - k_lo + 1));
    Segmentation t;
    for (int tries = 0;; ++tries) {
      t = sample_segmentation(n, K, d.l_min, d.l_max, rng);
      try {
        intersection_counts(t, spec.truth, cfg, n);
        break;  // all blocks clear of the corner
      } catch (const ConfigError&) {
        if (tries > 500) throw;
      }
    }
    const TheoryDecomposition terms = random_terms(t, y, spec.truth, cfg);
    const double err = std::abs(terms.bn + terms.vn + terms.wn + terms.zn - terms.jn) /
                       std::max(1.0, std::abs(terms.jn));
    max_rel_err = std::max(max_rel_err, err);
  }
  const bool deco_ok = max_rel_err <= 1e-8;
  const bool bound_ok = rep.empty || rep.margin > 0.0;

  json j;
  j["mode"] = rep.mode;
  j["n"] = rep.n;
  j["bound"] = rep.bound;
  j["min_bn"] = rep.min_bn;
  j["margin"] = rep.margin;
  j["candidates_checked"] = rep.candidates_checked;
  j["empty"] = rep.empty;
  j["exhaustive"] = rep.exhaustive;
  j["decomposition"] = {{"pairs", deco_pairs}, {"max_rel_err", max_rel_err}, {"ok", deco_ok}};
  j["ok"] = bound_ok && deco_ok;
  out << j.dump(2) << '\n';
  return (bound_ok && deco_ok) ? 0 : kExitBoundViolated;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact least-squares diagonal-block segmentation"};
  app.require_subcommand(1);

  // segment
  auto* seg = app.add_subcommand("segment", "segment a symmetric matrix");
  std::string seg_input, seg_output;
  SegConfig seg_cfg;
  seg->add_option("--input", seg_input, "matrix file (TSV, or CSV by extension)")->required();
  seg->add_option("--output", seg_output, "result JSON path")->required();
  seg->add_option("--kmax", seg_cfg.k_max, "largest number of blocks tried")->required();
  seg->add_option("--c", seg_cfg.c, "max block-size fraction");
  seg->add_option("--min-len", seg_cfg.min_len, "minimal block length");
  seg->add_flag("--symmetrize", seg_cfg.symmetrize, "average Y with its transpose before use");

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a seeded block matrix");
  int sim_n = 0;
  std::string sim_tau, sim_mu, sim_output;
  double sim_mu0 = 0.0, sim_sigma = 0.0, sim_omega = 0.0;
  std::uint64_t sim_seed = 0;
  SegConfig sim_cfg;
  sim->add_option("--n", sim_n, "matrix size")->required();
  sim->add_option("--tau", sim_tau, "break fractions 0,...,1 (comma separated)")->required();
  sim->add_option("--mu", sim_mu, "block means (comma separated)")->required();
  sim->add_option("--mu0", sim_mu0, "baseline mean")->required();
  sim->add_option("--sigma", sim_sigma, "noise standard deviation")->required();
  sim->add_option("--omega", sim_omega, "baseline-shift amplitude");
  sim->add_option("--seed", sim_seed, "RNG seed")->required();
  sim->add_option("--output", sim_output, "matrix path (sidecar: <output>.truth.json)")->required();
  sim->add_option("--c", sim_cfg.c, "max block-size fraction");
  sim->add_option("--min-len", sim_cfg.min_len, "minimal block length");

  // experiment
  auto* exp = app.add_subcommand("experiment", "run a replicated sweep from a config file");
  std::string exp_config, exp_output;
  exp->add_option("--config", exp_config, "JSON or TOML experiment config")->required();
  exp->add_option("--output", exp_output, "replicate CSV path")->required();

  // theory-check
  auto* thy = app.add_subcommand("theory-check", "verify the deterministic lower bounds");
  int thy_n = 0;
  std::string thy_mode, thy_tau, thy_mu;
  double thy_mu0 = 0.0, thy_delta = -1.0, thy_sigma = 1.0;
  long long thy_budget = 1'000'000;
  int thy_k_over_max = -1, thy_pairs = 20;
  std::uint64_t thy_seed = 0x5eedULL;
  SegConfig thy_cfg;
  thy->add_option("--n", thy_n, "matrix size")->required();
  thy->add_option("--mode", thy_mode, "under|over|equal_far")->required();
  thy->add_option("--tau", thy_tau, "true break fractions")->required();
  thy->add_option("--mu", thy_mu, "true block means")->required();
  thy->add_option("--mu0", thy_mu0, "baseline mean")->required();
  thy->add_option("--delta", thy_delta, "equal_far distance threshold (default delta_tau/4)");
  thy->add_option("--budget", thy_budget, "sampling budget when the class is too large");
  thy->add_option("--k-over-max", thy_k_over_max, "largest K in over mode (default K*+1)");
  thy->add_option("--sigma", thy_sigma, "noise sd for the decomposition suite");
  thy->add_option("--pairs", thy_pairs, "random pairs in the decomposition suite");
  thy->add_option("--sample-seed", thy_seed, "seed for sampling fallbacks");
  thy->add_option("--c", thy_cfg.c, "max block-size fraction");
  thy->add_option("--min-len", thy_cfg.min_len, "minimal block length");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitFlags;
  }

  try {
    if (*seg) return cmd_segment(seg_input, seg_output, seg_cfg);
    if (*sim) {
      SimSpec spec;
      spec.n = sim_n;
      spec.truth.tau = parse_reals(sim_tau);
      spec.truth.mu = parse_reals(sim_mu);
      spec.truth.mu0 = sim_mu0;
      spec.truth.sigma = sim_sigma;
      spec.truth.omega = sim_omega;
      spec.seed = sim_seed;
      return cmd_simulate(spec, sim_cfg, sim_output);
    }
    if (*exp) {
      const ExperimentConfig cfg = load_experiment_config(exp_config);
      run_experiment(cfg, exp_output);
      return 0;
    }
    if (*thy) {
      GroundTruth truth;
      truth.tau = parse_reals(thy_tau);
      truth.mu = parse_reals(thy_mu);
      truth.mu0 = thy_mu0;
      Lemma1Options opts;
      opts.delta = thy_delta;
      opts.budget = thy_budget;
      opts.k_over_max = thy_k_over_max;
      opts.sample_seed = thy_seed;
      return cmd_theory_check(truth, thy_cfg, thy_n, thy_mode, opts, thy_pairs, thy_sigma,
                              std::cout);
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFlags;
  }
  return 0;
}
