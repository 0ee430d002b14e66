#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nag/errors.hpp"
#include "nag/harness.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> topology;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::optional<int> iters;
  std::optional<std::string> out;
};

void add_common(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--config", ov.config_path, "JSON config file");
  cmd->add_option("--seed", ov.seed, "instance seed");
  cmd->add_option("--topology", ov.topology, "topology kind: linear|log|complete");
  cmd->add_option("--alpha", ov.alpha, "gradient step size");
  cmd->add_option("--beta", ov.beta, "relaxation step size in (0, 1]");
  cmd->add_option("--iters", ov.iters, "iteration budget");
  cmd->add_option("--out", ov.out, "trace output path");
}

nag::ExperimentConfig resolve(const Overrides& ov) {
  nag::ExperimentConfig cfg;
  if (!ov.config_path.empty()) cfg = nag::load_config(ov.config_path);
  if (ov.seed) cfg.game.seed = *ov.seed;
  if (ov.topology) cfg.topology = nag::parse_topology(*ov.topology);
  if (ov.alpha) cfg.solver.alpha = *ov.alpha;
  if (ov.beta) cfg.solver.beta = *ov.beta;
  if (ov.iters) cfg.solver.max_iters = *ov.iters;
  if (ov.out) cfg.output_path = *ov.out;
  cfg.validate();
  return cfg;
}

void print_summary(const char* label, const nag::ExperimentResult& res) {
  std::printf("%s: final gap %s, fitted rate %s, sigma %s\n", label,
              nag::format_float(res.trace.final_gap()).c_str(),
              nag::format_float(res.fitted_rate).c_str(),
              nag::format_float(res.sigma).c_str());
  if (res.theory)
    std::printf("%s: rho %s, rate bound %s, certified %s\n", label,
                nag::format_float(res.theory->rho).c_str(),
                nag::format_float(res.theory->rate_bound).c_str(),
                res.theory->certificate_applies ? "yes" : "no");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed Nash-equilibrium seeking for networked aggregative games"};
  app.require_subcommand(1);

  Overrides ov;
  std::vector<double> betas{0.8, 0.85, 0.9, 0.95, 1.0};
  double mu = 0.0, lipschitz = 0.0, sigma = -1.0;
  std::string spectral_topology = "linear";
  int spectral_n = 20;

  auto* run = app.add_subcommand("run", "run the distributed solver and write a trace");
  add_common(run, ov);
  auto* compare = app.add_subcommand(
      "compare", "fixed-step solver vs. the diminishing-step baseline, same instance");
  add_common(compare, ov);
  auto* sweep = app.add_subcommand("beta-sweep", "tune alpha for each beta, report final gaps");
  add_common(sweep, ov);
  sweep->add_option("--betas", betas, "beta values to sweep (comma separated)")
      ->delimiter(',');
  auto* bounds = app.add_subcommand("bounds", "certified step-size region and rates");
  add_common(bounds, ov);
  bounds->add_option("--mu", mu, "monotonicity constant (skip to derive from config)");
  bounds->add_option("--L", lipschitz, "Lipschitz constant");
  bounds->add_option("--sigma", sigma, "consensus contraction factor in [0, 1)");
  auto* spectral = app.add_subcommand("spectral", "sigma and connectivity of a topology");
  spectral->add_option("--topology", spectral_topology, "topology kind");
  spectral->add_option("--n", spectral_n, "player count");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const auto res = nag::run_experiment(resolve(ov));
      print_summary("run", res);
    } else if (compare->parsed()) {
      const auto res = nag::run_compare(resolve(ov));
      print_summary("algorithm1", res.algorithm1);
      print_summary("baseline", res.baseline);
      std::printf("gap ratio (baseline / algorithm1): %s\n",
                  nag::format_float(res.baseline.trace.final_gap() /
                                    res.algorithm1.trace.final_gap())
                      .c_str());
    } else if (sweep->parsed()) {
      const auto rows = nag::run_beta_sweep(resolve(ov), betas);
      std::printf("beta,alpha,gap_final\n");
      for (const auto& row : rows)
        std::printf("%s,%s,%s\n", nag::format_float(row.beta).c_str(),
                    nag::format_float(row.alpha).c_str(),
                    nag::format_float(row.gap_final).c_str());
    } else if (bounds->parsed()) {
      if (!(mu > 0.0) || !(lipschitz > 0.0) || sigma < 0.0) {
        const auto cfg = resolve(ov);
        const auto setup = nag::prepare_experiment(cfg);
        mu = setup.constants.mu;
        lipschitz = setup.constants.lipschitz;
        sigma = setup.W.sigma();
      }
      const auto rep = nag::bounds_report(mu, lipschitz, sigma);
      std::printf("mu %s, L %s, sigma %s\n", nag::format_float(rep.mu).c_str(),
                  nag::format_float(rep.lipschitz).c_str(),
                  nag::format_float(rep.sigma).c_str());
      std::printf("beta_max %s, beta=1 certified: %s\n",
                  nag::format_float(rep.beta_max).c_str(),
                  rep.beta_one_certified ? "yes" : "no");
      std::printf("beta,alpha,rho,rate_bound\n");
      for (const auto& row : rep.rows)
        std::printf("%s,%s,%s,%s\n", nag::format_float(row.beta).c_str(),
                    nag::format_float(row.alpha).c_str(), nag::format_float(row.rho).c_str(),
                    nag::format_float(row.rate_bound).c_str());
    } else if (spectral->parsed()) {
      const auto rep =
          nag::spectral_report(nag::parse_topology(spectral_topology), spectral_n);
      std::printf("topology %s, n %d, edges %zu, connected %s, sigma %s\n",
                  std::string(nag::topology_name(rep.kind)).c_str(), rep.n, rep.edge_count,
                  rep.connected ? "yes" : "no", nag::format_float(rep.sigma).c_str());
    }
  } catch (const nag::ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const nag::NumericError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
