// zeroset: numerical laboratory for the variance of random real algebraic
// zero sets. Subcommands tabulate the universal-constant quadrature, the
// two-point Jacobian moments, the Kostlan second-chaos asymptotics, direct
// root-count / Crofton simulations and the limit-covariance identity suite.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "report.hpp"
#include "zeroset/jacobian_moments.hpp"
#include "zeroset/kostlan.hpp"
#include "zeroset/limit_model.hpp"
#include "zeroset/parallel.hpp"
#include "zeroset/universal_constants.hpp"
#include "zeroset/zero_set_mc.hpp"

namespace fs = std::filesystem;
using namespace zeroset;
using tools::cell;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNonConvergence = 2;
constexpr int kExitUsage = 64;

struct CommonArgs {
  std::uint64_t seed = 1;
  std::string out = ".";
  int threads = 0;  // 0: use every core

  int resolved_threads() const {
    return threads > 0 ? threads : default_threads();
  }
  fs::path out_dir() const {
    fs::create_directories(out);
    return out;
  }
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--seed", args.seed, "base RNG seed")
      ->envname("ZEROSET_SEED");
  cmd->add_option("--out", args.out, "output directory");
  cmd->add_option("--threads", args.threads,
                  "worker threads (default: all cores)");
}

// "log:1e-3:40:50" or "lin:0:5:20"
std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  char kind[8];
  double lo, hi;
  int count;
  if (std::sscanf(spec.c_str(), "%7[a-z]:%lf:%lf:%d", kind, &lo, &hi, &count) != 4 ||
      count < 1)
    throw CLI::ValidationError("--t-grid", "expected log:lo:hi:count or lin:lo:hi:count");
  const std::string k = kind;
  for (int i = 0; i < count; ++i) {
    const double frac = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
    if (k == "log") {
      if (!(lo > 0)) throw CLI::ValidationError("--t-grid", "log grid needs lo > 0");
      out.push_back(lo * std::pow(hi / lo, frac));
    } else if (k == "lin") {
      out.push_back(lo + (hi - lo) * frac);
    } else {
      throw CLI::ValidationError("--t-grid", "unknown grid kind " + k);
    }
  }
  return out;
}

tools::RunManifest make_manifest(const std::string& command, int argc,
                                 char** argv, std::uint64_t seed) {
  tools::RunManifest m;
  m.command = command;
  for (int i = 0; i < argc; ++i) m.command_line.emplace_back(argv[i]);
  m.seed = seed;
  m.stamp_start();
  return m;
}

int run_constants(const CommonArgs& common, int n_max,
                  std::int64_t samples_per_node, int nodes, int argc,
                  char** argv) {
  QuadratureConfig cfg;
  cfg.mc_samples_per_node = samples_per_node;
  cfg.nodes_per_panel = nodes;
  cfg.validate();

  tools::RunManifest manifest = make_manifest("constants", argc, argv, common.seed);
  manifest.config = {{"n_max", std::to_string(n_max)},
                     {"samples_per_node", std::to_string(samples_per_node)},
                     {"nodes_per_panel", std::to_string(nodes)},
                     {"seed", std::to_string(common.seed)}};
  manifest.sample_budgets["mc_samples_per_node"] = samples_per_node;

  const auto rows =
      positivity_report(n_max, cfg, common.seed, common.resolved_threads());

  tools::CsvWriter csv({"n", "r", "I_nr", "I_err", "leading_constant",
                        "lower_bound", "positive", "samples", "seed"});
  bool all_converged = true;
  for (const ConstantReport& row : rows) {
    all_converged = all_converged && row.converged;
    csv.add_row({cell(row.pair.n), cell(row.pair.r), cell(row.i_nr),
                 cell(row.i_err), cell(row.leading_constant),
                 cell(row.lower_bound), cell(row.positive), cell(row.samples),
                 cell(row.seed)});
  }
  const fs::path out = common.out_dir() / "constants.csv";
  csv.write(out);
  manifest.outputs = {out.filename().string()};
  manifest.stamp_finish();
  manifest.write(common.out_dir() / "constants_manifest.json");
  std::printf("wrote %s (%d rows)%s\n", out.string().c_str(),
              static_cast<int>(rows.size()),
              all_converged ? "" : " [non-convergence flagged]");
  return all_converged ? kExitOk : kExitNonConvergence;
}

int run_grid_command(const std::string& name, const CommonArgs& common, int n,
                     int r, const std::string& grid_spec, std::int64_t samples,
                     bool with_dnr, int argc, char** argv) {
  const DimPair pair(n, r);
  const std::vector<double> grid = parse_grid(grid_spec);
  for (double t : grid)
    if (!(t > 0)) throw CLI::ValidationError("--t-grid", "t values must be positive");

  tools::RunManifest manifest = make_manifest(name, argc, argv, common.seed);
  manifest.config = {{"n", std::to_string(n)},
                     {"r", std::to_string(r)},
                     {"t_grid", grid_spec},
                     {"samples", std::to_string(samples)},
                     {"seed", std::to_string(common.seed)}};
  manifest.sample_budgets["samples_per_node"] = samples;

  const GridMoments gm =
      moment_odet_pair_grid(grid, pair, samples, common.seed,
                            /*common_random_numbers=*/true, 32,
                            common.resolved_threads(), /*control_variate=*/true);
  const double b0 = expected_odet_standard(pair);

  tools::CsvWriter csv(
      with_dnr
          ? std::vector<std::string>{"t", "E_odet_pair", "stderr", "Dnr",
                                     "Dnr_stderr"}
          : std::vector<std::string>{"t", "E_odet_pair", "stderr"});
  for (size_t j = 0; j < grid.size(); ++j) {
    const double shrink = std::pow(-std::expm1(-grid[j]), 0.5 * r);
    if (with_dnr) {
      const double raw = gm.mean[j] - gm.control_lambda[j] * b0 * b0;
      csv.add_row({cell(grid[j]), cell(gm.mean[j]), cell(gm.std_err[j]),
                   cell(raw / shrink), cell(gm.std_err[j] / shrink)});
    } else {
      csv.add_row({cell(grid[j]), cell(gm.mean[j]), cell(gm.std_err[j])});
    }
  }
  const fs::path out = common.out_dir() / (name + ".csv");
  csv.write(out);
  manifest.outputs = {out.filename().string()};
  manifest.stamp_finish();
  manifest.write(common.out_dir() / (name + "_manifest.json"));
  std::printf("wrote %s (%d rows)\n", out.string().c_str(),
              static_cast<int>(grid.size()));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random real algebraic zero-set statistics laboratory"};
  app.set_config("--config", "", "TOML config file (flat sections per command)");
  app.require_subcommand(1);

  // ---- constants ----------------------------------------------------------
  CommonArgs constants_args;
  int n_max = 3;
  std::int64_t samples_per_node = 200000;
  int nodes_per_panel = 32;
  CLI::App* constants = app.add_subcommand(
      "constants", "positivity table of the universal variance constants");
  add_common(constants, constants_args);
  constants->add_option("--n-max", n_max, "largest ambient dimension");
  constants->add_option("--samples-per-node", samples_per_node,
                        "Monte-Carlo samples per quadrature node");
  constants->add_option("--nodes", nodes_per_panel, "Gauss-Legendre nodes per panel");

  // ---- dnr / moments ------------------------------------------------------
  CommonArgs dnr_args, moments_args;
  int dnr_n = 1, dnr_r = 1, mom_n = 1, mom_r = 1;
  std::string dnr_grid = "log:1e-3:40:50", mom_grid = "log:1e-3:40:50";
  std::int64_t dnr_samples = 200000, mom_samples = 200000;
  CLI::App* dnr_cmd =
      app.add_subcommand("dnr", "tabulate the centered two-point density D_{n,r}");
  add_common(dnr_cmd, dnr_args);
  dnr_cmd->add_option("--n", dnr_n, "ambient dimension");
  dnr_cmd->add_option("--r", dnr_r, "codimension");
  dnr_cmd->add_option("--t-grid", dnr_grid, "grid spec log:lo:hi:count");
  dnr_cmd->add_option("--samples", dnr_samples, "Monte-Carlo samples per node");

  CLI::App* moments_cmd = app.add_subcommand(
      "moments", "tabulate E[|det_perp X||det_perp Y|] over a t grid");
  add_common(moments_cmd, moments_args);
  moments_cmd->add_option("--n", mom_n, "ambient dimension");
  moments_cmd->add_option("--r", mom_r, "codimension");
  moments_cmd->add_option("--t-grid", mom_grid, "grid spec log:lo:hi:count");
  moments_cmd->add_option("--samples", mom_samples, "Monte-Carlo samples per node");

  // ---- kostlan ------------------------------------------------------------
  CLI::App* kostlan = app.add_subcommand("kostlan", "Kostlan-Shub-Smale model");
  kostlan->require_subcommand(1);

  CommonArgs chaos_args;
  int chaos_n = 2, chaos_r = 1;
  std::int64_t chaos_d = 100000;
  CLI::App* chaos =
      kostlan->add_subcommand("chaos", "second-chaos variance and its limit");
  add_common(chaos, chaos_args);
  chaos->add_option("--n", chaos_n, "ambient dimension");
  chaos->add_option("--r", chaos_r, "codimension");
  chaos->add_option("--d", chaos_d, "degree");

  CommonArgs sim_args;
  int sim_d = 100;
  std::int64_t sim_samples = 10000;
  bool sim_histogram = false;
  CLI::App* simulate =
      kostlan->add_subcommand("simulate", "empirical root-count statistics on RP^1");
  add_common(simulate, sim_args);
  simulate->add_option("--d", sim_d, "degree");
  simulate->add_option("--samples", sim_samples, "number of draws");
  simulate->add_flag("--histogram", sim_histogram, "also write the histogram JSON");

  CommonArgs kr_args;
  int kr_d = 50;
  std::int64_t kr_samples = 200000, kr_sim_samples = 0;
  CLI::App* kacrice = kostlan->add_subcommand(
      "kacrice", "Kac-Rice variance of the RP^1 root count");
  add_common(kacrice, kr_args);
  kacrice->add_option("--d", kr_d, "degree");
  kacrice->add_option("--samples-per-node", kr_samples,
                      "Monte-Carlo samples per quadrature node");
  kacrice->add_option("--simulate-samples", kr_sim_samples,
                      "when > 0, also simulate and emit the comparison columns");

  CommonArgs cro_args;
  int cro_d = 25, cro_slices = 50;
  std::int64_t cro_samples = 2000;
  CLI::App* crofton = kostlan->add_subcommand(
      "crofton", "Crofton length estimate of a KSS curve on RP^2");
  add_common(crofton, cro_args);
  crofton->add_option("--d", cro_d, "degree");
  crofton->add_option("--samples", cro_samples, "number of curve draws");
  crofton->add_option("--slices", cro_slices, "random lines per draw");

  // ---- limit-check --------------------------------------------------------
  int lc_points = 40;
  double lc_lo = 1e-4, lc_hi = 40.0;
  CLI::App* limit_check = app.add_subcommand(
      "limit-check", "deterministic identity suite of the limit covariances");
  limit_check->add_option("--grid-points", lc_points, "log-grid size");
  limit_check->add_option("--t-lo", lc_lo, "grid lower end (t = |z|^2)");
  limit_check->add_option("--t-hi", lc_hi, "grid upper end");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*constants)
      return run_constants(constants_args, n_max, samples_per_node,
                           nodes_per_panel, argc, argv);
    if (*dnr_cmd)
      return run_grid_command("dnr", dnr_args, dnr_n, dnr_r, dnr_grid,
                              dnr_samples, true, argc, argv);
    if (*moments_cmd)
      return run_grid_command("moments", moments_args, mom_n, mom_r, mom_grid,
                              mom_samples, false, argc, argv);

    if (*chaos) {
      const DimPair pair(chaos_n, chaos_r);
      tools::RunManifest manifest =
          make_manifest("kostlan_chaos", argc, argv, chaos_args.seed);
      manifest.config = {{"n", std::to_string(chaos_n)},
                         {"r", std::to_string(chaos_r)},
                         {"d", std::to_string(chaos_d)}};
      const double j = jnr_integral(chaos_d, pair);
      const SecondChaos sc = second_chaos_variance(chaos_d, pair);
      tools::CsvWriter csv({"d", "n", "r", "J", "var2", "normalized_var2",
                            "limit", "rel_err"});
      csv.add_row({cell(chaos_d), cell(chaos_n), cell(chaos_r), cell(j),
                   cell(sc.variance), cell(sc.normalized), cell(sc.limit),
                   cell(std::abs(sc.normalized - sc.limit) / sc.limit)});
      const fs::path out = chaos_args.out_dir() / "kostlan_chaos.csv";
      csv.write(out);
      manifest.outputs = {out.filename().string()};
      manifest.stamp_finish();
      manifest.write(chaos_args.out_dir() / "kostlan_chaos_manifest.json");
      std::printf("wrote %s\n", out.string().c_str());
      return kExitOk;
    }

    if (*simulate) {
      tools::RunManifest manifest =
          make_manifest("kostlan_simulate", argc, argv, sim_args.seed);
      manifest.config = {{"d", std::to_string(sim_d)},
                         {"samples", std::to_string(sim_samples)},
                         {"seed", std::to_string(sim_args.seed)}};
      manifest.sample_budgets["samples"] = sim_samples;
      const ZeroStats st = empirical_root_stats(
          sim_d, sim_samples, sim_args.seed, sim_args.resolved_threads());
      tools::CsvWriter csv({"d", "samples", "mean", "mean_ci", "var", "var_ci",
                            "var_over_sqrt_d", "seed"});
      csv.add_row({cell(st.d), cell(st.samples), cell(st.mean), cell(st.mean_ci),
                   cell(st.var), cell(st.var_ci),
                   cell(st.var / std::sqrt(static_cast<double>(st.d))),
                   cell(st.seed)});
      const fs::path out = sim_args.out_dir() / "kostlan_simulate.csv";
      csv.write(out);
      manifest.outputs = {out.filename().string()};
      if (sim_histogram) {
        nlohmann::json h;
        h["d"] = st.d;
        h["samples"] = st.samples;
        h["histogram"] = st.histogram;
        const fs::path hout = sim_args.out_dir() / "kostlan_simulate_histogram.json";
        std::ofstream(hout, std::ios::binary) << h.dump(2) << "\n";
        manifest.outputs.push_back(hout.filename().string());
      }
      manifest.stamp_finish();
      manifest.write(sim_args.out_dir() / "kostlan_simulate_manifest.json");
      std::printf("wrote %s (mean %.4f, var %.4f)\n", out.string().c_str(),
                  st.mean, st.var);
      return kExitOk;
    }

    if (*kacrice) {
      tools::RunManifest manifest =
          make_manifest("kostlan_kacrice", argc, argv, kr_args.seed);
      manifest.config = {{"d", std::to_string(kr_d)},
                         {"samples_per_node", std::to_string(kr_samples)},
                         {"simulate_samples", std::to_string(kr_sim_samples)},
                         {"seed", std::to_string(kr_args.seed)}};
      manifest.sample_budgets["samples_per_node"] = kr_samples;
      const KacRiceVariance kr = kac_rice_variance_rp1(
          kr_d, kr_samples, kr_args.seed, kr_args.resolved_threads());
      std::vector<std::string> header{"d", "variance", "stderr", "mean",
                                      "samples_per_node", "seed"};
      std::vector<std::string> row{cell(kr_d),          cell(kr.variance),
                                   cell(kr.std_err),    cell(kr.mean),
                                   cell(kr_samples),    cell(kr_args.seed)};
      if (kr_sim_samples > 0) {
        const ZeroStats st =
            empirical_root_stats(kr_d, kr_sim_samples, kr_args.seed + 1,
                                 kr_args.resolved_threads());
        header.insert(header.end(),
                      {"var_simulate", "var_simulate_ci", "rel_deviation"});
        row.insert(row.end(),
                   {cell(st.var), cell(st.var_ci),
                    cell(std::abs(kr.variance - st.var) / st.var)});
        manifest.sample_budgets["simulate_samples"] = kr_sim_samples;
      }
      tools::CsvWriter csv(header);
      csv.add_row(row);
      const fs::path out = kr_args.out_dir() / "kostlan_kacrice.csv";
      csv.write(out);
      manifest.outputs = {out.filename().string()};
      manifest.stamp_finish();
      manifest.write(kr_args.out_dir() / "kostlan_kacrice_manifest.json");
      std::printf("wrote %s (variance %.4f)\n", out.string().c_str(), kr.variance);
      return kExitOk;
    }

    if (*crofton) {
      tools::RunManifest manifest =
          make_manifest("kostlan_crofton", argc, argv, cro_args.seed);
      manifest.config = {{"d", std::to_string(cro_d)},
                         {"samples", std::to_string(cro_samples)},
                         {"slices", std::to_string(cro_slices)},
                         {"seed", std::to_string(cro_args.seed)}};
      manifest.sample_budgets["samples"] = cro_samples;
      const ZeroStats st =
          crofton_length_stats(cro_d, cro_samples, cro_slices, cro_args.seed,
                               cro_args.resolved_threads());
      tools::CsvWriter csv({"d", "samples", "slices", "mean", "mean_ci", "var",
                            "var_ci", "expected_length", "seed"});
      csv.add_row({cell(cro_d), cell(cro_samples), cell(cro_slices),
                   cell(st.mean), cell(st.mean_ci), cell(st.var), cell(st.var_ci),
                   cell(std::numbers::pi * std::sqrt(static_cast<double>(cro_d))),
                   cell(st.seed)});
      const fs::path out = cro_args.out_dir() / "kostlan_crofton.csv";
      csv.write(out);
      manifest.outputs = {out.filename().string()};
      manifest.stamp_finish();
      manifest.write(cro_args.out_dir() / "kostlan_crofton_manifest.json");
      std::printf("wrote %s (mean %.4f)\n", out.string().c_str(), st.mean);
      return kExitOk;
    }

    if (*limit_check) {
      bool all_pass = true;
      std::printf("%-44s %12s %10s %s\n", "identity", "max_err", "tol", "status");
      for (const IdentityCheck& c : limit_identity_suite(lc_points, lc_lo, lc_hi)) {
        all_pass = all_pass && c.pass;
        std::printf("%-44s %12.3e %10.1e %s\n", c.name.c_str(), c.max_err, c.tol,
                    c.pass ? "pass" : "FAIL");
      }
      return all_pass ? kExitOk : kExitNonConvergence;
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitNonConvergence;
  }
  return kExitUsage;
}
