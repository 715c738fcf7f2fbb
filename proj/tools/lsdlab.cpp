// lsdlab: density specs in, analysis / verification / flow reports out.
//
//   lsdlab analyze spec.json            full functional report (JSON)
//   lsdlab verify  spec.json | dir      inequality suite (JSON, exit 1 on fail)
//   lsdlab flow    spec.json            t -> diagnostics (CSV)

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lsdlab/bounds.hpp"
#include "lsdlab/spec_io.hpp"

namespace {

struct CommonFlags {
  double tol = 1e-9;
  int gh_order = 128;
  int gh_order_nd = 64;
  double time_split = 0.05;
  double time_max = 12.0;
  long mc_samples = 1000000;
  std::uint64_t seed = 0x1d5eedULL;
  int threads = 1;

  lsdlab::CheckConfig to_config() const {
    lsdlab::CheckConfig cfg;
    cfg.quad.adaptive_tol = tol;
    cfg.quad.gh_order = gh_order;
    cfg.quad.gh_order_nd = gh_order_nd;
    cfg.quad.mc_samples = mc_samples;
    cfg.quad.mc_seed = seed;
    cfg.quad.threads = threads;
    cfg.time.t_split = time_split;
    cfg.time.t_max = time_max;
    cfg.time.tol = tol;
    cfg.quad.validate();
    cfg.time.validate();
    return cfg;
  }
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--tol", flags.tol, "adaptive quadrature tolerance");
  cmd->add_option("--gh-order", flags.gh_order, "Gauss-Hermite order (1-D)");
  cmd->add_option("--gh-order-nd", flags.gh_order_nd,
                  "per-axis Gauss-Hermite order (2-D tensor)");
  cmd->add_option("--time-split", flags.time_split,
                  "switch point between the Hessian-form and MMSE-form "
                  "integrands");
  cmd->add_option("--time-max", flags.time_max,
                  "upper end of the time quadrature");
  cmd->add_option("--mc-samples", flags.mc_samples,
                  "Monte Carlo samples (dimension >= 3)");
  cmd->add_option("--seed", flags.seed, "Monte Carlo seed");
  cmd->add_option("--threads", flags.threads, "worker cap for quadrature");
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text << "\n";
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw lsdlab::spec_error("cannot open output file: " + out_path);
  out << text << "\n";
}

int run_analyze(const std::string& spec_path, const std::string& out_path,
                const CommonFlags& flags) {
  const lsdlab::LoadedSpec spec = lsdlab::load_density_spec(spec_path);
  emit(lsdlab::analyze_report_json(spec.density, spec.hash, flags.to_config()),
       out_path);
  return 0;
}

int run_verify(const std::string& spec_path, const std::string& out_path,
               const std::vector<double>& eps, const CommonFlags& flags) {
  lsdlab::CheckConfig cfg = flags.to_config();
  if (!eps.empty()) cfg.cov_eps = eps;

  namespace fs = std::filesystem;
  std::vector<std::string> spec_files;
  if (fs::is_directory(spec_path)) {
    for (const auto& entry : fs::directory_iterator(spec_path))
      if (entry.is_regular_file() && entry.path().extension() == ".json")
        spec_files.push_back(entry.path().string());
    std::sort(spec_files.begin(), spec_files.end());
    if (spec_files.empty())
      throw lsdlab::spec_error("no .json specs found in " + spec_path);
  } else {
    spec_files.push_back(spec_path);
  }

  const bool batch = spec_files.size() > 1 || fs::is_directory(spec_path);
  if (batch && !out_path.empty()) fs::create_directories(out_path);

  bool failed = false;
  for (const auto& file : spec_files) {
    const lsdlab::LoadedSpec spec = lsdlab::load_density_spec(file);
    const std::string report =
        lsdlab::verify_report_json(spec.density, spec.hash, cfg);
    const bool this_failed =
        report.find("\"verdict\":\"fail\"") != std::string::npos;
    failed = failed || this_failed;
    if (batch) {
      if (!out_path.empty()) {
        const std::string dest =
            (fs::path(out_path) / fs::path(file).filename())
                .replace_extension(".verify.json")
                .string();
        emit(report, dest);
      }
      std::cerr << (this_failed ? "FAIL " : "ok   ") << file << "\n";
      if (out_path.empty()) std::cout << report << "\n";
    } else {
      emit(report, out_path);
    }
  }
  return failed ? 1 : 0;
}

int run_flow(const std::string& spec_path, const std::string& out_path,
             double t_to, int steps, const CommonFlags& flags) {
  if (steps < 2) throw lsdlab::spec_error("--steps must be >= 2");
  if (!(t_to > 0.0)) throw lsdlab::spec_error("--t-to must be > 0");
  const lsdlab::LoadedSpec spec = lsdlab::load_density_spec(spec_path);
  std::vector<double> ts(steps);
  for (int i = 0; i < steps; ++i) ts[i] = t_to * i / (steps - 1);
  emit(lsdlab::flow_csv(spec.density, ts, flags.to_config()), out_path);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"log-Sobolev deficit laboratory"};
  app.require_subcommand(1);

  CommonFlags flags;
  std::string spec_path, out_path;
  std::vector<double> eps;
  double t_to = 8.0;
  int steps = 33;

  CLI::App* analyze = app.add_subcommand("analyze", "full functional report");
  analyze->add_option("spec", spec_path, "DensitySpec JSON path")->required();
  analyze->add_option("--out", out_path, "output file (default stdout)");
  add_common_flags(analyze, flags);

  CLI::App* verify = app.add_subcommand("verify", "run the inequality suite");
  verify->add_option("spec", spec_path, "DensitySpec JSON path or directory")
      ->required();
  verify->add_option("--out", out_path,
                     "output file (or directory for spec directories)");
  verify->add_option("--eps", eps, "epsilon values for COV_EPS");
  add_common_flags(verify, flags);

  CLI::App* flow = app.add_subcommand("flow", "flow diagnostics as CSV");
  flow->add_option("spec", spec_path, "DensitySpec JSON path")->required();
  flow->add_option("--out", out_path, "output file (default stdout)");
  flow->add_option("--t-to", t_to, "largest time on the grid");
  flow->add_option("--steps", steps, "number of grid points");
  add_common_flags(flow, flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(analyze))
      return run_analyze(spec_path, out_path, flags);
    if (app.got_subcommand(verify))
      return run_verify(spec_path, out_path, eps, flags);
    return run_flow(spec_path, out_path, t_to, steps, flags);
  } catch (const lsdlab::spec_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const lsdlab::precondition_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}
