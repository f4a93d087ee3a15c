#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gns/models.hpp"
#include "gns/nested.hpp"
#include "gns/sampler.hpp"

namespace gns {

struct RunConfig {
  std::string model_key;
  std::size_t n_live = 500;
  double epsilon = 0.01;
  std::uint64_t seed = 0;
  SamplerMode sampler_mode = SamplerMode::geometric;
  int nt_multiplier = 20;
  std::filesystem::path output_root;
};

/// A bad invocation: carries the message and the process exit code
/// (0 for --help, nonzero otherwise).
class UsageError : public std::runtime_error {
 public:
  UsageError(std::string msg, int code) : std::runtime_error(std::move(msg)), code_(code) {}
  int exit_code() const { return code_; }

 private:
  int code_;
};

inline const char* to_string(SamplerMode m) {
  return m == SamplerMode::vanilla ? "vanilla" : "geometric";
}

/// Parse command-line flags into a RunConfig.
///   --model <key>    required; registry key
///   --out <root>     required; output path root
///   --nlive <n>      default 500 (>= 2)
///   --epsilon <e>    default 0.01 (0 < e < 1)
///   --seed <s>       default 0
///   --mode <m>       vanilla | geometric (default geometric)
///   --nt-mult <k>    default 20 (>= 1)
/// Unknown flags, missing required flags, or out-of-range values raise
/// UsageError with a nonzero exit code.
inline RunConfig parse_args(const std::vector<std::string>& args) {
  CLI::App app{"nested sampler for circular, toroidal and spherical parameters"};
  RunConfig cfg;
  std::string mode = "geometric";
  std::string out;
  app.add_option("--model", cfg.model_key, model_registry_hint)->required();
  app.add_option("--out", out, "output file root (writes <root>.txt/.paramnames/.stats/.json)")
      ->required();
  app.add_option("--nlive", cfg.n_live, "number of livepoints")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}));
  app.add_option("--epsilon", cfg.epsilon, "remaining-evidence stopping fraction");
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--mode", mode, "sampler mode")
      ->check(CLI::IsMember({"vanilla", "geometric"}));
  app.add_option("--nt-mult", cfg.nt_multiplier, "chain length multiplier (n_t = mult * N)")
      ->check(CLI::Range(1, 1000000));

  // CLI11 parses argv-style reversed vectors; feed it name-first order
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    throw UsageError(app.help(), 0);
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\nRun with --help for usage.",
                     e.get_exit_code() == 0 ? 1 : e.get_exit_code());
  }

  if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0))
    throw UsageError("--epsilon must lie strictly between 0 and 1", 1);
  if (!make_model(cfg.model_key))
    throw UsageError("unknown --model '" + cfg.model_key + "'; " + model_registry_hint, 1);
  cfg.sampler_mode = mode == "vanilla" ? SamplerMode::vanilla : SamplerMode::geometric;
  cfg.output_root = out;
  return cfg;
}

inline ProposalConfig proposal_config(const RunConfig& cfg) {
  ProposalConfig p;
  p.mode = cfg.sampler_mode;
  p.nt_multiplier = cfg.nt_multiplier;
  return p;
}

namespace detail {

inline void require_writable(const std::ofstream& os, const std::filesystem::path& p) {
  if (!os) throw std::runtime_error("cannot write " + p.string());
}

inline std::string fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

}  // namespace detail

/// JSON summary mirroring the .stats file, machine-readable.
inline nlohmann::json stats_json(const NSResult& result, const RunConfig& cfg) {
  return nlohmann::json{{"model", cfg.model_key},
                        {"logz_mean", result.logz_mean},
                        {"logz_err", result.logz_err},
                        {"n_iterations", result.n_iterations},
                        {"n_live", cfg.n_live},
                        {"seed", cfg.seed},
                        {"epsilon", cfg.epsilon},
                        {"mode", to_string(cfg.sampler_mode)},
                        {"nt_multiplier", cfg.nt_multiplier},
                        {"mean_acceptance", result.diagnostics.mean_acceptance},
                        {"rng", rng_algorithm_id}};
}

/// Emit the run artifacts:
///   <root>.txt         chain rows "weight  -2*loglike  theta_1 .. theta_N"
///                      (dead points in eviction order, then the final
///                      livepoints), the plain-text convention posterior
///                      plotters such as getdist consume;
///   <root>.paramnames  one "name  label" pair per parameter;
///   <root>.stats       plain-text summary, 6 significant digits;
///   <root>.json        the same summary, machine-readable.
/// Output bytes are a pure function of (seed, config, build).
inline void write_outputs(const NSResult& result, const Model& model,
                          const RunConfig& cfg) {
  namespace fs = std::filesystem;
  const fs::path root = cfg.output_root;
  if (root.has_parent_path()) fs::create_directories(root.parent_path());

  {
    fs::path p = root;
    p += ".txt";
    std::ofstream os(p);
    detail::require_writable(os, p);
    const auto row = [&](const DeadPoint& dp) {
      os << detail::fmt("%.10e", std::exp(dp.log_weight)) << ' '
         << detail::fmt("%.10e", -2.0 * dp.loglike);
      for (double t : dp.theta) os << ' ' << detail::fmt("%.10e", t);
      os << '\n';
    };
    for (const DeadPoint& dp : result.dead_points) row(dp);
    for (const DeadPoint& dp : result.final_livepoints) row(dp);
    detail::require_writable(os, p);
  }

  {
    fs::path p = root;
    p += ".paramnames";
    std::ofstream os(p);
    detail::require_writable(os, p);
    for (const auto& [name, label] : param_name_labels(model))
      os << name << '\t' << label << '\n';
    detail::require_writable(os, p);
  }

  {
    fs::path p = root;
    p += ".stats";
    std::ofstream os(p);
    detail::require_writable(os, p);
    os << "model " << cfg.model_key << '\n'
       << "logz_mean " << detail::fmt("%.6g", result.logz_mean) << '\n'
       << "logz_err " << detail::fmt("%.6g", result.logz_err) << '\n'
       << "n_iterations " << result.n_iterations << '\n'
       << "n_live " << cfg.n_live << '\n'
       << "seed " << cfg.seed << '\n'
       << "epsilon " << detail::fmt("%.6g", cfg.epsilon) << '\n'
       << "mode " << to_string(cfg.sampler_mode) << '\n'
       << "nt_multiplier " << cfg.nt_multiplier << '\n'
       << "mean_acceptance " << detail::fmt("%.6g", result.diagnostics.mean_acceptance)
       << '\n'
       << "rng " << rng_algorithm_id << '\n';
    detail::require_writable(os, p);
  }

  {
    fs::path p = root;
    p += ".json";
    std::ofstream os(p);
    detail::require_writable(os, p);
    os << stats_json(result, cfg).dump(2) << '\n';
    detail::require_writable(os, p);
  }
}

}  // namespace gns
