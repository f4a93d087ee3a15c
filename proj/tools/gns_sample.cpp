// Nested-sampling CLI: pick a registry model, run, and emit
// getdist-style chain + stats files.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "gns/chain_io.hpp"
#include "gns/grid_evidence.hpp"
#include "gns/models.hpp"
#include "gns/nested.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  gns::RunConfig cfg;
  try {
    cfg = gns::parse_args(args);
  } catch (const gns::UsageError& e) {
    std::fprintf(e.exit_code() == 0 ? stdout : stderr, "%s\n", e.what());
    return e.exit_code();
  }

  try {
    const gns::Model model = *gns::make_model(cfg.model_key);
    const gns::NSResult result =
        gns::run(model, cfg.n_live, gns::proposal_config(cfg), cfg.epsilon, cfg.seed);
    gns::write_outputs(result, model, cfg);
    std::printf("%s: logz = %.6g +/- %.6g (%zu iterations, %zu livepoints, seed %llu)\n",
                cfg.model_key.c_str(), result.logz_mean, result.logz_err,
                result.n_iterations, cfg.n_live,
                static_cast<unsigned long long>(cfg.seed));
    return 0;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
