#pragma once

#include <string>
#include <vector>

#include "roughheat/config.hpp"

namespace roughheat::experiments {

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct RunResult {
    bool pass = true;
    std::vector<CheckLine> checks;
    std::vector<std::string> artifacts;

    void add(const std::string& name, bool ok, const std::string& detail);
};

const std::vector<std::string>& experiment_names();
bool is_experiment(const std::string& name);

/// Dispatch by name; out_dir may be empty to skip artifact files.
RunResult run_experiment(const std::string& name, const config::Config& cfg,
                         const std::string& out_dir, const std::vector<long>& seeds);

RunResult kernel_scaling(const config::Config& cfg, const std::string& out_dir);
RunResult norm_equivalence(const config::Config& cfg, const std::string& out_dir,
                           const std::vector<long>& seeds);
RunResult heat_decay(const config::Config& cfg, const std::string& out_dir);
RunResult renorm_convergence(const config::Config& cfg, const std::string& out_dir,
                             const std::vector<long>& seeds);
RunResult commutator_uniformity(const config::Config& cfg, const std::string& out_dir,
                                const std::vector<long>& seeds);
RunResult linear_assemble(const config::Config& cfg, const std::string& out_dir,
                          const std::vector<long>& seeds);
RunResult quasilinear_contraction(const config::Config& cfg, const std::string& out_dir,
                                  const std::vector<long>& seeds);
RunResult stability(const config::Config& cfg, const std::string& out_dir,
                    const std::vector<long>& seeds);
RunResult boundary_correction(const config::Config& cfg, const std::string& out_dir);

}  // namespace roughheat::experiments
