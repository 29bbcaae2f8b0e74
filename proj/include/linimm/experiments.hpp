#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "linimm/immersion.hpp"
#include "linimm/io.hpp"

namespace linimm {

/// Everything a single experiment run needs: dataset ranges and sizes, the
/// optimizer budget, integrator tolerances, and the master seed. Defaults
/// reproduce the shipped experiments; JSON configs override field by field.
struct ExperimentConfig {
    std::string experiment;
    std::uint64_t seed = 1;
    LmConfig lm;
    IntegratorConfig ode;
    double restart_rmse = 1e-2;  // scaled-unit RMSE triggering the single seeded restart

    // pendulum
    double pend_e_min = -0.9, pend_e_max = 0.9;
    int pend_orbits = 60, pend_samples = 200, pend_test_orbits = 10;

    // conservative duffing
    double duff_well_e_min = -0.24, duff_well_e_max = -0.02;
    double duff_outer_e_min = 0.02, duff_outer_e_max = 1.0;
    int duff_orbits_per_region = 40, duff_samples = 200, duff_test_per_region = 3;

    // van der pol
    double vdp_D = 1.06, vdp_Omega = 0.943, vdp_horizon = 20.0;
    double vdp_r_min = 0.25, vdp_r_max = 3.25;
    int vdp_trajs = 80, vdp_samples = 300, vdp_test_ics = 20;

    // forced-damped duffing
    double fd_c_l = 0.02, fd_omega_l = 1.3, fd_spacing = 0.05;
    int fd_samples_per_period = 17, fd_label_periods = 40, fd_test_ics = 20;

    // evaluation
    double eval_periods = 3.0;     // pendulum/duffing horizon in orbit periods
    double fd_eval_periods = 5.0;  // forcing periods
    int eval_grid = 400;           // samples per evaluation trajectory
};

ExperimentConfig default_config(const std::string& experiment);
ExperimentConfig config_from_json(const nlohmann::json& overrides);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct GenArtifacts {
    PairedDataset train;
    Mat test_ics;  // pendulum: (E); duffing: (E, label); vdp/fd: (x1, x2)
    nlohmann::json manifest;
    std::optional<RegionSet> region;  // duffing_fd only
};

GenArtifacts generate(const ExperimentConfig& cfg);
void save_dataset(const GenArtifacts& artifacts, const std::string& dir);
GenArtifacts load_dataset(const std::string& dir);

struct TrainedBundle {
    ImmersionModel model;
    std::map<std::string, LmReport> reports;  // per network
    std::map<std::string, double> rmse;       // scaled-unit training RMSE per network
};

/// Trains phi, phi_inv and (where applicable) the period network with one
/// seeded restart when a net misses the configured RMSE threshold.
TrainedBundle train_experiment(const ExperimentConfig& cfg, const PairedDataset& data);

struct EvalCase {
    Vec ic;            // test-ic row as generated
    Trajectory truth;  // planar projection
    Trajectory recon;  // planar projection
    std::vector<double> rel_err;
    double max_rel_err = 0.0;
    int label_truth = -1;  // duffing_fd basin labels
    int label_phi = -1;
};

struct EvalReport {
    std::vector<EvalCase> cases;
    double max_err = 0.0;
    double p90_err = 0.0;
    bool labels_match = true;
};

EvalReport evaluate(const ExperimentConfig& cfg, const ImmersionModel& model, const Mat& test_ics);

/// Truth/recon/error CSVs plus a summary for each test case.
void write_eval(const EvalReport& report, const std::string& dir);

std::vector<double> linspace(double a, double b, int n);

}  // namespace linimm
