#include "linimm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>

namespace linimm {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;
const Rect kFdRect{-0.8, 1.2, -1.0, 0.6};
}  // namespace

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1.0);
    return v;
}

ExperimentConfig default_config(const std::string& experiment) {
    ExperimentConfig cfg;
    cfg.experiment = experiment;
    if (experiment == "pendulum") {
        cfg.lm.max_iters = 150;
        cfg.restart_rmse = 1e-2;
    } else if (experiment == "duffing_cons") {
        cfg.lm.max_iters = 150;
        cfg.restart_rmse = 1e-2;
    } else if (experiment == "vdp") {
        cfg.lm.max_iters = 150;
        cfg.restart_rmse = 5e-2;
    } else if (experiment == "duffing_fd") {
        cfg.lm.max_iters = 120;
        cfg.restart_rmse = 8e-2;
    } else {
        throw std::invalid_argument("default_config: unknown experiment '" + experiment + "'");
    }
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    j["experiment"] = c.experiment;
    j["seed"] = c.seed;
    j["lm"] = {{"mu_init", c.lm.mu_init},       {"mu_factor", c.lm.mu_factor},
               {"mu_max", c.lm.mu_max},         {"grad_tol", c.lm.grad_tol},
               {"step_tol", c.lm.step_tol},     {"max_iters", c.lm.max_iters}};
    j["ode"] = {{"rel_tol", c.ode.rel_tol}, {"abs_tol", c.ode.abs_tol}};
    j["restart_rmse"] = c.restart_rmse;
    j["pendulum"] = {{"e_min", c.pend_e_min},
                     {"e_max", c.pend_e_max},
                     {"orbits", c.pend_orbits},
                     {"samples", c.pend_samples},
                     {"test_orbits", c.pend_test_orbits}};
    j["duffing"] = {{"well_e_min", c.duff_well_e_min},   {"well_e_max", c.duff_well_e_max},
                    {"outer_e_min", c.duff_outer_e_min}, {"outer_e_max", c.duff_outer_e_max},
                    {"orbits_per_region", c.duff_orbits_per_region},
                    {"samples", c.duff_samples},
                    {"test_per_region", c.duff_test_per_region}};
    j["vdp"] = {{"D", c.vdp_D},           {"Omega", c.vdp_Omega}, {"horizon", c.vdp_horizon},
                {"r_min", c.vdp_r_min},   {"r_max", c.vdp_r_max}, {"trajs", c.vdp_trajs},
                {"samples", c.vdp_samples}, {"test_ics", c.vdp_test_ics}};
    j["duffing_fd"] = {{"c_l", c.fd_c_l},
                       {"omega_l", c.fd_omega_l},
                       {"spacing", c.fd_spacing},
                       {"samples_per_period", c.fd_samples_per_period},
                       {"label_periods", c.fd_label_periods},
                       {"test_ics", c.fd_test_ics}};
    j["eval"] = {{"periods", c.eval_periods},
                 {"fd_periods", c.fd_eval_periods},
                 {"grid", c.eval_grid}};
    return j;
}

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c = default_config(j.at("experiment").get<std::string>());
    c.seed = j.value("seed", c.seed);
    c.restart_rmse = j.value("restart_rmse", c.restart_rmse);
    if (j.contains("lm")) {
        const auto& l = j["lm"];
        c.lm.mu_init = l.value("mu_init", c.lm.mu_init);
        c.lm.mu_factor = l.value("mu_factor", c.lm.mu_factor);
        c.lm.mu_max = l.value("mu_max", c.lm.mu_max);
        c.lm.grad_tol = l.value("grad_tol", c.lm.grad_tol);
        c.lm.step_tol = l.value("step_tol", c.lm.step_tol);
        c.lm.max_iters = l.value("max_iters", c.lm.max_iters);
    }
    if (j.contains("ode")) {
        c.ode.rel_tol = j["ode"].value("rel_tol", c.ode.rel_tol);
        c.ode.abs_tol = j["ode"].value("abs_tol", c.ode.abs_tol);
    }
    if (j.contains("pendulum")) {
        const auto& p = j["pendulum"];
        c.pend_e_min = p.value("e_min", c.pend_e_min);
        c.pend_e_max = p.value("e_max", c.pend_e_max);
        c.pend_orbits = p.value("orbits", c.pend_orbits);
        c.pend_samples = p.value("samples", c.pend_samples);
        c.pend_test_orbits = p.value("test_orbits", c.pend_test_orbits);
    }
    if (j.contains("duffing")) {
        const auto& d = j["duffing"];
        c.duff_well_e_min = d.value("well_e_min", c.duff_well_e_min);
        c.duff_well_e_max = d.value("well_e_max", c.duff_well_e_max);
        c.duff_outer_e_min = d.value("outer_e_min", c.duff_outer_e_min);
        c.duff_outer_e_max = d.value("outer_e_max", c.duff_outer_e_max);
        c.duff_orbits_per_region = d.value("orbits_per_region", c.duff_orbits_per_region);
        c.duff_samples = d.value("samples", c.duff_samples);
        c.duff_test_per_region = d.value("test_per_region", c.duff_test_per_region);
    }
    if (j.contains("vdp")) {
        const auto& v = j["vdp"];
        c.vdp_D = v.value("D", c.vdp_D);
        c.vdp_Omega = v.value("Omega", c.vdp_Omega);
        c.vdp_horizon = v.value("horizon", c.vdp_horizon);
        c.vdp_r_min = v.value("r_min", c.vdp_r_min);
        c.vdp_r_max = v.value("r_max", c.vdp_r_max);
        c.vdp_trajs = v.value("trajs", c.vdp_trajs);
        c.vdp_samples = v.value("samples", c.vdp_samples);
        c.vdp_test_ics = v.value("test_ics", c.vdp_test_ics);
    }
    if (j.contains("duffing_fd")) {
        const auto& f = j["duffing_fd"];
        c.fd_c_l = f.value("c_l", c.fd_c_l);
        c.fd_omega_l = f.value("omega_l", c.fd_omega_l);
        c.fd_spacing = f.value("spacing", c.fd_spacing);
        c.fd_samples_per_period = f.value("samples_per_period", c.fd_samples_per_period);
        c.fd_label_periods = f.value("label_periods", c.fd_label_periods);
        c.fd_test_ics = f.value("test_ics", c.fd_test_ics);
    }
    if (j.contains("eval")) {
        const auto& e = j["eval"];
        c.eval_periods = e.value("periods", c.eval_periods);
        c.fd_eval_periods = e.value("fd_periods", c.fd_eval_periods);
        c.eval_grid = e.value("grid", c.eval_grid);
    }
    return c;
}

GenArtifacts generate(const ExperimentConfig& cfg) {
    GenArtifacts art;
    std::mt19937_64 rng(cfg.seed);
    art.manifest["experiment"] = cfg.experiment;
    art.manifest["seed"] = cfg.seed;
    art.manifest["config"] = config_to_json(cfg);

    if (cfg.experiment == "pendulum") {
        art.train = pendulum_pair(cfg.pend_e_min, cfg.pend_e_max, cfg.pend_orbits,
                                  cfg.pend_samples, cfg.ode);
        const double margin = 0.05 * (cfg.pend_e_max - cfg.pend_e_min);
        std::uniform_real_distribution<double> dist(cfg.pend_e_min + margin,
                                                    cfg.pend_e_max - margin);
        art.test_ics.resize(cfg.pend_test_orbits, 1);
        for (int i = 0; i < cfg.pend_test_orbits; ++i) art.test_ics(i, 0) = dist(rng);
        art.manifest["energy_range"] = {cfg.pend_e_min, cfg.pend_e_max};
    } else if (cfg.experiment == "duffing_cons") {
        const auto wells = linspace(cfg.duff_well_e_min, cfg.duff_well_e_max,
                                    cfg.duff_orbits_per_region);
        const auto outer = linspace(cfg.duff_outer_e_min, cfg.duff_outer_e_max,
                                    cfg.duff_orbits_per_region);
        art.train = duffing_pair(wells, outer, cfg.duff_samples, cfg.ode);

        art.test_ics.resize(3 * cfg.duff_test_per_region, 2);
        const double wm = 0.1 * (cfg.duff_well_e_max - cfg.duff_well_e_min);
        const double om = 0.1 * (cfg.duff_outer_e_max - cfg.duff_outer_e_min);
        std::uniform_real_distribution<double> wdist(cfg.duff_well_e_min + wm,
                                                     cfg.duff_well_e_max - wm);
        std::uniform_real_distribution<double> odist(cfg.duff_outer_e_min + om,
                                                     cfg.duff_outer_e_max - om);
        Eigen::Index row = 0;
        const double labels[3] = {1.0, -1.0, 0.0};
        for (double label : labels)
            for (int i = 0; i < cfg.duff_test_per_region; ++i) {
                art.test_ics(row, 0) = label == 0.0 ? odist(rng) : wdist(rng);
                art.test_ics(row, 1) = label;
                ++row;
            }
        art.manifest["well_energy_range"] = {cfg.duff_well_e_min, cfg.duff_well_e_max};
        art.manifest["outer_energy_range"] = {cfg.duff_outer_e_min, cfg.duff_outer_e_max};
    } else if (cfg.experiment == "vdp") {
        const VdpCycle cycle = vdp_limit_cycle(cfg.ode);
        std::uniform_real_distribution<double> rdist(cfg.vdp_r_min, cfg.vdp_r_max);
        std::uniform_real_distribution<double> thdist(0.0, kTwoPi);
        std::vector<Eigen::Vector2d> ics;
        for (int i = 0; i < cfg.vdp_trajs; ++i) {
            const double r = rdist(rng), th = thdist(rng);
            ics.push_back(from_polar(r, th));
        }
        VdpPairConfig pc;
        pc.D = cfg.vdp_D;
        pc.Omega = cfg.vdp_Omega;
        pc.horizon = cfg.vdp_horizon;
        pc.samples = cfg.vdp_samples;
        pc.ode = cfg.ode;
        art.train = vdp_pair(ics, cycle, pc);

        std::uniform_real_distribution<double> rtest(0.3, 3.0);
        art.test_ics.resize(cfg.vdp_test_ics, 2);
        for (int i = 0; i < cfg.vdp_test_ics; ++i)
            art.test_ics.row(i) = from_polar(rtest(rng), thdist(rng)).transpose();
        art.manifest["cycle_period"] = cycle.period;
        art.manifest["D"] = cfg.vdp_D;
        art.manifest["Omega"] = cfg.vdp_Omega;
    } else if (cfg.experiment == "duffing_fd") {
        const DynamicalSystem sys = make_system("duffing_fd");
        const double T = kTwoPi / sys.params.at("Omega");
        art.region = inflowing_region(sys, kFdRect, cfg.fd_spacing, T, 20, cfg.ode);
        const auto attractors = find_duffing_fd_attractors(sys, cfg.ode);

        DuffingFdPairConfig pc;
        pc.c_l = cfg.fd_c_l;
        pc.omega_l = cfg.fd_omega_l;
        pc.samples_per_period = cfg.fd_samples_per_period;
        pc.label_periods = cfg.fd_label_periods;
        pc.ode = cfg.ode;
        art.train = duffing_fd_pair(sys, art.region->all_points(), attractors, *art.region, pc);

        std::uniform_real_distribution<double> xdist(kFdRect.x_min, kFdRect.x_max);
        std::uniform_real_distribution<double> ydist(kFdRect.y_min, kFdRect.y_max);
        art.test_ics.resize(cfg.fd_test_ics, 2);
        for (int i = 0; i < cfg.fd_test_ics; ++i) {
            art.test_ics(i, 0) = xdist(rng);
            art.test_ics(i, 1) = ydist(rng);
        }
        art.manifest["rect"] = {kFdRect.x_min, kFdRect.x_max, kFdRect.y_min, kFdRect.y_max};
        art.manifest["grid_points"] = art.region->grid_points.size();
        art.manifest["extension_points"] = art.region->extension_points.size();
        art.manifest["region_closed"] = art.region->closed;
        art.manifest["attractors"] = {
            {{"fixed_point", {attractors[0].fixed_point[0], attractors[0].fixed_point[1]}},
             {"max_abs_x1", attractors[0].max_abs_x1}},
            {{"fixed_point", {attractors[1].fixed_point[0], attractors[1].fixed_point[1]}},
             {"max_abs_x1", attractors[1].max_abs_x1}}};
    } else {
        throw std::invalid_argument("generate: unknown experiment '" + cfg.experiment + "'");
    }
    art.manifest["train_rows"] = art.train.rows();
    return art;
}

namespace {

std::vector<std::string> x_columns(const std::string& experiment) {
    if (experiment == "pendulum") return {"r", "sin_th", "cos_th"};
    if (experiment == "duffing_cons") return {"x1", "x2", "x3"};
    if (experiment == "vdp") return {"x1", "x2"};
    return {"x1", "x2", "sin_x3", "cos_x3"};
}

std::vector<std::string> y_columns(const std::string& experiment) {
    if (experiment == "pendulum") return {"r_l", "sin_th_l", "cos_th_l"};
    if (experiment == "duffing_cons") return {"y1", "y2", "y3"};
    if (experiment == "vdp") return {"y1", "y2"};
    return {"y1", "y2", "sin_y3", "cos_y3", "y4"};
}

std::vector<std::string> test_columns(const std::string& experiment) {
    if (experiment == "pendulum") return {"E"};
    if (experiment == "duffing_cons") return {"E", "label"};
    return {"x1", "x2"};
}

}  // namespace

void save_dataset(const GenArtifacts& art, const std::string& dir) {
    const std::filesystem::path root(dir);
    std::filesystem::create_directories(root);
    const std::string exp = art.train.experiment;
    write_csv((root / "train_x.csv").string(), x_columns(exp), art.train.x_samples);
    write_csv((root / "train_y.csv").string(), y_columns(exp), art.train.y_samples);
    if (art.train.period_targets)
        write_csv((root / "periods.csv").string(), {"T"}, *art.train.period_targets);
    write_csv((root / "test_ics.csv").string(), test_columns(exp), art.test_ics);
    if (art.region) write_region_csv(*art.region, (root / "region.csv").string());
    write_json_file((root / "manifest.json").string(), art.manifest);
}

GenArtifacts load_dataset(const std::string& dir) {
    const std::filesystem::path root(dir);
    GenArtifacts art;
    art.manifest = read_json_file((root / "manifest.json").string());
    art.train.experiment = art.manifest.at("experiment").get<std::string>();
    art.train.x_samples = read_csv((root / "train_x.csv").string()).second;
    art.train.y_samples = read_csv((root / "train_y.csv").string()).second;
    if (std::filesystem::exists(root / "periods.csv"))
        art.train.period_targets = Vec(read_csv((root / "periods.csv").string()).second.col(0));
    art.test_ics = read_csv((root / "test_ics.csv").string()).second;
    if (std::filesystem::exists(root / "region.csv")) {
        RegionSet region;
        const auto rect = art.manifest.at("rect").get<std::vector<double>>();
        region.rect = Rect{rect[0], rect[1], rect[2], rect[3]};
        region.spacing = art.manifest.at("config")["duffing_fd"]["spacing"].get<double>();
        region.closed = art.manifest.at("region_closed").get<bool>();
        read_region_csv((root / "region.csv").string(), region);
        art.region = std::move(region);
    }
    return art;
}

TrainedBundle train_experiment(const ExperimentConfig& cfg, const PairedDataset& data) {
    TrainedBundle bundle;
    bundle.model.experiment = cfg.experiment;

    auto train_net = [&](const std::string& name, const Mat& inputs, const Mat& targets,
                         std::uint64_t seed) {
        const ColumnScaler in_sc = ColumnScaler::fit(inputs);
        const ColumnScaler out_sc = ColumnScaler::fit(targets);
        const Mat xs = in_sc.apply(inputs);
        const Mat ys = out_sc.apply(targets);

        auto run = [&](std::uint64_t s) {
            MlpParams net =
                init_mlp(static_cast<int>(xs.cols()), static_cast<int>(ys.cols()), s);
            auto [trained, report] = train(net, xs, ys, cfg.lm);
            const double rmse =
                std::sqrt(report.final_loss() / static_cast<double>(ys.size()));
            return std::tuple<MlpParams, LmReport, double>(std::move(trained), std::move(report),
                                                           rmse);
        };

        auto [net, report, rmse] = run(seed);
        if (rmse > cfg.restart_rmse) {
            auto [net2, report2, rmse2] = run(seed + 100);
            if (rmse2 < rmse) {
                net = std::move(net2);
                report = std::move(report2);
                rmse = rmse2;
                seed += 100;
            }
        }
        bundle.reports[name] = std::move(report);
        bundle.rmse[name] = rmse;
        ScaledMlp sm;
        sm.net = std::move(net);
        sm.in_scaler = in_sc;
        sm.out_scaler = out_sc;
        sm.seed = seed;
        return sm;
    };

    const Mat& X = data.x_samples;
    const Mat& Y = data.y_samples;
    const std::uint64_t base = cfg.seed * 1000;

    if (cfg.experiment == "pendulum") {
        bundle.model.encoding = Encoding::PolarSinCos;
        bundle.model.linear = LinearSystemSpec::harmonic(1.0);
        bundle.model.phi = train_net("phi", X, Y, base + 1);
        bundle.model.phi_inv = train_net("phi_inv", Y, X, base + 2);
        bundle.model.period_net = train_net("period", Y, *data.period_targets, base + 3);
    } else if (cfg.experiment == "duffing_cons") {
        bundle.model.encoding = Encoding::CartesianPlusLabel;
        bundle.model.linear = LinearSystemSpec::extended_harmonic(1.0);
        bundle.model.phi = train_net("phi", X, Y.leftCols(2), base + 1);
        bundle.model.phi_inv = train_net("phi_inv", Y, X.leftCols(2), base + 2);
        bundle.model.period_net = train_net("period", Y, *data.period_targets, base + 3);
    } else if (cfg.experiment == "vdp") {
        bundle.model.encoding = Encoding::PolarLCDeviation;
        bundle.model.linear = LinearSystemSpec::linear_limit_cycle(cfg.vdp_D, cfg.vdp_Omega);
        bundle.model.phi = train_net("phi", X, Y, base + 1);
        bundle.model.phi_inv = train_net("phi_inv", Y, X, base + 2);
    } else if (cfg.experiment == "duffing_fd") {
        bundle.model.encoding = Encoding::DampedDeviation;
        bundle.model.linear = LinearSystemSpec::damped_extended(cfg.fd_c_l, cfg.fd_omega_l, 1.3);
        Mat phi_targets(Y.rows(), 3);
        phi_targets << Y.col(0), Y.col(1), Y.col(4);
        bundle.model.phi = train_net("phi", X, phi_targets, base + 1);
        bundle.model.phi_inv = train_net("phi_inv", Y, X.leftCols(2), base + 2);
    } else {
        throw std::invalid_argument("train_experiment: unknown experiment '" + cfg.experiment + "'");
    }
    return bundle;
}

namespace {

Trajectory project_planar(const Trajectory& traj) {
    Trajectory out;
    out.system_name = traj.system_name;
    out.times = traj.times;
    for (const auto& s : traj.states) out.states.push_back(s.head<2>());
    return out;
}

EvalCase eval_case_common(Trajectory truth, Trajectory recon) {
    EvalCase c;
    c.truth = std::move(truth);
    c.recon = std::move(recon);
    c.rel_err = relative_error(c.truth, c.recon);
    c.max_rel_err = *std::max_element(c.rel_err.begin(), c.rel_err.end());
    return c;
}

}  // namespace

EvalReport evaluate(const ExperimentConfig& cfg, const ImmersionModel& model, const Mat& test_ics) {
    EvalReport report;

    if (cfg.experiment == "pendulum") {
        const DynamicalSystem sys = make_system("pendulum");
        for (Eigen::Index i = 0; i < test_ics.rows(); ++i) {
            const double E = test_ics(i, 0);
            const double T = pendulum_period(E, cfg.ode);
            Vec x0(2);
            x0 << std::acos(-E), 0.0;
            const double horizon = cfg.eval_periods * T;
            const Trajectory truth =
                integrate(sys, x0, 0.0, horizon, cfg.ode, horizon / cfg.eval_grid);
            const auto [r0, th0] = pendulum_phi(model, x0.head<2>());
            const Trajectory recon = reconstruct_pendulum(model, r0, th0, truth.times);
            EvalCase c = eval_case_common(truth, recon);
            c.ic = test_ics.row(i).transpose();
            report.cases.push_back(std::move(c));
        }
    } else if (cfg.experiment == "duffing_cons") {
        const DynamicalSystem sys = make_system("duffing_cons");
        for (Eigen::Index i = 0; i < test_ics.rows(); ++i) {
            const double E = test_ics(i, 0), label = test_ics(i, 1);
            const double T = duffing_period(E, cfg.ode);
            const Eigen::Vector2d start = duffing_orbit_start(E, label);
            const double horizon = cfg.eval_periods * T;
            const Trajectory truth = integrate(sys, Vec(start), 0.0, horizon, cfg.ode,
                                               horizon / cfg.eval_grid);
            const Eigen::Vector3d y0 = duffing_phi(model, start);
            const Trajectory recon = reconstruct_duffing(model, y0, truth.times);
            EvalCase c = eval_case_common(truth, project_planar(recon));
            c.ic = test_ics.row(i).transpose();
            report.cases.push_back(std::move(c));
        }
    } else if (cfg.experiment == "vdp") {
        const DynamicalSystem sys = make_system("vdp");
        for (Eigen::Index i = 0; i < test_ics.rows(); ++i) {
            const Eigen::Vector2d x0 = test_ics.row(i).transpose();
            const Trajectory truth = integrate(sys, Vec(x0), 0.0, cfg.vdp_horizon, cfg.ode,
                                               cfg.vdp_horizon / cfg.eval_grid);
            const auto [y1, th0] = vdp_phi(model, x0);
            const Trajectory recon = reconstruct_vdp(model, y1, th0, truth.times);
            EvalCase c = eval_case_common(truth, recon);
            c.ic = test_ics.row(i).transpose();
            report.cases.push_back(std::move(c));
        }
    } else if (cfg.experiment == "duffing_fd") {
        const DynamicalSystem sys = make_system("duffing_fd");
        const auto attractors = find_duffing_fd_attractors(sys, cfg.ode);
        const double T = kTwoPi / sys.params.at("Omega");
        for (Eigen::Index i = 0; i < test_ics.rows(); ++i) {
            const Eigen::Vector2d x0 = test_ics.row(i).transpose();
            Vec x0f(3);
            x0f << x0[0], x0[1], 0.0;
            const double horizon = cfg.fd_eval_periods * T;
            const Trajectory truth =
                integrate(sys, x0f, 0.0, horizon, cfg.ode, horizon / cfg.eval_grid);
            const Eigen::Vector4d y0 = duffing_fd_phi(model, x0);
            const Trajectory recon = reconstruct_duffing_fd(model, y0, truth.times);
            EvalCase c = eval_case_common(project_planar(truth), project_planar(recon));
            c.ic = test_ics.row(i).transpose();
            c.label_phi = static_cast<int>(y0[3]);
            c.label_truth = classify_basin(sys, attractors, x0, cfg.fd_label_periods, cfg.ode);
            if (c.label_phi != c.label_truth) report.labels_match = false;
            report.cases.push_back(std::move(c));
        }
    } else {
        throw std::invalid_argument("evaluate: unknown experiment '" + cfg.experiment + "'");
    }

    std::vector<double> maxima;
    for (const auto& c : report.cases) maxima.push_back(c.max_rel_err);
    report.max_err = *std::max_element(maxima.begin(), maxima.end());
    std::sort(maxima.begin(), maxima.end());
    const std::size_t idx =
        std::min(maxima.size() - 1,
                 static_cast<std::size_t>(std::ceil(0.9 * maxima.size())) - 1);
    report.p90_err = maxima[idx];
    return report;
}

void write_eval(const EvalReport& report, const std::string& dir) {
    const std::filesystem::path root(dir);
    std::filesystem::create_directories(root);
    nlohmann::json summary;
    summary["max_rel_err"] = report.max_err;
    summary["p90_rel_err"] = report.p90_err;
    summary["labels_match"] = report.labels_match;
    nlohmann::json cases = nlohmann::json::array();
    for (std::size_t i = 0; i < report.cases.size(); ++i) {
        const auto& c = report.cases[i];
        const std::string stem = "case_" + std::to_string(i);
        write_trajectory_csv(c.truth, (root / (stem + "_truth.csv")).string());
        write_trajectory_csv(c.recon, (root / (stem + "_recon.csv")).string());
        Mat err(c.rel_err.size(), 2);
        for (std::size_t k = 0; k < c.rel_err.size(); ++k) {
            err(static_cast<Eigen::Index>(k), 0) = c.truth.times[k];
            err(static_cast<Eigen::Index>(k), 1) = c.rel_err[k];
        }
        write_csv((root / (stem + "_err.csv")).string(), {"t", "rel_err"}, err);
        nlohmann::json jc;
        jc["max_rel_err"] = c.max_rel_err;
        std::vector<double> ic(c.ic.data(), c.ic.data() + c.ic.size());
        jc["ic"] = ic;
        if (c.label_truth >= 0) {
            jc["label_truth"] = c.label_truth;
            jc["label_phi"] = c.label_phi;
        }
        cases.push_back(jc);
    }
    summary["cases"] = cases;
    write_json_file((root / "summary.json").string(), summary);
}

}  // namespace linimm
