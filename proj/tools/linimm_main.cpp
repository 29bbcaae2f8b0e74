#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "linimm/analytic.hpp"
#include "linimm/experiments.hpp"

using namespace linimm;

namespace {

ExperimentConfig resolve_config(const std::string& experiment, const std::string& config_path,
                                std::uint64_t seed, bool seed_given) {
    nlohmann::json j;
    if (!config_path.empty()) j = read_json_file(config_path);
    if (!experiment.empty()) j["experiment"] = experiment;
    if (!j.contains("experiment"))
        throw std::runtime_error("no experiment given (use --experiment or a config file)");
    ExperimentConfig cfg = config_from_json(j);
    if (seed_given) cfg.seed = seed;
    return cfg;
}

int cmd_gen(const ExperimentConfig& cfg, const std::string& out) {
    const GenArtifacts art = generate(cfg);
    save_dataset(art, out);
    std::cout << "wrote dataset for '" << cfg.experiment << "' (" << art.train.rows()
              << " rows) to " << out << "\n";
    return 0;
}

int cmd_train(const ExperimentConfig& cfg, const std::string& data_dir, const std::string& out) {
    const GenArtifacts art = load_dataset(data_dir);
    if (art.train.experiment != cfg.experiment)
        throw std::runtime_error("dataset experiment '" + art.train.experiment +
                                 "' does not match config '" + cfg.experiment + "'");
    const TrainedBundle bundle = train_experiment(cfg, art.train);
    save_model(bundle.model, out);

    nlohmann::json report;
    for (const auto& [name, rep] : bundle.reports) {
        write_training_log_csv(rep, (std::filesystem::path(out) / ("log_" + name + ".csv")).string());
        report[name] = {{"iterations", rep.iterations},
                        {"final_loss", rep.final_loss()},
                        {"rmse_scaled", bundle.rmse.at(name)},
                        {"terminal_reason", to_string(rep.terminal_reason)}};
    }
    write_json_file((std::filesystem::path(out) / "training_report.json").string(), report);
    std::cout << report.dump(2) << "\n";
    return 0;
}

int cmd_eval(const ExperimentConfig& cfg, const std::string& model_dir,
             const std::string& data_dir, const std::string& out) {
    const ImmersionModel model = load_model(model_dir);
    const GenArtifacts art = load_dataset(data_dir);
    const EvalReport report = evaluate(cfg, model, art.test_ics);
    write_eval(report, out);
    std::cout << "max relative error: " << report.max_err
              << "  p90: " << report.p90_err;
    if (cfg.experiment == "duffing_fd")
        std::cout << "  labels_match: " << (report.labels_match ? "yes" : "no");
    std::cout << "\n";
    return 0;
}

int cmd_reconstruct(const std::string& model_dir, const std::vector<double>& ic, double t1,
                    int samples, bool ablate, const std::string& out) {
    const ImmersionModel model = load_model(model_dir);
    const std::filesystem::path root(out);
    std::filesystem::create_directories(root);

    Trajectory truth, recon;
    if (model.experiment == "pendulum") {
        const DynamicalSystem sys = make_system("pendulum");
        Vec x0(2);
        x0 << ic.at(0), ic.at(1);
        truth = integrate(sys, x0, 0.0, t1, {}, t1 / samples);
        const auto [r0, th0] = pendulum_phi(model, x0.head<2>());
        PendulumReconOpts opts;
        opts.ablate_period = ablate;
        recon = reconstruct_pendulum(model, r0, th0, truth.times, opts);
    } else if (model.experiment == "duffing_cons") {
        const DynamicalSystem sys = make_system("duffing_cons");
        Vec x0(2);
        x0 << ic.at(0), ic.at(1);
        truth = integrate(sys, x0, 0.0, t1, {}, t1 / samples);
        recon = reconstruct_duffing(model, duffing_phi(model, x0.head<2>()), truth.times);
    } else if (model.experiment == "vdp") {
        const DynamicalSystem sys = make_system("vdp");
        Vec x0(2);
        x0 << ic.at(0), ic.at(1);
        truth = integrate(sys, x0, 0.0, t1, {}, t1 / samples);
        const auto [y1, th0] = vdp_phi(model, x0.head<2>());
        recon = reconstruct_vdp(model, y1, th0, truth.times);
    } else if (model.experiment == "duffing_fd") {
        const DynamicalSystem sys = make_system("duffing_fd");
        Vec x0(3);
        x0 << ic.at(0), ic.at(1), 0.0;
        truth = integrate(sys, x0, 0.0, t1, {}, t1 / samples);
        recon = reconstruct_duffing_fd(model, duffing_fd_phi(model, x0.head<2>()), truth.times);
    } else {
        throw std::runtime_error("reconstruct: unknown experiment '" + model.experiment + "'");
    }

    write_trajectory_csv(truth, (root / "truth.csv").string());
    write_trajectory_csv(recon, (root / "recon.csv").string());
    Trajectory truth2 = truth, recon2 = recon;
    if (truth.dim() != recon.dim()) {
        // compare the planar coordinates when state layouts differ
        for (auto& s : truth2.states) s = s.head<2>().eval();
        for (auto& s : recon2.states) s = s.head<2>().eval();
    }
    const auto err = relative_error(truth2, recon2);
    Mat err_tab(err.size(), 2);
    for (std::size_t k = 0; k < err.size(); ++k) {
        err_tab(static_cast<Eigen::Index>(k), 0) = truth.times[k];
        err_tab(static_cast<Eigen::Index>(k), 1) = err[k];
    }
    write_csv((root / "err.csv").string(), {"t", "rel_err"}, err_tab);
    std::cout << "max relative error: "
              << *std::max_element(err.begin(), err.end()) << "\n";
    return 0;
}

int cmd_eigenfunctions(const std::string& model_dir, int n, const std::string& out) {
    const ImmersionModel model = load_model(model_dir);
    double extent = 2.4;
    if (model.experiment == "duffing_cons") extent = 1.7;
    Mat grid(n * n, 2);
    Eigen::Index row = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            grid(row, 0) = -extent + 2.0 * extent * i / (n - 1.0);
            grid(row, 1) = -extent + 2.0 * extent * j / (n - 1.0);
            ++row;
        }
    const KoopmanEigenfield field = koopman_eigenfield(model, grid);
    write_eigenfield_csv(grid, field, out);
    std::cout << "wrote " << n * n << " grid points to " << out << "\n";
    return 0;
}

int cmd_floquet(const std::string& system, const std::string& out) {
    nlohmann::json j;
    if (system == "vdp") {
        const DynamicalSystem sys = make_system("vdp");
        Vec ic(2);
        ic << 2.0, 0.0;
        const PeriodEstimate period = detect_period(sys, ic, Section{1, 0.0, -1}, 60.0, 60.0);
        const Trajectory settle = integrate(sys, ic, 0.0, 60.0, {}, 60.0);
        const FloquetResult res = floquet(sys, settle.states.back(), period.period);
        j = floquet_to_json(res);
        j["system"] = "vdp";
        j["detected_period"] = period.period;
        j["D"] = res.matched_decay_rate;
    } else if (system == "duffing_fd") {
        const DynamicalSystem sys = make_system("duffing_fd");
        const auto attractors = find_duffing_fd_attractors(sys);
        j["system"] = "duffing_fd";
        j["low"] = floquet_to_json(attractors[0].floquet);
        j["high"] = floquet_to_json(attractors[1].floquet);
    } else {
        throw std::runtime_error("floquet: supported systems are vdp and duffing_fd");
    }
    if (!out.empty()) write_json_file(out, j);
    std::cout << j.dump(2) << "\n";
    return 0;
}

int cmd_region(double spacing, const std::string& out) {
    const DynamicalSystem sys = make_system("duffing_fd");
    const double T = 2.0 * M_PI / sys.params.at("Omega");
    const Rect rect{-0.8, 1.2, -1.0, 0.6};
    const RegionSet region = inflowing_region(sys, rect, spacing, T);
    if (!out.empty()) write_region_csv(region, out);
    std::cout << "rect [" << rect.x_min << "," << rect.x_max << "]x[" << rect.y_min << ","
              << rect.y_max << "]  grid points: " << region.grid_points.size()
              << "  extension points: " << region.extension_points.size()
              << "  closed: " << (region.closed ? "yes" : "no") << "\n";
    return 0;
}

int cmd_verify_analytic(const std::string& case_name, double tol) {
    std::vector<AnalyticReport> reports;
    if (case_name == "harmonic" || case_name == "all")
        reports.push_back(verify_harmonic_family_case(tol == 0.0 ? 1e-8 : tol));
    if (case_name == "limit_cycle" || case_name == "all")
        reports.push_back(verify_limit_cycle_case(tol == 0.0 ? 1e-6 : tol));
    if (case_name == "coexisting" || case_name == "all")
        reports.push_back(verify_coexisting_case(-0.5, -2.0, tol == 0.0 ? 1e-6 : tol));
    if (reports.empty()) throw std::runtime_error("unknown case '" + case_name + "'");

    bool all_pass = true;
    nlohmann::json out = nlohmann::json::array();
    for (const auto& r : reports) {
        out.push_back({{"case", r.case_name},
                       {"max_error", r.max_error},
                       {"pass", r.pass},
                       {"details", r.details}});
        all_pass = all_pass && r.pass;
    }
    std::cout << out.dump(2) << "\n";
    return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Global linear immersions of nonlinear dynamics"};
    app.require_subcommand(1);

    std::string experiment, config_path, out, data_dir, model_dir, system_name, case_name = "all";
    std::uint64_t seed = 1;
    bool ablate = false;
    double t1 = 20.0, spacing = 0.1, tol = 0.0;
    int samples = 400, grid_n = 101;
    std::vector<double> ic;

    auto* gen = app.add_subcommand("gen", "generate a paired training dataset");
    gen->add_option("--experiment", experiment);
    gen->add_option("--config", config_path);
    auto* gen_seed = gen->add_option("--seed", seed);
    gen->add_option("--out", out)->required();

    auto* train = app.add_subcommand("train", "train the immersion networks");
    train->add_option("--experiment", experiment);
    train->add_option("--config", config_path);
    auto* train_seed = train->add_option("--seed", seed);
    train->add_option("--data", data_dir)->required();
    train->add_option("--out", out)->required();

    auto* eval = app.add_subcommand("eval", "evaluate a trained model on the test set");
    eval->add_option("--experiment", experiment);
    eval->add_option("--config", config_path);
    auto* eval_seed = eval->add_option("--seed", seed);
    eval->add_option("--model", model_dir)->required();
    eval->add_option("--data", data_dir)->required();
    eval->add_option("--out", out)->required();

    auto* rec = app.add_subcommand("reconstruct", "reconstruct one trajectory from a model");
    rec->add_option("--model", model_dir)->required();
    rec->add_option("--ic", ic)->required()->delimiter(',');
    rec->add_option("--t1", t1);
    rec->add_option("--samples", samples);
    rec->add_flag("--ablate-period", ablate);
    rec->add_option("--out", out)->required();

    auto* eig = app.add_subcommand("eigenfunctions", "Koopman eigenfunction fields on a grid");
    eig->add_option("--model", model_dir)->required();
    eig->add_option("--grid", grid_n);
    eig->add_option("--out", out)->required();

    auto* flo = app.add_subcommand("floquet", "period and Floquet multipliers");
    flo->add_option("--system", system_name)->required();
    flo->add_option("--out", out);

    auto* reg = app.add_subcommand("region", "inflowing invariant region of the forced Duffing");
    reg->add_option("--spacing", spacing);
    reg->add_option("--out", out);

    auto* ver = app.add_subcommand("verify-analytic", "closed-form immersion verifiers");
    ver->add_option("--case", case_name);
    ver->add_option("--tol", tol);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_gen(resolve_config(experiment, config_path, seed, !gen_seed->empty()), out);
        if (train->parsed())
            return cmd_train(resolve_config(experiment, config_path, seed, !train_seed->empty()),
                             data_dir, out);
        if (eval->parsed()) {
            auto cfg = resolve_config(experiment.empty() ? load_model(model_dir).experiment
                                                         : experiment,
                                      config_path, seed, !eval_seed->empty());
            return cmd_eval(cfg, model_dir, data_dir, out);
        }
        if (rec->parsed()) return cmd_reconstruct(model_dir, ic, t1, samples, ablate, out);
        if (eig->parsed()) return cmd_eigenfunctions(model_dir, grid_n, out);
        if (flo->parsed()) return cmd_floquet(system_name, out);
        if (reg->parsed()) return cmd_region(spacing, out);
        if (ver->parsed()) return cmd_verify_analytic(case_name, tol);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
