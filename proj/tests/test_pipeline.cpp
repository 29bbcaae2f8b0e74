#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "linimm/experiments.hpp"

using namespace linimm;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    explicit TempDir(const std::string& name)
        : path(std::filesystem::temp_directory_path() / name) {
        std::filesystem::remove_all(path);
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("dataset generation is byte-identical under a fixed seed") {
    ExperimentConfig cfg = default_config("pendulum");
    cfg.seed = 7;
    cfg.pend_orbits = 6;
    cfg.pend_samples = 24;
    cfg.pend_test_orbits = 3;

    TempDir a("linimm_gen_a"), b("linimm_gen_b");
    save_dataset(generate(cfg), a.path.string());
    save_dataset(generate(cfg), b.path.string());
    for (const auto& name : {"train_x.csv", "train_y.csv", "periods.csv", "test_ics.csv"})
        CHECK(slurp(a.path / name) == slurp(b.path / name));

    // manifest records the energy range inside (-1, 1)
    const auto manifest = read_json_file((a.path / "manifest.json").string());
    const auto range = manifest.at("energy_range").get<std::vector<double>>();
    CHECK(range[0] > -1.0);
    CHECK(range[1] < 1.0);
}

TEST_CASE("dataset save/load round trip") {
    ExperimentConfig cfg = default_config("pendulum");
    cfg.pend_orbits = 4;
    cfg.pend_samples = 16;
    cfg.pend_test_orbits = 2;
    const GenArtifacts art = generate(cfg);

    TempDir dir("linimm_roundtrip");
    save_dataset(art, dir.path.string());
    const GenArtifacts back = load_dataset(dir.path.string());
    CHECK(back.train.experiment == "pendulum");
    CHECK((back.train.x_samples - art.train.x_samples).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((back.train.y_samples - art.train.y_samples).cwiseAbs().maxCoeff() < 1e-15);
    REQUIRE(back.train.period_targets.has_value());
    CHECK((*back.train.period_targets - *art.train.period_targets).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((back.test_ics - art.test_ics).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("trajectory csv round trip") {
    const auto sys = make_system("vdp");
    Vec x0(2);
    x0 << 1.0, 0.5;
    const Trajectory traj = integrate(sys, x0, 0.0, 5.0, {}, 0.25);
    TempDir dir("linimm_traj");
    const std::string path = (dir.path / "traj.csv").string();
    write_trajectory_csv(traj, path);
    const Trajectory back = read_trajectory_csv(path);
    REQUIRE(back.size() == traj.size());
    for (std::size_t k = 0; k < traj.size(); ++k) {
        CHECK(back.times[k] == traj.times[k]);
        CHECK((back.states[k] - traj.states[k]).norm() == 0.0);
    }
}

TEST_CASE("model bundle save/load round trip") {
    ImmersionModel model;
    model.experiment = "pendulum";
    model.encoding = Encoding::PolarSinCos;
    model.linear = LinearSystemSpec::harmonic(1.0);
    ScaledMlp sm;
    sm.net = init_mlp(3, 3, 5);
    sm.in_scaler = ColumnScaler::identity(3);
    sm.out_scaler = ColumnScaler::identity(3);
    sm.seed = 5;
    model.phi = sm;
    model.phi_inv = sm;
    ScaledMlp per;
    per.net = init_mlp(3, 1, 6);
    per.in_scaler = ColumnScaler::identity(3);
    per.out_scaler = ColumnScaler::identity(1);
    model.period_net = per;

    TempDir dir("linimm_model");
    save_model(model, dir.path.string());
    const ImmersionModel back = load_model(dir.path.string());
    CHECK(back.experiment == "pendulum");
    CHECK(back.encoding == Encoding::PolarSinCos);
    CHECK(back.linear.kind == LinearSystemSpec::Kind::Harmonic);
    REQUIRE(back.period_net.has_value());
    CHECK((flatten(back.phi.net) - flatten(model.phi.net)).norm() == 0.0);
    Vec x(3);
    x << 0.5, 0.8, 0.6;
    CHECK((back.phi.eval(x) - model.phi.eval(x)).norm() == 0.0);
}

TEST_CASE("region csv round trip") {
    RegionSet region;
    region.rect = Rect{-1.0, 1.0, -1.0, 1.0};
    region.spacing = 0.5;
    region.closed = true;
    region.grid_points = {{0.0, 0.0}, {0.5, 0.5}};
    region.extension_points = {{1.2, 0.3}};
    TempDir dir("linimm_region");
    const std::string path = (dir.path / "region.csv").string();
    write_region_csv(region, path);
    RegionSet back;
    back.rect = region.rect;
    read_region_csv(path, back);
    REQUIRE(back.grid_points.size() == 2);
    REQUIRE(back.extension_points.size() == 1);
    CHECK((back.extension_points[0] - region.extension_points[0]).norm() == 0.0);
}

TEST_CASE("training report carries the terminal reason") {
    // tiny training run end to end through the experiment plumbing
    ExperimentConfig cfg = default_config("pendulum");
    cfg.pend_orbits = 3;
    cfg.pend_samples = 12;
    cfg.pend_test_orbits = 1;
    cfg.lm.max_iters = 2;
    cfg.restart_rmse = 1e9;  // no restart for this smoke test
    const GenArtifacts art = generate(cfg);
    const TrainedBundle bundle = train_experiment(cfg, art.train);
    REQUIRE(bundle.reports.count("phi") == 1);
    const char* reason = to_string(bundle.reports.at("phi").terminal_reason);
    CHECK(std::string(reason).size() > 0);
    CHECK(bundle.model.period_net.has_value());
}
