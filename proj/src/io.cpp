#include "linimm/io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace linimm {

namespace {

std::ofstream open_out(const std::string& path) {
    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << std::setprecision(std::numeric_limits<double>::max_digits10);
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return in;
}

}  // namespace

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    auto out = open_out(path);
    out << "t";
    for (int i = 1; i <= traj.dim(); ++i) out << ",x" << i;
    out << '\n';
    for (std::size_t k = 0; k < traj.size(); ++k) {
        out << traj.times[k];
        for (int i = 0; i < traj.dim(); ++i) out << ',' << traj.states[k][i];
        out << '\n';
    }
}

Trajectory read_trajectory_csv(const std::string& path) {
    auto [columns, data] = read_csv(path);
    if (columns.empty() || columns.front() != "t")
        throw std::runtime_error("trajectory csv must start with a t column: " + path);
    Trajectory traj;
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        traj.times.push_back(data(r, 0));
        traj.states.push_back(data.row(r).tail(data.cols() - 1).transpose());
    }
    return traj;
}

void write_csv(const std::string& path, const std::vector<std::string>& columns, const Mat& data) {
    if (static_cast<Eigen::Index>(columns.size()) != data.cols())
        throw std::invalid_argument("write_csv: column count mismatch");
    auto out = open_out(path);
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (Eigen::Index r = 0; r < data.rows(); ++r) {
        for (Eigen::Index c = 0; c < data.cols(); ++c) out << (c ? "," : "") << data(r, c);
        out << '\n';
    }
}

std::pair<std::vector<std::string>, Mat> read_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty csv: " + path);
    std::vector<std::string> columns;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) columns.push_back(tok);
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
        if (row.size() != columns.size())
            throw std::runtime_error("ragged csv row in " + path);
        rows.push_back(std::move(row));
    }
    Mat data(rows.size(), columns.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < columns.size(); ++c)
            data(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    return {columns, data};
}

void write_region_csv(const RegionSet& region, const std::string& path) {
    auto out = open_out(path);
    out << "x1,x2,kind\n";
    for (const auto& p : region.grid_points) out << p[0] << ',' << p[1] << ",grid\n";
    for (const auto& p : region.extension_points) out << p[0] << ',' << p[1] << ",extension\n";
}

void read_region_csv(const std::string& path, RegionSet& region) {
    auto in = open_in(path);
    std::string line;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, kind;
        std::getline(ss, a, ',');
        std::getline(ss, b, ',');
        std::getline(ss, kind, ',');
        const Eigen::Vector2d p(std::stod(a), std::stod(b));
        if (kind == "grid") region.grid_points.push_back(p);
        else region.extension_points.push_back(p);
    }
}

void write_training_log_csv(const LmReport& report, const std::string& path) {
    auto out = open_out(path);
    out << "iter,loss,mu,accepted\n";
    for (const auto& row : report.log)
        out << row.iter << ',' << row.loss << ',' << row.mu << ',' << (row.accepted ? 1 : 0) << '\n';
}

void write_eigenfield_csv(const Mat& grid_states, const KoopmanEigenfield& field,
                          const std::string& path) {
    auto out = open_out(path);
    out << "x1,x2";
    for (Eigen::Index k = 0; k < field.eigenvalues.size(); ++k)
        out << ",mag" << k + 1 << ",phase" << k + 1;
    out << '\n';
    for (Eigen::Index i = 0; i < grid_states.rows(); ++i) {
        out << grid_states(i, 0) << ',' << grid_states(i, 1);
        for (Eigen::Index k = 0; k < field.eigenvalues.size(); ++k)
            out << ',' << field.magnitudes(i, k) << ',' << field.phases(i, k);
        out << '\n';
    }
}

nlohmann::json floquet_to_json(const FloquetResult& res) {
    nlohmann::json j;
    j["period"] = res.period;
    j["matched_decay_rate"] = res.matched_decay_rate;
    std::vector<std::vector<double>> mult;
    for (Eigen::Index i = 0; i < res.multipliers.size(); ++i)
        mult.push_back({res.multipliers[i].real(), res.multipliers[i].imag()});
    j["multipliers"] = mult;
    std::vector<std::vector<double>> mono;
    for (Eigen::Index i = 0; i < res.monodromy.rows(); ++i) {
        std::vector<double> row;
        for (Eigen::Index k = 0; k < res.monodromy.cols(); ++k) row.push_back(res.monodromy(i, k));
        mono.push_back(std::move(row));
    }
    j["monodromy"] = mono;
    std::vector<double> cp(res.cycle_point.data(), res.cycle_point.data() + res.cycle_point.size());
    j["cycle_point"] = cp;
    return j;
}

void write_json_file(const std::string& path, const nlohmann::json& j) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

nlohmann::json read_json_file(const std::string& path) {
    auto in = open_in(path);
    nlohmann::json j;
    in >> j;
    return j;
}

}  // namespace linimm
