#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "linimm/analysis.hpp"
#include "linimm/immersion.hpp"

namespace linimm {

/// Trajectory CSV: header `t,x1,...,xN`, full-precision decimals.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);
Trajectory read_trajectory_csv(const std::string& path);

/// Generic numeric table with a header row.
void write_csv(const std::string& path, const std::vector<std::string>& columns, const Mat& data);
std::pair<std::vector<std::string>, Mat> read_csv(const std::string& path);

/// Region CSV: `x1,x2,kind` with kind in {grid, extension}.
void write_region_csv(const RegionSet& region, const std::string& path);

/// Reads the point lists back; rect/spacing/closed flags come from the caller.
void read_region_csv(const std::string& path, RegionSet& region);

/// Training log CSV: `iter,loss,mu,accepted`.
void write_training_log_csv(const LmReport& report, const std::string& path);

/// Eigenfield CSV: `x1,x2,mag1,phase1,...` for planar grids.
void write_eigenfield_csv(const Mat& grid_states, const KoopmanEigenfield& field,
                          const std::string& path);

nlohmann::json floquet_to_json(const FloquetResult& res);

void write_json_file(const std::string& path, const nlohmann::json& j);
nlohmann::json read_json_file(const std::string& path);

}  // namespace linimm
