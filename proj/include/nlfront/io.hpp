#ifndef NLFRONT_IO_HPP
#define NLFRONT_IO_HPP

#include <string>

#include "nlfront/dynamics.hpp"

namespace nlfront {

// two-column CSV "x,m", 17 significant digits
void write_profile_csv(const Profile& m, const std::string& path);
Profile read_profile_csv(const std::string& path, BoundaryMode mode = BoundaryMode::TruncatedLine);

// directory of per-slice profile CSVs plus a manifest (dt, M, grid metadata)
void write_trajectory(const Trajectory& traj, const std::string& dir);
Trajectory read_trajectory(const std::string& dir);
void write_forcing(const ForcingField& b, const std::string& dir);
ForcingField read_forcing(const std::string& dir);

std::string format_double(double v);  // 17 significant digits

}  // namespace nlfront

#endif
