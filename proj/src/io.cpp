#include "nlfront/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace nlfront {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_profile_csv(const Profile& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DomainError("cannot open " + path + " for writing");
    out << "x,m\n";
    for (int i = 0; i < m.size(); ++i)
        out << format_double(m.grid.x(i)) << ',' << format_double(m[i]) << '\n';
}

Profile read_profile_csv(const std::string& path, BoundaryMode mode) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> xs, vs;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw DomainError("malformed profile row: " + line);
        xs.push_back(std::stod(line.substr(0, comma)));
        vs.push_back(std::stod(line.substr(comma + 1)));
    }
    if (xs.size() < 3 || xs.size() % 2 == 0)
        throw DomainError("profile file does not describe a symmetric odd grid");
    const double L = -xs.front();
    Grid1D g = Grid1D::make(L, static_cast<int>(xs.size()), mode);
    return Profile(g, std::move(vs));
}

namespace {

void write_mesh_dir(const Grid1D& g, double dt, double t0, size_t nslices,
                    const std::vector<std::vector<double>>& slices, const std::string& dir) {
    fs::create_directories(dir);
    std::ofstream man(fs::path(dir) / "manifest.txt");
    man << "dt = " << format_double(dt) << "\n";
    man << "slices = " << nslices << "\n";
    man << "t0 = " << format_double(t0) << "\n";
    man << "grid_half_length = " << format_double(g.half_length) << "\n";
    man << "grid_n_points = " << g.n_points << "\n";
    man << "grid_boundary = " << (g.boundary == BoundaryMode::Neumann ? "neumann" : "truncated_line")
        << "\n";
    for (size_t k = 0; k < nslices; ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "slice_%06zu.csv", k);
        Profile p(g, slices[k]);
        write_profile_csv(p, (fs::path(dir) / name).string());
    }
}

struct MeshDir {
    Grid1D grid;
    double dt = 0.0, t0 = 0.0;
    std::vector<std::vector<double>> slices;
};

MeshDir read_mesh_dir(const std::string& dir) {
    std::ifstream man(fs::path(dir) / "manifest.txt");
    if (!man) throw DomainError("missing manifest.txt in " + dir);
    double dt = 0.0, t0 = 0.0, L = 0.0;
    int n = 0;
    size_t nslices = 0;
    std::string mode = "truncated_line";
    std::string line;
    while (std::getline(man, line)) {
        std::istringstream ss(line);
        std::string key, eq;
        ss >> key >> eq;
        if (key == "dt") ss >> dt;
        else if (key == "slices") ss >> nslices;
        else if (key == "t0") ss >> t0;
        else if (key == "grid_half_length") ss >> L;
        else if (key == "grid_n_points") ss >> n;
        else if (key == "grid_boundary") ss >> mode;
    }
    MeshDir md;
    md.grid = Grid1D::make(L, n, mode == "neumann" ? BoundaryMode::Neumann
                                                   : BoundaryMode::TruncatedLine);
    md.dt = dt;
    md.t0 = t0;
    md.slices.reserve(nslices);
    for (size_t k = 0; k < nslices; ++k) {
        char name[32];
        std::snprintf(name, sizeof name, "slice_%06zu.csv", k);
        Profile p = read_profile_csv((fs::path(dir) / name).string(), md.grid.boundary);
        if (!p.grid.compatible(md.grid)) throw DomainError("slice grid mismatch in " + dir);
        md.slices.push_back(std::move(p.values));
    }
    return md;
}

}  // namespace

void write_trajectory(const Trajectory& traj, const std::string& dir) {
    write_mesh_dir(traj.grid, traj.dt, traj.t0, traj.slices.size(), traj.slices, dir);
}

Trajectory read_trajectory(const std::string& dir) {
    MeshDir md = read_mesh_dir(dir);
    Trajectory t;
    t.grid = md.grid;
    t.dt = md.dt;
    t.t0 = md.t0;
    t.slices = std::move(md.slices);
    return t;
}

void write_forcing(const ForcingField& b, const std::string& dir) {
    write_mesh_dir(b.grid, b.dt, b.t0, b.slices.size(), b.slices, dir);
}

ForcingField read_forcing(const std::string& dir) {
    MeshDir md = read_mesh_dir(dir);
    ForcingField b;
    b.grid = md.grid;
    b.dt = md.dt;
    b.t0 = md.t0;
    b.slices = std::move(md.slices);
    return b;
}

}  // namespace nlfront
