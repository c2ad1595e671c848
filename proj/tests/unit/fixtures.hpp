#pragma once

#include <cmath>
#include <filesystem>
#include <map>
#include <random>

#include "isoresolve/functionals.hpp"
#include "isoresolve/geometry.hpp"
#include "isoresolve/mesh.hpp"
#include "isoresolve/problem.hpp"
#include "isoresolve/solvers.hpp"

namespace fixtures {

using namespace isoresolve;

inline const IsoparametricProfile& pole4() {
    static const IsoparametricProfile p = sphere_tube_profile(4, 0);
    return p;
}

// n = 4 pole profile, k = 1, s = 1/2, q = 3.
inline ProblemSpec reference_spec() {
    return make_problem(pole4(), 3.0, 0.5, Potential::constant(1.0));
}

inline SolverConfig config(int cells) {
    SolverConfig cfg;
    cfg.mesh_n = cells;
    return cfg;
}

// Ground state of the reference spec, solved once per mesh size.
inline const SolutionRecord& reference_ground(int cells) {
    static std::map<int, SolutionRecord> cache;
    auto it = cache.find(cells);
    if (it == cache.end()) it = cache.emplace(cells, minimize_Q(reference_spec(), config(cells))).first;
    return it->second;
}

// Random even cosine series on [0, D]: smooth, with φ'(0) = φ'(D) = 0.
inline GridFunction random_series(const std::shared_ptr<const GradedMesh>& mesh, std::mt19937_64& rng,
                                  int modes = 8) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> c(modes);
    for (int k = 0; k < modes; ++k) c[k] = normal(rng) / (1.0 + k);
    const double D = mesh->profile().focal_distance();
    return GridFunction::sample(mesh, [&](double t) {
        double v = 0.0;
        for (int k = 0; k < modes; ++k) v += c[k] * std::cos(k * M_PI * t / D);
        return v;
    });
}

// Relative sup distance between functions on meshes with identical nodes.
inline double relative_sup_distance(const GridFunction& a, const GridFunction& b) {
    double diff = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) diff = std::max(diff, std::abs(a[j] - b[j]));
    return diff / b.sup_norm();
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / ("isoresolve-tests-" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace fixtures
