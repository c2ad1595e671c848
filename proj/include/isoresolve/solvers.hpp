#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isoresolve/functionals.hpp"
#include "isoresolve/grid_function.hpp"
#include "isoresolve/problem.hpp"

namespace isoresolve {

struct SolverConfig {
    double tol_residual = 1e-8;
    int max_iters = 100000;
    int mesh_n = 2048;
    double grading_gamma = 0.0;  // 0 selects 2 / (2 - s)
    int nodal_level = 1;
    bool newton_polish = true;
};

struct InvariantCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

enum class SolutionKind { Ground, Nodal, Shooting };

std::string to_string(SolutionKind kind);

struct SolutionRecord {
    explicit SolutionRecord(GridFunction solution) : u(std::move(solution)) {}

    GridFunction u;
    SolutionKind kind = SolutionKind::Ground;
    double energy_J = 0.0;
    double quadratic_energy = 0.0;  // A
    double lq_mass = 0.0;           // B
    double residual_norm = 0.0;
    double tolerance = 0.0;
    int nodal_count = 0;
    int iterations = 0;
    bool converged = false;
    std::vector<InvariantCheck> checks;

    bool checks_pass() const;
    const InvariantCheck* find_check(const std::string& name) const;
};

/// Mesh for a solve with the config's size and grading.
std::shared_ptr<const GradedMesh> solver_mesh(const ProblemSpec& spec, const SolverConfig& cfg);

/// Exponent and coercivity gates; throws Error(GateRefused) or
/// Error(NotCoercive) naming the failed gate.
void require_gates(const ProblemSpec& spec, const GradedMesh& mesh);

/// Positive ground state: minimizes Q on the unit sphere of L^q(d^{-s}) by
/// H¹(V)-preconditioned descent, then rescales onto A = B.
SolutionRecord minimize_Q(const ProblemSpec& spec, const SolverConfig& cfg);

/// t_u = (A/B)^{1/(q-2)} and t_u u. Throws Error(InvalidArgument) when A or
/// B is not positive.
std::pair<double, GridFunction> nehari_rescale(const GridFunction& u, const ProblemSpec& spec);

/// Sign-changing critical point with `level` interior sign changes, started
/// from a ground state (computed when `ground` is null).
/// Throws Error(NodalCollapse) when every initial split collapses.
SolutionRecord solve_nodal(const ProblemSpec& spec, int level, const SolverConfig& cfg,
                           const SolutionRecord* ground = nullptr);

/// Damped Newton on the weak form; returns the improved iterate and its
/// residual dual norm. Stops when the residual no longer decreases.
struct NewtonResult {
    GridFunction u;
    double residual_norm;
    int iterations;
};
NewtonResult newton_polish(const GridFunction& u, const ProblemSpec& spec, double target,
                           int max_iters = 40);

/// Computes the record fields and invariant checks for a critical point.
SolutionRecord make_record(GridFunction u, const ProblemSpec& spec, SolutionKind kind,
                           double tolerance, int iterations, bool converged);

/// Energy, mass and check summary of a sweep.
struct SweepEntry {
    std::string spec_id;
    double parameter = 0.0;
    bool converged = false;
    double max_phi = 0.0;
    double energy_J = 0.0;
    std::string error;
    std::shared_ptr<const SolutionRecord> record;  // null when the solve failed
};

struct SweepReport {
    std::vector<SweepEntry> k_family;
    std::vector<SweepEntry> q_family;
    bool bounded = true;         // every converged k-member has a finite max
    bool q_monotone = true;      // diagnostic: max φ nondecreasing along q
    std::string note;
};

/// Ground states for k ∈ k_values (then q ∈ q_values, diagnostic) on a
/// shared profile and s. Failures are recorded and the sweep continues.
/// The report is ordered as the inputs regardless of `workers`.
SweepReport c0_bound_sweep(const ProblemSpec& base, const std::vector<double>& k_values,
                           const std::vector<double>& q_values, const SolverConfig& cfg,
                           int workers = 1);

}  // namespace isoresolve
