#pragma once

#include <vector>

#include "isoresolve/grid_function.hpp"
#include "isoresolve/linalg.hpp"
#include "isoresolve/problem.hpp"

namespace isoresolve {

/// ∫ (φ'² + φ²) V dt Gram matrix of the P1 basis (cached on the mesh).
const Tridiagonal& h1_gram(const GradedMesh& mesh);
/// ∫ (φ'ψ' + k φψ) V dt.
Tridiagonal energy_matrix(const GradedMesh& mesh, const Potential& k);
/// (q-1) ∫ |φ|^{q-2} ψ_i ψ_j d^{-s} V dt, the derivative of the nonlinear load.
Tridiagonal nonlinear_jacobian(const GridFunction& u, double q);

/// ∫ (u'v' + uv) V dt
double h1_inner(const GridFunction& u, const GridFunction& v);
double h1_norm(const GridFunction& u);

/// A = ∫ (φ'² + kφ²) V dt
double quadratic_energy(const GridFunction& u, const ProblemSpec& spec);
/// B = ∫ |φ|^q d^{-s} V dt, with s taken from the mesh.
double lq_mass(const GridFunction& u, double q);

double weighted_lq_norm(const GridFunction& u, const ProblemSpec& spec);
/// (∫ φ² d^{-2} V) / (∫ (φ'² + φ²) V). Throws on a zero denominator or when
/// the Hardy measure is not integrable.
double hardy_quotient(const GridFunction& u, const ProblemSpec& spec);
/// A / B^{2/q}; throws Error(InvalidArgument) when B = 0.
double rayleigh_Q(const GridFunction& u, const ProblemSpec& spec);
/// A/2 - B/q
double energy_J(const GridFunction& u, const ProblemSpec& spec);

struct Residual {
    GridFunction vector;  // r_j = ∫ (φ'ψ_j' + kφψ_j - |φ|^{q-2}φ d^{-s} ψ_j) V dt
    double dual_norm;     // sqrt(rᵀ G⁻¹ r), G = H¹(V) Gram matrix
};

Residual residual(const GridFunction& u, const ProblemSpec& spec);
/// Residual of the forced problem: the right side gains ∫ f ψ_j V dt.
Residual residual_forced(const GridFunction& u, const ProblemSpec& spec, const RealFn& forcing);

/// H¹(V)-Riesz representative of J'(u).
GridFunction gradient_J(const GridFunction& u, const ProblemSpec& spec);
/// Riesz representative of an assembled dual vector.
GridFunction riesz(const GridFunction& dual);

/// Load vector ∫ |φ|^{q-2}φ d^{-s} ψ_j V dt.
std::vector<double> nonlinear_load(const GridFunction& u, double q);

struct CoercivityCertificate {
    double lambda_min = 0.0;  // min over the discrete space of A(φ) / ‖φ‖²_{H¹(V)}
    bool pass = false;
    std::string message;
};

/// Smallest generalized eigenvalue of the energy form against the H¹(V)
/// norm, by Sturm-sequence bisection on the tridiagonal pencil.
CoercivityCertificate coercivity_check(const ProblemSpec& spec, const GradedMesh& mesh);

/// Throws Error(InvalidArgument) when u lives on a mesh for a different
/// profile or singularity exponent than spec.
void require_compatible(const GridFunction& u, const ProblemSpec& spec);

}  // namespace isoresolve
