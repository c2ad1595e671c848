#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isoresolve/grid_function.hpp"
#include "isoresolve/problem.hpp"

namespace isoresolve {

struct NamedCheck {
    std::string name;
    std::string anchor;  // the property the check realizes
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct RefinementTriple {
    std::string quantity;
    std::vector<int> mesh_n;
    std::vector<double> values;
    double observed_order = 0.0;
};

struct FittedExponent {
    std::string name;
    double exponent = 0.0;
    double spread = 0.0;  // standard error of the slope
};

/// Append-only collection of verification results.
class VerificationReport {
public:
    void add_check(NamedCheck check) { checks_.push_back(std::move(check)); }
    void add_check(std::string name, std::string anchor, double value, double threshold,
                   bool pass);
    void add_refinement(RefinementTriple triple) { refinements_.push_back(std::move(triple)); }
    void add_exponent(FittedExponent fit) { exponents_.push_back(std::move(fit)); }
    void add_note(std::string key, std::string value) { notes_.emplace_back(std::move(key), std::move(value)); }

    const std::vector<NamedCheck>& checks() const { return checks_; }
    const std::vector<RefinementTriple>& refinements() const { return refinements_; }
    const std::vector<FittedExponent>& exponents() const { return exponents_; }
    const std::vector<std::pair<std::string, std::string>>& notes() const { return notes_; }
    bool empty() const { return checks_.empty() && refinements_.empty() && exponents_.empty(); }
    bool all_pass() const;
    const NamedCheck* find(const std::string& name) const;

    /// Stable-key JSON.
    std::string to_json() const;

private:
    std::vector<NamedCheck> checks_;
    std::vector<RefinementTriple> refinements_;
    std::vector<FittedExponent> exponents_;
    std::vector<std::pair<std::string, std::string>> notes_;
};

/// Sup norm of the strong residual φ'' - mφ' - kφ + |φ|^{q-2}φ/d^s by
/// nonuniform central differences at nodes with t ∈ [0.05 D, 0.95 D].
double fd_residual_oracle(const GridFunction& u, const ProblemSpec& spec);
/// Same, with a forcing term moved to the right side: ... + f.
double fd_residual_oracle(const GridFunction& u, const ProblemSpec& spec, const RealFn& forcing);

struct HolderFit {
    bool defined = false;
    double exponent = 0.0;
    double fit_residual = 0.0;  // rms of the log-log fit
    std::string message;
};

/// Least-squares slope of log(φ(0) - φ(t)) against log t over the first ten
/// nonzero nodes; undefined when an increment is not positive.
HolderFit holder_fit(const GridFunction& u, double s);

struct BatterySettings {
    int trials = 200;
    int modes = 10;
    std::uint64_t seed = 20240917;
    int refine_factor = 2;
    double drift_tolerance = 0.05;
};

/// Random cosine-series batteries of the Hardy and embedding quotients on
/// meshes of `base_cells` and refine_factor * base_cells cells.
VerificationReport embedding_battery(const ProblemSpec& spec, int base_cells,
                                     const BatterySettings& settings = {});

struct BumpDiagnostic {
    double q = 0.0;
    std::vector<double> epsilon;
    std::vector<double> ratio;  // ‖φ_ε‖_{L^q(d^{-s})} / ‖φ_ε‖_{H¹(V)}
    double growth = 0.0;        // ratio(last) / ratio(first)
    double predicted_exponent = 0.0;  // ratio ~ ε^{predicted_exponent}
};

/// φ_ε(t) = exp(-(t/ε)²) concentrating at the left focal point, with the
/// exponent q free of the subcritical gate.
BumpDiagnostic bump_family(const IsoparametricProfile& profile, double s, double q,
                           const std::vector<double>& epsilon, int cells);

/// Observed order from three values at h, h/r, h/r².
double richardson_order(double coarse, double medium, double fine, double ratio = 2.0);
/// Extrapolated limit from the two finest values at the given order.
double richardson_limit(double medium, double fine, double order, double ratio = 2.0);

}  // namespace isoresolve
