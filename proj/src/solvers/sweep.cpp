#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>

#include "isoresolve/error.hpp"
#include "isoresolve/solvers.hpp"

namespace isoresolve {
namespace {

std::string format_id(const char* prefix, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s=%.6g", prefix, value);
    return buf;
}

SweepEntry solve_member(const ProblemSpec& base, double k, double q, std::string id,
                        double parameter, const SolverConfig& cfg) {
    SweepEntry entry;
    entry.spec_id = std::move(id);
    entry.parameter = parameter;
    try {
        const ProblemSpec spec = make_problem(base.profile, q, base.s, Potential::constant(k));
        auto rec = std::make_shared<const SolutionRecord>(minimize_Q(spec, cfg));
        entry.converged = rec->converged;
        entry.max_phi = rec->u.max();
        entry.energy_J = rec->energy_J;
        entry.record = std::move(rec);
    } catch (const Error& e) {
        entry.converged = false;
        entry.max_phi = std::numeric_limits<double>::quiet_NaN();
        entry.energy_J = std::numeric_limits<double>::quiet_NaN();
        entry.error = std::string(to_string(e.kind())) + ": " + e.what();
    }
    return entry;
}

// Runs jobs on a fixed pool; results land in their input slot.
template <class Job>
std::vector<SweepEntry> run_pool(const std::vector<Job>& jobs, int workers) {
    std::vector<SweepEntry> out(jobs.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < jobs.size(); i = next++) out[i] = jobs[i]();
    };
    const int n = std::max(1, std::min<int>(workers, static_cast<int>(jobs.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < n; ++w) pool.emplace_back(work);
    work();
    for (std::thread& t : pool) t.join();
    return out;
}

}  // namespace

SweepReport c0_bound_sweep(const ProblemSpec& base, const std::vector<double>& k_values,
                           const std::vector<double>& q_values, const SolverConfig& cfg,
                           int workers) {
    using Job = std::function<SweepEntry()>;
    std::vector<Job> jobs;
    for (const double k : k_values) {
        jobs.push_back([&, k] { return solve_member(base, k, base.q, format_id("k", k), k, cfg); });
    }
    const double k_base = base.k.is_constant() ? base.k.constant_value() : 1.0;
    for (const double q : q_values) {
        jobs.push_back(
            [&, q] { return solve_member(base, k_base, q, format_id("q", q), q, cfg); });
    }
    std::vector<SweepEntry> results = run_pool(jobs, workers);

    SweepReport report;
    report.k_family.assign(results.begin(), results.begin() + static_cast<std::ptrdiff_t>(k_values.size()));
    report.q_family.assign(results.begin() + static_cast<std::ptrdiff_t>(k_values.size()), results.end());
    for (const SweepEntry& e : report.k_family) {
        if (e.converged && !std::isfinite(e.max_phi)) report.bounded = false;
    }
    double previous = -std::numeric_limits<double>::infinity();
    for (const SweepEntry& e : report.q_family) {
        if (!e.converged) continue;
        if (e.max_phi < previous) report.q_monotone = false;
        previous = e.max_phi;
    }
    report.note =
        "q-family: growth of max phi toward the critical exponent is a diagnostic only; a blow-up "
        "sequence is expected to concentrate at a focal point";
    return report;
}

}  // namespace isoresolve
