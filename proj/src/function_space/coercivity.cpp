#include <algorithm>
#include <cmath>
#include <sstream>

#include "isoresolve/error.hpp"
#include "isoresolve/functionals.hpp"

namespace isoresolve {

CoercivityCertificate coercivity_check(const ProblemSpec& spec, const GradedMesh& mesh) {
    const Tridiagonal energy = energy_matrix(mesh, spec.k);
    const Tridiagonal& gram = mesh.h1_gram();

    // the pencil's spectrum lies in [min(1, k_min), max(1, k_max)]
    double k_min = 1.0;
    double k_max = 1.0;
    for (int c = 0; c < mesh.cells(); ++c) {
        for (const QuadPoint& p : mesh.points(Measure::Volume, c)) {
            const double kv = spec.k(p.t);
            k_min = std::min(k_min, kv);
            k_max = std::max(k_max, kv);
        }
    }
    double lo = k_min - 1e-6 * (1.0 + std::abs(k_min));
    double hi = k_max + 1e-6 * (1.0 + std::abs(k_max));

    auto count_below = [&](double lambda) {
        Tridiagonal shifted(energy.size());
        for (std::size_t i = 0; i < energy.size(); ++i) {
            shifted.diag[i] = energy.diag[i] - lambda * gram.diag[i];
        }
        for (std::size_t i = 0; i + 1 < energy.size(); ++i) {
            shifted.lower[i] = energy.lower[i] - lambda * gram.lower[i];
            shifted.upper[i] = shifted.lower[i];
        }
        return shifted.negative_inertia();
    };

    for (int iter = 0; iter < 200 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (count_below(mid) >= 1) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    CoercivityCertificate cert;
    cert.lambda_min = 0.5 * (lo + hi);
    cert.pass = cert.lambda_min > 1e-10;
    std::ostringstream msg;
    msg.precision(10);
    msg << "smallest energy/H1(V) Rayleigh quotient = " << cert.lambda_min
        << (cert.pass ? " > 0: coercive" : " <= 0: Delta + K is not coercive");
    cert.message = msg.str();
    return cert;
}

}  // namespace isoresolve
