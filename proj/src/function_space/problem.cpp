#include "isoresolve/problem.hpp"

#include "detail/pchip.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "isoresolve/error.hpp"

namespace isoresolve {

Potential Potential::constant(double value) {
    if (!std::isfinite(value)) fail(ErrorKind::InvalidArgument, "potential must be finite");
    Potential k;
    k.constant_ = true;
    k.value_ = value;
    std::ostringstream label;
    label.precision(17);
    label << "constant(" << value << ")";
    k.description_ = label.str();
    return k;
}

Potential Potential::table(std::vector<double> t, std::vector<double> values) {
    if (t.size() != values.size() || t.size() < 4) {
        fail(ErrorKind::InvalidArgument, "potential table needs at least 4 (t, k) pairs");
    }
    for (std::size_t i = 1; i < t.size(); ++i) {
        if (!(t[i] > t[i - 1])) fail(ErrorKind::InvalidArgument, "potential table t must increase");
    }
    const double lo = t.front();
    const double hi = t.back();
    auto fit = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
        std::move(t), std::move(values));
    Potential k;
    k.constant_ = false;
    k.fn_ = [fit, lo, hi](double x) { return (*fit)(std::clamp(x, lo, hi)); };
    k.description_ = "table";
    return k;
}

Potential Potential::function(RealFn fn, std::string description) {
    if (!fn) fail(ErrorKind::InvalidArgument, "potential evaluator is empty");
    Potential k;
    k.constant_ = false;
    k.fn_ = std::move(fn);
    k.description_ = std::move(description);
    return k;
}

Potential read_potential_table(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Io, "cannot open potential table: " + path);
    std::string line;
    std::getline(in, line);
    std::vector<double> t;
    std::vector<double> k;
    while (std::getline(in, line)) {
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double tv = 0.0;
        double kv = 0.0;
        if (!(row >> tv)) continue;
        if (!(row >> kv)) fail(ErrorKind::Parse, path + ": expected t k");
        t.push_back(tv);
        k.push_back(kv);
    }
    Potential out = Potential::table(std::move(t), std::move(k));
    return out;
}

ProblemSpec make_problem(const IsoparametricProfile& profile, double q, double s, Potential k) {
    const ExponentReport gate = critical_exponent(profile, s);
    if (!gate.admissible(q)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "exponent gate refused q = " << q << ": " << gate.describe();
        fail(ErrorKind::GateRefused, msg.str());
    }
    return ProblemSpec{profile, q, s, std::move(k)};
}

}  // namespace isoresolve
