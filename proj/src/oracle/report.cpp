#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "isoresolve/oracle.hpp"

namespace isoresolve {
namespace {

// JSON has no infinities or NaN
nlohmann::ordered_json number(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

}  // namespace

void VerificationReport::add_check(std::string name, std::string anchor, double value,
                                   double threshold, bool pass) {
    checks_.push_back({std::move(name), std::move(anchor), value, threshold, pass});
}

bool VerificationReport::all_pass() const {
    return std::all_of(checks_.begin(), checks_.end(), [](const NamedCheck& c) { return c.pass; });
}

const NamedCheck* VerificationReport::find(const std::string& name) const {
    for (const NamedCheck& c : checks_) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

std::string VerificationReport::to_json() const {
    nlohmann::ordered_json out;
    out["all_pass"] = all_pass();
    out["checks"] = nlohmann::ordered_json::array();
    for (const NamedCheck& c : checks_) {
        nlohmann::ordered_json entry;
        entry["name"] = c.name;
        entry["anchor"] = c.anchor;
        entry["value"] = number(c.value);
        entry["threshold"] = number(c.threshold);
        entry["pass"] = c.pass;
        out["checks"].push_back(entry);
    }
    out["refinements"] = nlohmann::ordered_json::array();
    for (const RefinementTriple& r : refinements_) {
        nlohmann::ordered_json entry;
        entry["quantity"] = r.quantity;
        entry["mesh_n"] = r.mesh_n;
        entry["values"] = nlohmann::ordered_json::array();
        for (double v : r.values) entry["values"].push_back(number(v));
        entry["observed_order"] = number(r.observed_order);
        out["refinements"].push_back(entry);
    }
    out["exponents"] = nlohmann::ordered_json::array();
    for (const FittedExponent& e : exponents_) {
        out["exponents"].push_back(
            {{"name", e.name}, {"exponent", number(e.exponent)}, {"spread", number(e.spread)}});
    }
    out["notes"] = nlohmann::ordered_json::object();
    for (const auto& [key, value] : notes_) out["notes"][key] = value;
    return out.dump(2) + "\n";
}

}  // namespace isoresolve
