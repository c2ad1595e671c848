#include "isoresolve/config.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "isoresolve/error.hpp"

namespace isoresolve {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"') quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

struct Value {
    std::string raw;
    int line;

    [[noreturn]] void bad(const std::string& key, const std::string& what) const {
        fail(ErrorKind::Parse, "config line " + std::to_string(line) + ": " + key + ": " + what);
    }

    double number(const std::string& key) const {
        const char* begin = raw.c_str();
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(begin, &end);
        if (end == begin || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
            bad(key, "expected a number, got '" + raw + "'");
        }
        return v;
    }

    int integer(const std::string& key) const {
        const double v = number(key);
        if (v != std::floor(v) || std::abs(v) > 1e9) bad(key, "expected an integer");
        return static_cast<int>(v);
    }

    bool boolean(const std::string& key) const {
        if (raw == "true") return true;
        if (raw == "false") return false;
        bad(key, "expected true or false");
    }

    std::string string() const {
        if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
            return raw.substr(1, raw.size() - 2);
        }
        return raw;
    }

    std::vector<double> list(const std::string& key) const {
        if (raw.size() < 2 || raw.front() != '[' || raw.back() != ']') {
            bad(key, "expected a list [a, b, ...]");
        }
        std::vector<double> out;
        std::stringstream items(raw.substr(1, raw.size() - 2));
        std::string item;
        while (std::getline(items, item, ',')) {
            item = trim(item);
            if (item.empty()) {
                if (out.empty() && items.eof()) break;  // []
                bad(key, "empty list entry");
            }
            out.push_back(Value{item, line}.number(key));
        }
        return out;
    }
};

using Setter = std::function<void(RunConfig&, const Value&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"profile.kind", [](RunConfig& c, const Value& v, const std::string&) { c.profile_kind = v.string(); }},
        {"profile.n", [](RunConfig& c, const Value& v, const std::string& k) { c.n = v.integer(k); }},
        {"profile.d0", [](RunConfig& c, const Value& v, const std::string& k) { c.d0 = v.integer(k); }},
        {"profile.d1", [](RunConfig& c, const Value& v, const std::string& k) { c.d1 = v.integer(k); }},
        {"profile.table", [](RunConfig& c, const Value& v, const std::string&) { c.profile_table = v.string(); }},
        {"problem.q", [](RunConfig& c, const Value& v, const std::string& k) { c.q = v.number(k); }},
        {"problem.s", [](RunConfig& c, const Value& v, const std::string& k) { c.s = v.number(k); }},
        {"potential.kind", [](RunConfig& c, const Value& v, const std::string&) { c.potential_kind = v.string(); }},
        {"potential.value", [](RunConfig& c, const Value& v, const std::string& k) { c.potential_value = v.number(k); }},
        {"potential.table", [](RunConfig& c, const Value& v, const std::string&) { c.potential_table = v.string(); }},
        {"solver.tol_residual", [](RunConfig& c, const Value& v, const std::string& k) { c.solver.tol_residual = v.number(k); }},
        {"solver.max_iters", [](RunConfig& c, const Value& v, const std::string& k) { c.solver.max_iters = v.integer(k); }},
        {"solver.mesh_n", [](RunConfig& c, const Value& v, const std::string& k) { c.solver.mesh_n = v.integer(k); }},
        {"solver.grading_gamma", [](RunConfig& c, const Value& v, const std::string& k) { c.solver.grading_gamma = v.number(k); }},
        {"solver.nodal_level", [](RunConfig& c, const Value& v, const std::string& k) { c.solver.nodal_level = v.integer(k); }},
        {"solver.newton_polish", [](RunConfig& c, const Value& v, const std::string& k) { c.solver.newton_polish = v.boolean(k); }},
        {"shooting.bracket_lo", [](RunConfig& c, const Value& v, const std::string& k) {
             auto b = c.bracket.value_or(std::pair{0.0, 0.0});
             b.first = v.number(k);
             c.bracket = b;
         }},
        {"shooting.bracket_hi", [](RunConfig& c, const Value& v, const std::string& k) {
             auto b = c.bracket.value_or(std::pair{0.0, 0.0});
             b.second = v.number(k);
             c.bracket = b;
         }},
        {"sweep.k_values", [](RunConfig& c, const Value& v, const std::string& k) { c.sweep_k = v.list(k); }},
        {"sweep.q_values", [](RunConfig& c, const Value& v, const std::string& k) { c.sweep_q = v.list(k); }},
        {"oracle.trials", [](RunConfig& c, const Value& v, const std::string& k) { c.battery.trials = v.integer(k); }},
        {"oracle.seed", [](RunConfig& c, const Value& v, const std::string& k) {
             const double seed = v.number(k);
             if (seed < 0 || seed != std::floor(seed)) v.bad(k, "expected a nonnegative integer");
             c.battery.seed = static_cast<std::uint64_t>(seed);
         }},
    };
    return table;
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
    RunConfig cfg;
    cfg.text = text;
    cfg.base_dir = base_dir;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(strip_comment(line));
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']' && line.find('=') == std::string::npos) {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            fail(ErrorKind::Parse, "config line " + std::to_string(line_no) + ": expected key = value");
        }
        std::string key = trim(line.substr(0, eq));
        if (!section.empty() && key.find('.') == std::string::npos) key = section + "." + key;
        const Value value{trim(line.substr(eq + 1)), line_no};
        if (value.raw.empty()) value.bad(key, "missing value");
        const auto it = setters().find(key);
        if (it == setters().end()) {
            fail(ErrorKind::Parse, "config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        it->second(cfg, value, key);
    }
    if (cfg.bracket && !(cfg.bracket->first > 0.0 && cfg.bracket->second > cfg.bracket->first)) {
        fail(ErrorKind::Parse, "config: shooting.bracket_lo and bracket_hi must satisfy 0 < lo < hi");
    }
    return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot read config file: " + path.string());
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str(), path.parent_path().empty() ? "." : path.parent_path());
}

IsoparametricProfile build_profile(const RunConfig& cfg) {
    if (cfg.profile_kind == "sphere_tube") {
        if (cfg.d1 && *cfg.d1 != cfg.n - cfg.d0 - 1) {
            fail(ErrorKind::InvalidArgument, "sphere_tube profile has d1 = n - d0 - 1");
        }
        return sphere_tube_profile(cfg.n, cfg.d0);
    }
    if (cfg.profile_kind == "pole") {
        if (cfg.d0 != 0) fail(ErrorKind::InvalidArgument, "pole profile has d0 = 0");
        return sphere_tube_profile(cfg.n, 0);
    }
    if (cfg.profile_kind == "from_ab_table" || cfg.profile_kind == "table") {
        if (cfg.profile_table.empty()) fail(ErrorKind::Parse, "profile.table is required for kind = from_ab_table");
        if (!cfg.d1) fail(ErrorKind::Parse, "profile.d1 is required for kind = from_ab_table");
        const IsoparametricData data = read_ab_table((cfg.base_dir / cfg.profile_table).string());
        return profile_from_ab(data, cfg.n, cfg.d0, *cfg.d1);
    }
    fail(ErrorKind::Parse, "profile.kind must be sphere_tube, pole or from_ab_table, got '" + cfg.profile_kind + "'");
}

ProblemSpec build_problem(const RunConfig& cfg) {
    Potential k = Potential::constant(cfg.potential_value);
    if (cfg.potential_kind == "table") {
        if (cfg.potential_table.empty()) fail(ErrorKind::Parse, "potential.table is required for kind = table");
        k = read_potential_table((cfg.base_dir / cfg.potential_table).string());
    } else if (cfg.potential_kind != "constant") {
        fail(ErrorKind::Parse, "potential.kind must be constant or table");
    }
    return make_problem(build_profile(cfg), cfg.q, cfg.s, std::move(k));
}

}  // namespace isoresolve
