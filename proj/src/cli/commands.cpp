#include "isoresolve/commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "isoresolve/config.hpp"
#include "isoresolve/run_io.hpp"
#include "isoresolve/shooting.hpp"

namespace isoresolve {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json number(double x) {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
}

double as_number(const json& j) {
    if (j.is_number()) return j.get<double>();
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
}

std::string anchor_for(const std::string& check) {
    static const std::map<std::string, std::string> anchors = {
        {"residual", "weak-form residual below the solver tolerance"},
        {"critical_point_identity", "critical points satisfy A = B"},
        {"energy_identity", "J = (1/2 - 1/q) B at critical points"},
        {"u == 0 or u > 0", "positivity dichotomy for nonnegative solutions"},
        {"focal_maximum", "local maximum at the focal point"},
        {"holder_exponent", "focal regularity exponent 2 - s"},
        {"nodal_count", "sign-changing solutions"},
        {"nodal_level", "requested number of sign changes"},
        {"energy_above_ground", "nodal energies lie above the ground state"},
        {"match_defect", "two-sided shooting match at D/2"},
        {"strong_residual_window", "strong-form residual away from the focal points"},
    };
    if (auto it = anchors.find(check); it != anchors.end()) return it->second;
    if (check.rfind("replay_", 0) == 0) return "manifest replay";
    if (check.rfind("artifact_hash", 0) == 0) return "artifact integrity";
    return "";
}

struct Loaded {
    RunConfig cfg;
    fs::path path;
    json overrides = json::object();
};

Loaded load(const CommandOptions& options) {
    if (options.config.empty()) fail(ErrorKind::InvalidArgument, "--config is required");
    Loaded l{load_config(options.config), options.config};
    if (options.mesh_n) {
        l.cfg.solver.mesh_n = *options.mesh_n;
        l.overrides["mesh_n"] = *options.mesh_n;
    }
    return l;
}

void apply_overrides(RunConfig& cfg, const json& overrides) {
    if (overrides.contains("mesh_n")) cfg.solver.mesh_n = overrides["mesh_n"].get<int>();
}

json profile_json(const IsoparametricProfile& p) {
    return {{"label", p.label()},         {"n", p.n()},
            {"d0", p.d0()},               {"d1", p.d1()},
            {"D", p.focal_distance()},    {"normalization", "V(D/2) = 1"},
            {"symmetric", p.is_symmetric()}};
}

json problem_json(const ProblemSpec& spec) {
    const ExponentReport e = critical_exponent(spec.profile, spec.s);
    return {{"q", spec.q},
            {"s", spec.s},
            {"potential", spec.k.description()},
            {"critical_exponent", number(e.critical)},
            {"potential_holder_hypothesis", "user responsibility, not enforced"}};
}

json mesh_json(const GradedMesh& mesh) {
    return {{"cells", mesh.cells()}, {"grading", mesh.grading()}, {"t1", mesh.node(1)}};
}

json solver_json(const SolverConfig& s) {
    return {{"tol_residual", s.tol_residual},
            {"max_iters", s.max_iters},
            {"mesh_n", s.mesh_n},
            {"grading_gamma", s.grading_gamma},
            {"nodal_level", s.nodal_level},
            {"newton_polish", s.newton_polish}};
}

json record_json(const SolutionRecord& r) {
    json checks = json::array();
    for (const InvariantCheck& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"value", number(c.value)},
                          {"threshold", number(c.threshold)},
                          {"pass", c.pass}});
    }
    return {{"kind", to_string(r.kind)},
            {"energy_J", r.energy_J},
            {"quadratic_energy", r.quadratic_energy},
            {"lq_mass", r.lq_mass},
            {"residual_norm", r.residual_norm},
            {"nodal_count", r.nodal_count},
            {"iterations", r.iterations},
            {"converged", r.converged},
            {"phi0", r.u[0]},
            {"max_phi", r.u.max()},
            {"checks_pass", r.checks_pass()},
            {"checks", checks}};
}

json manifest_base(const std::string& command, const Loaded& l) {
    json m;
    m["tool"] = {{"name", "isoresolve"}, {"version", kToolVersion}};
    m["command"] = command;
    m["created_utc"] = utc_timestamp();
    m["config"] = {{"path", fs::absolute(l.path).string()},
                   {"base_dir", fs::absolute(l.cfg.base_dir).string()},
                   {"sha256", sha256_hex(l.cfg.text)},
                   {"text", l.cfg.text}};
    m["overrides"] = l.overrides;
    return m;
}

void finish(const fs::path& dir, json manifest, const std::vector<std::string>& artifacts,
            Clock::time_point start) {
    json list = json::array();
    for (const std::string& rel : artifacts) {
        list.push_back({{"path", rel}, {"sha256", sha256_hex(read_file(dir / rel))}});
    }
    manifest["artifacts"] = list;
    manifest["wall_time_seconds"] = std::chrono::duration<double>(Clock::now() - start).count();
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::string phi_table(const GridFunction& u) {
    std::string s = "t phi\n";
    for (std::size_t j = 0; j < u.size(); ++j) s += fmt(u.mesh().node(j)) + " " + fmt(u[j]) + "\n";
    return s;
}

std::string trajectory_csv(const ShootState& st) {
    std::string s = "t,phi,dphi\n";
    for (std::size_t i = 0; i < st.trace_t.size(); ++i) {
        s += fmt(st.trace_t[i]) + "," + fmt(st.trace_phi[i]) + "," + fmt(st.trace_slope[i]) + "\n";
    }
    return s;
}

// Strict numeric CSV with a fixed header; throws Error(Parse).
std::vector<std::vector<double>> read_numeric_csv(const fs::path& path, const std::string& header,
                                                  std::size_t columns) {
    std::istringstream in(read_file(path));
    std::string line;
    if (!std::getline(in, line) || line != header) {
        fail(ErrorKind::Parse, path.string() + ": expected header '" + header + "'");
    }
    std::vector<std::vector<double>> rows;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<double> row;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || *end != '\0') {
                fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) + ": bad number");
            }
            row.push_back(v);
        }
        if (row.size() != columns) {
            fail(ErrorKind::Parse, path.string() + ":" + std::to_string(line_no) + ": expected " +
                                       std::to_string(columns) + " columns");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

GridFunction load_solution(const fs::path& path, const std::shared_ptr<const GradedMesh>& mesh) {
    const std::vector<GridFunctionRow> rows = read_csv(path.string());
    if (rows.size() != mesh->size()) {
        fail(ErrorKind::Parse, path.string() + ": " + std::to_string(rows.size()) +
                                   " rows, mesh has " + std::to_string(mesh->size()) + " nodes");
    }
    std::vector<double> phi(rows.size());
    for (std::size_t j = 0; j < rows.size(); ++j) {
        if (rows[j].t != mesh->node(j)) {
            fail(ErrorKind::Parse, path.string() + ": t column does not match the run's mesh");
        }
        phi[j] = rows[j].phi;
    }
    return GridFunction(mesh, std::move(phi));
}

template <class F>
CommandResult guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const Error& e) {
        err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
        return {exit_code_for(e.kind()), {}};
    } catch (const json::exception& e) {
        err << "error (parse): " << e.what() << "\n";
        return {kExitUsage, {}};
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return {kExitUsage, {}};
    }
}

std::string persist_record(const fs::path& dir, const SolutionRecord& rec, const ProblemSpec& spec,
                           std::vector<std::string>& artifacts, VerificationReport* report_out) {
    write_file(dir / "solution.csv", to_csv(rec.u));
    artifacts.push_back("solution.csv");
    write_file(dir / "plotdata" / "phi.tsv", phi_table(rec.u));
    artifacts.push_back("plotdata/phi.tsv");
    VerificationReport report = verify_record(rec, spec);
    write_file(dir / "verify.json", report.to_json());
    artifacts.push_back("verify.json");
    if (report_out) *report_out = report;
    return report.to_json();
}

// Reported with pass/fail but outside the exit-code contract: the focal
// shape checks resolve only when the local maximum is wider than the window.
bool is_diagnostic(const std::string& name) {
    for (const char* suffix : {"focal_maximum", "holder_exponent"}) {
        const std::string tail(suffix);
        if (name.size() >= tail.size() && name.compare(name.size() - tail.size(), tail.size(), tail) == 0) {
            return true;
        }
    }
    return false;
}

bool mandatory_pass(const VerificationReport& report) {
    for (const NamedCheck& c : report.checks()) {
        if (!c.pass && !is_diagnostic(c.name)) return false;
    }
    return true;
}

void print_record(std::ostream& out, const std::string& command, const SolutionRecord& rec,
                  const fs::path& dir) {
    out << command << ": J = " << fmt(rec.energy_J) << ", phi(0) = " << fmt(rec.u[0])
        << ", residual = " << fmt(rec.residual_norm) << ", nodal count = " << rec.nodal_count
        << "\n";
    for (const InvariantCheck& c : rec.checks) {
        out << "  [" << (c.pass ? "pass" : is_diagnostic(c.name) ? "diag" : "FAIL") << "] " << c.name << ": " << fmt(c.value)
            << " (threshold " << fmt(c.threshold) << ")\n";
    }
    out << "run directory: " << dir.string() << "\n";
}

double relative_gap(double a, double b) {
    if (a == b) return 0.0;
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

void add_replay(VerificationReport& report, const std::string& name, double recomputed,
                double stored) {
    const double gap = relative_gap(recomputed, stored);
    report.add_check("replay_" + name, anchor_for("replay_"), gap, 1e-12, gap <= 1e-12);
}

void add_record_checks(VerificationReport& report, const SolutionRecord& rec) {
    for (const InvariantCheck& c : rec.checks) {
        report.add_check(c.name, anchor_for(c.name), c.value, c.threshold, c.pass);
    }
}

}  // namespace

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::GateRefused:
        case ErrorKind::NotCoercive: return kExitGate;
        case ErrorKind::NonConvergence:
        case ErrorKind::NoBracket: return kExitNonConvergence;
        case ErrorKind::NodalCollapse: return kExitNodalCollapse;
        default: return kExitUsage;
    }
}

fs::path output_root(const CommandOptions& options) {
    if (const char* env = std::getenv("ISORESOLVE_OUT"); env && *env) return env;
    return options.out;
}

VerificationReport verify_record(const SolutionRecord& rec, const ProblemSpec& spec) {
    VerificationReport report;
    add_record_checks(report, rec);

    const GradedMesh& mesh = rec.u.mesh();
    const double D = mesh.profile().focal_distance();
    double scale = 0.0;
    for (std::size_t j = 0; j < rec.u.size(); ++j) {
        const double t = mesh.node(j);
        if (t < 0.05 * D || t > 0.95 * D) continue;
        const double phi = std::abs(rec.u[j]);
        scale = std::max(scale, std::abs(spec.k(t)) * phi +
                                    std::pow(phi, spec.q - 1.0) /
                                        std::pow(singular_distance(t, D), spec.s));
    }
    const double strong = fd_residual_oracle(rec.u, spec) / std::max(scale, 1e-300);
    report.add_check("strong_residual_window", anchor_for("strong_residual_window"), strong, 1e-2,
                     strong <= 1e-2);
    if (rec.nodal_count == 0) {
        const HolderFit fit = holder_fit(rec.u, spec.s);
        if (fit.defined) report.add_exponent({"holder_exponent", fit.exponent, fit.fit_residual});
    }
    return report;
}

CommandResult cmd_solve_ground(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> CommandResult {
        const auto start = Clock::now();
        const Loaded l = load(options);
        const ProblemSpec spec = build_problem(l.cfg);
        const SolutionRecord rec = minimize_Q(spec, l.cfg.solver);

        const fs::path dir = create_run_dir(output_root(options), l.cfg.text);
        std::vector<std::string> artifacts;
        VerificationReport report;
        persist_record(dir, rec, spec, artifacts, &report);

        json m = manifest_base("solve-ground", l);
        m["profile"] = profile_json(spec.profile);
        m["problem"] = problem_json(spec);
        m["mesh"] = mesh_json(rec.u.mesh());
        m["solver"] = solver_json(l.cfg.solver);
        m["outcome"] = record_json(rec);
        m["outcome"]["verification_pass"] = report.all_pass();
        m["outcome"]["mandatory_checks_pass"] = mandatory_pass(report);
        finish(dir, m, artifacts, start);

        print_record(out, "solve-ground", rec, dir);
        const bool ok = mandatory_pass(report);
        return {ok ? kExitOk : kExitCheckFailure, dir};
    });
}

CommandResult cmd_solve_nodal(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> CommandResult {
        const auto start = Clock::now();
        Loaded l = load(options);
        const int level = options.level.value_or(l.cfg.solver.nodal_level);
        if (level < 1) fail(ErrorKind::InvalidArgument, "--level must be >= 1");
        if (options.level) l.overrides["level"] = level;
        const ProblemSpec spec = build_problem(l.cfg);
        const SolutionRecord ground = minimize_Q(spec, l.cfg.solver);
        SolutionRecord rec = solve_nodal(spec, level, l.cfg.solver, &ground);
        rec.checks.push_back({"nodal_level", static_cast<double>(rec.nodal_count),
                              static_cast<double>(level), rec.nodal_count == level});

        const fs::path dir = create_run_dir(output_root(options), l.cfg.text);
        std::vector<std::string> artifacts;
        VerificationReport report;
        persist_record(dir, rec, spec, artifacts, &report);
        write_file(dir / "ground.csv", to_csv(ground.u));
        artifacts.push_back("ground.csv");
        write_file(dir / "plotdata" / "levels.tsv",
                   "level J\n0 " + fmt(ground.energy_J) + "\n" + std::to_string(level) + " " +
                       fmt(rec.energy_J) + "\n");
        artifacts.push_back("plotdata/levels.tsv");

        json m = manifest_base("solve-nodal", l);
        m["level"] = level;
        m["profile"] = profile_json(spec.profile);
        m["problem"] = problem_json(spec);
        m["mesh"] = mesh_json(rec.u.mesh());
        m["solver"] = solver_json(l.cfg.solver);
        m["outcome"] = record_json(rec);
        m["outcome"]["verification_pass"] = report.all_pass();
        m["outcome"]["mandatory_checks_pass"] = mandatory_pass(report);
        m["ground"] = record_json(ground);
        finish(dir, m, artifacts, start);

        print_record(out, "solve-nodal", rec, dir);
        const bool ok = mandatory_pass(report);
        return {ok ? kExitOk : kExitCheckFailure, dir};
    });
}

CommandResult cmd_shoot(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> CommandResult {
        const auto start = Clock::now();
        Loaded l = load(options);
        const ProblemSpec spec = build_problem(l.cfg);
        auto mesh = solver_mesh(spec, l.cfg.solver);
        std::vector<std::string> artifacts;

        if (options.phi0) {
            if (!(*options.phi0 > 0.0)) {
                fail(ErrorKind::InvalidArgument,
                     "--phi0 must be positive: u == 0 or u > 0 leaves no other nonnegative start");
            }
            l.overrides["phi0"] = *options.phi0;
            ShootOptions so;
            so.t_start = mesh->node(1);
            for (std::size_t j = 0; j <= mesh->size() / 2; ++j) so.record_at.push_back(mesh->node(j));
            const ShootState st = shoot_from_zero(spec, *options.phi0, so);
            const fs::path dir = create_run_dir(output_root(options), l.cfg.text);
            write_file(dir / "trajectory.csv", trajectory_csv(st));
            artifacts.push_back("trajectory.csv");
            json m = manifest_base("shoot", l);
            m["mode"] = "ivp";
            m["profile"] = profile_json(spec.profile);
            m["problem"] = problem_json(spec);
            m["mesh"] = mesh_json(*mesh);
            m["outcome"] = {{"phi0", st.phi0},
                            {"singular_coefficient", st.singular_coefficient},
                            {"quadratic_coefficient", st.quadratic_coefficient},
                            {"t_start", st.t_start},
                            {"t_end", st.t_end},
                            {"end_value", number(st.end_value)},
                            {"end_slope", number(st.end_slope)},
                            {"blew_up", st.blew_up},
                            {"blowup_distance", st.blowup_distance}};
            finish(dir, m, artifacts, start);
            out << "shoot: phi(D/2) = " << fmt(st.end_value) << ", phi'(D/2) = " << fmt(st.end_slope)
                << (st.blew_up ? " (blew up before D/2)" : "") << "\nrun directory: " << dir.string()
                << "\n";
            return {kExitOk, dir};
        }

        auto bracket = options.bracket ? options.bracket : l.cfg.bracket;
        if (!bracket) fail(ErrorKind::InvalidArgument, "shoot needs --phi0 or a bracket");
        if (options.bracket) l.overrides["bracket"] = {bracket->first, bracket->second};
        if (options.parity != "even" && options.parity != "odd") {
            fail(ErrorKind::InvalidArgument, "--parity must be even or odd");
        }
        l.overrides["parity"] = options.parity;
        const Parity parity = options.parity == "odd" ? Parity::Odd : Parity::Even;
        const MatchResult match = match_shooting(spec, *bracket, l.cfg.solver, parity);

        const fs::path dir = create_run_dir(output_root(options), l.cfg.text);
        VerificationReport report;
        persist_record(dir, match.record, spec, artifacts, &report);
        write_file(dir / "trajectory.csv", trajectory_csv(match.left));
        artifacts.push_back("trajectory.csv");
        json m = manifest_base("shoot", l);
        m["mode"] = "match";
        m["parity"] = options.parity;
        m["bracket"] = {bracket->first, bracket->second};
        m["profile"] = profile_json(spec.profile);
        m["problem"] = problem_json(spec);
        m["mesh"] = mesh_json(*mesh);
        m["solver"] = solver_json(l.cfg.solver);
        m["outcome"] = record_json(match.record);
        m["outcome"]["matched_phi0"] = match.phi0;
        m["outcome"]["matched_phiD"] = match.phiD;
        m["outcome"]["defect"] = match.defect;
        m["outcome"]["evaluations"] = match.evaluations;
        m["outcome"]["verification_pass"] = report.all_pass();
        m["outcome"]["mandatory_checks_pass"] = mandatory_pass(report);
        finish(dir, m, artifacts, start);

        print_record(out, "shoot", match.record, dir);
        const bool ok = mandatory_pass(report);
        return {ok ? kExitOk : kExitCheckFailure, dir};
    });
}

CommandResult cmd_sweep(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> CommandResult {
        const auto start = Clock::now();
        Loaded l = load(options);
        const ProblemSpec base = build_problem(l.cfg);
        const SweepReport sweep =
            c0_bound_sweep(base, l.cfg.sweep_k, l.cfg.sweep_q, l.cfg.solver, options.workers);

        const fs::path dir = create_run_dir(output_root(options), l.cfg.text);
        std::vector<std::string> artifacts;
        std::string summary = "spec_id,max_phi,J,converged\n";
        std::string k_table = "k max_phi\n";
        std::string q_table = "q max_phi\n";
        json members = json::array();
        auto emit = [&](const SweepEntry& e, const char* parameter, double k, double q) {
            summary += e.spec_id + "," + fmt(e.max_phi) + "," + fmt(e.energy_J) + "," +
                       (e.converged ? "true" : "false") + "\n";
            (parameter[0] == 'k' ? k_table : q_table) += fmt(e.parameter) + " " + fmt(e.max_phi) + "\n";
            json member = {{"spec_id", e.spec_id}, {"parameter", parameter}, {"k", k},  {"q", q},
                           {"converged", e.converged}, {"max_phi", number(e.max_phi)},
                           {"energy_J", number(e.energy_J)}, {"error", e.error}};
            const fs::path mdir = fs::path("members") / e.spec_id;
            std::vector<std::string> member_artifacts;
            if (e.record) {
                write_file(dir / mdir / "solution.csv", to_csv(e.record->u));
                member_artifacts.push_back((mdir / "solution.csv").string());
                member["outcome"] = record_json(*e.record);
            }
            json mm = member;
            mm["artifacts"] = json::array();
            for (const std::string& a : member_artifacts) {
                mm["artifacts"].push_back({{"path", a}, {"sha256", sha256_hex(read_file(dir / a))}});
            }
            write_file(dir / mdir / "manifest.json", mm.dump(2) + "\n");
            artifacts.insert(artifacts.end(), member_artifacts.begin(), member_artifacts.end());
            artifacts.push_back((mdir / "manifest.json").string());
            members.push_back(member);
        };
        const double k_base = base.k.is_constant() ? base.k.constant_value() : 1.0;
        for (const SweepEntry& e : sweep.k_family) emit(e, "k", e.parameter, base.q);
        for (const SweepEntry& e : sweep.q_family) emit(e, "q", k_base, e.parameter);
        write_file(dir / "summary.csv", summary);
        artifacts.insert(artifacts.begin(), "summary.csv");
        write_file(dir / "plotdata" / "max_phi_k.tsv", k_table);
        write_file(dir / "plotdata" / "max_phi_q.tsv", q_table);
        artifacts.push_back("plotdata/max_phi_k.tsv");
        artifacts.push_back("plotdata/max_phi_q.tsv");

        json m = manifest_base("sweep", l);
        m["profile"] = profile_json(base.profile);
        m["problem"] = problem_json(base);
        m["solver"] = solver_json(l.cfg.solver);
        m["workers"] = options.workers;
        m["members"] = members;
        m["outcome"] = {{"bounded", sweep.bounded},
                        {"q_monotone_diagnostic", sweep.q_monotone},
                        {"note", sweep.note}};
        finish(dir, m, artifacts, start);

        out << "sweep: " << sweep.k_family.size() + sweep.q_family.size() << " members, bounded = "
            << (sweep.bounded ? "yes" : "no") << ", q-monotone (diagnostic) = "
            << (sweep.q_monotone ? "yes" : "no") << "\n"
            << summary << "run directory: " << dir.string() << "\n";
        return {kExitOk, dir};
    });
}

CommandResult cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&]() -> CommandResult {
        const fs::path dir = options.run_dir;
        if (dir.empty()) fail(ErrorKind::InvalidArgument, "verify needs a run directory");
        const json m = json::parse(read_file(dir / "manifest.json"));
        RunConfig cfg = parse_config(m.at("config").at("text").get<std::string>(),
                                     m.at("config").at("base_dir").get<std::string>());
        apply_overrides(cfg, m.at("overrides"));
        VerificationReport report;

        for (const json& a : m.at("artifacts")) {
            const std::string rel = a.at("path").get<std::string>();
            const bool same = sha256_hex(read_file(dir / rel)) == a.at("sha256").get<std::string>();
            report.add_check("artifact_hash:" + rel, anchor_for("artifact_hash"), same ? 0.0 : 1.0,
                             0.0, same);
        }

        const std::string command = m.at("command").get<std::string>();
        const ProblemSpec spec = build_problem(cfg);
        auto mesh = solver_mesh(spec, cfg.solver);
        auto replay_record = [&](const json& stored, const GridFunction& u) {
            const std::string kind = stored.at("kind").get<std::string>();
            const SolutionKind k = kind == "nodal"      ? SolutionKind::Nodal
                                   : kind == "shooting" ? SolutionKind::Shooting
                                                        : SolutionKind::Ground;
            SolutionRecord rec = make_record(u, spec, k, cfg.solver.tol_residual,
                                             stored.at("iterations").get<int>(),
                                             stored.at("converged").get<bool>());
            add_replay(report, "energy_J", rec.energy_J, as_number(stored.at("energy_J")));
            add_replay(report, "quadratic_energy", rec.quadratic_energy,
                       as_number(stored.at("quadratic_energy")));
            add_replay(report, "lq_mass", rec.lq_mass, as_number(stored.at("lq_mass")));
            add_replay(report, "residual_norm", rec.residual_norm,
                       as_number(stored.at("residual_norm")));
            add_replay(report, "nodal_count", rec.nodal_count, stored.at("nodal_count").get<int>());
            return rec;
        };

        if (command == "solve-ground" || command == "solve-nodal" ||
            (command == "shoot" && m.at("mode") == "match")) {
            const GridFunction u = load_solution(dir / "solution.csv", mesh);
            SolutionRecord rec = replay_record(m.at("outcome"), u);
            if (command == "solve-nodal") {
                const int level = m.at("level").get<int>();
                const GridFunction g = load_solution(dir / "ground.csv", mesh);
                const SolutionRecord ground = replay_record(m.at("ground"), g);
                rec.checks.push_back({"nodal_level", static_cast<double>(rec.nodal_count),
                                      static_cast<double>(level), rec.nodal_count == level});
                rec.checks.push_back({"energy_above_ground", rec.energy_J - ground.energy_J, 0.0,
                                      rec.energy_J > ground.energy_J});
            }
            if (command == "shoot") {
                const auto rows = read_numeric_csv(dir / "trajectory.csv", "t,phi,dphi", 3);
                if (rows.empty()) fail(ErrorKind::Parse, "trajectory.csv has no rows");
                const bool odd = m.at("parity") == "odd";
                const double defect = std::abs(odd ? rows.back()[1] : rows.back()[2]);
                rec.checks.push_back({"match_defect", defect, 1e-8, defect <= 1e-8});
                add_replay(report, "defect", defect, as_number(m.at("outcome").at("defect")));
            }
            const VerificationReport fresh = verify_record(rec, spec);
            for (const NamedCheck& c : fresh.checks()) report.add_check(c);
            for (const FittedExponent& e : fresh.exponents()) report.add_exponent(e);
        } else if (command == "shoot") {
            const auto rows = read_numeric_csv(dir / "trajectory.csv", "t,phi,dphi", 3);
            ShootOptions so;
            so.t_start = mesh->node(1);
            for (std::size_t j = 0; j <= mesh->size() / 2; ++j) so.record_at.push_back(mesh->node(j));
            const ShootState st = shoot_from_zero(spec, m.at("overrides").at("phi0").get<double>(), so);
            if (rows.size() != st.trace_t.size()) {
                fail(ErrorKind::Parse, "trajectory.csv row count does not match the replayed shot");
            }
            double gap = 0.0;
            for (std::size_t i = 0; i < rows.size(); ++i) {
                gap = std::max({gap, relative_gap(rows[i][0], st.trace_t[i]),
                                relative_gap(rows[i][1], st.trace_phi[i]),
                                relative_gap(rows[i][2], st.trace_slope[i])});
            }
            report.add_check("replay_trajectory", anchor_for("replay_"), gap, 1e-12, gap <= 1e-12);
        } else if (command == "sweep") {
            const auto rows = [&] {
                std::istringstream in(read_file(dir / "summary.csv"));
                std::string line;
                std::getline(in, line);
                if (line != "spec_id,max_phi,J,converged") {
                    fail(ErrorKind::Parse, "summary.csv: unexpected header");
                }
                std::vector<std::vector<std::string>> out_rows;
                while (std::getline(in, line)) {
                    std::vector<std::string> cells;
                    std::stringstream ss(line);
                    std::string cell;
                    while (std::getline(ss, cell, ',')) cells.push_back(cell);
                    if (cells.size() != 4) fail(ErrorKind::Parse, "summary.csv: expected 4 columns");
                    out_rows.push_back(cells);
                }
                return out_rows;
            }();
            const json& members = m.at("members");
            if (rows.size() != members.size()) fail(ErrorKind::Parse, "summary.csv: row count mismatch");
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const json& member = members[i];
                const std::string id = member.at("spec_id").get<std::string>();
                if (rows[i][0] != id) fail(ErrorKind::Parse, "summary.csv: spec_id order mismatch");
                if (!member.at("converged").get<bool>()) continue;
                const ProblemSpec ms = make_problem(spec.profile, member.at("q").get<double>(), spec.s,
                                                    Potential::constant(member.at("k").get<double>()));
                const GridFunction u =
                    load_solution(dir / "members" / id / "solution.csv", solver_mesh(ms, cfg.solver));
                const SolutionRecord rec = make_record(u, ms, SolutionKind::Ground, cfg.solver.tol_residual,
                                                       0, true);
                add_replay(report, id + "_J", rec.energy_J, std::strtod(rows[i][2].c_str(), nullptr));
                add_replay(report, id + "_max_phi", rec.u.max(),
                           std::strtod(rows[i][1].c_str(), nullptr));
                for (const InvariantCheck& c : rec.checks) {
                    report.add_check(id + ":" + c.name, anchor_for(c.name), c.value, c.threshold, c.pass);
                }
            }
        } else {
            fail(ErrorKind::Parse, "manifest names an unknown command '" + command + "'");
        }

        report.add_note("diagnostic_checks", "focal_maximum and holder_exponent do not affect the exit code");
        out << report.to_json();
        return {mandatory_pass(report) ? kExitOk : kExitCheckFailure, dir};
    });
}

}  // namespace isoresolve
