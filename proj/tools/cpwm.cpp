#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <optional>
#include <sstream>

#include "cpwm/errors.hpp"
#include "cpwm/model_io.hpp"
#include "cpwm/oracle.hpp"
#include "cpwm/relax.hpp"
#include "cpwm/result_io.hpp"
#include "cpwm/units.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace cpwm;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// everything a command may read from flags or a config file
struct Options {
    std::string benchmark, model_file, preset, config_file;
    std::vector<std::string> params;
    std::optional<double> E, E_cm, x_L, x_R, mass;
    std::optional<int> N, steps_per_shift, window, snapshot_every;
    std::optional<std::string> integrator, scheme;
    std::optional<double> eps, t_max, p_tol;
    bool early_stop = false;
    std::string out;
    bool history = false;
};

struct Run {
    ScatteringProblem problem;
    PropagatorConfig config;
};

ParamMap parse_params(const std::vector<std::string>& kv, ParamMap into = {}) {
    for (const auto& s : kv) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw ConfigError("--param expects key=value, got '" + s + "'");
        try {
            into[s.substr(0, eq)] = std::stod(s.substr(eq + 1));
        } catch (const std::exception&) {
            throw ConfigError("--param value is not a number: '" + s + "'");
        }
    }
    return into;
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("cannot parse " + path + ": " + e.what());
    }
}

template <class T>
void take(std::optional<T>& dst, const json& j, const char* key) {
    if (!dst && j.contains(key)) dst = j[key].get<T>();
}

Run resolve(Options o) {
    json file;
    if (!o.config_file.empty()) file = read_json(o.config_file);
    try {
        if (o.benchmark.empty() && file.contains("benchmark")) o.benchmark = file["benchmark"].get<std::string>();
        if (o.model_file.empty() && file.contains("model_file")) o.model_file = file["model_file"].get<std::string>();
        if (o.preset.empty() && file.contains("preset")) o.preset = file["preset"].get<std::string>();
        take(o.E, file, "E");
        take(o.E_cm, file, "E_cm");
        take(o.x_L, file, "x_L");
        take(o.x_R, file, "x_R");
        take(o.mass, file, "m");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad config file: ") + e.what());
    }

    Run r;
    std::optional<RunPreset> pre;
    if (file.contains("problem")) {
        r.problem = problem_from_json(file["problem"]);
    } else if (!o.benchmark.empty()) {
        auto b = parse_benchmark(o.benchmark);
        pre = preset(b, o.preset);
        ParamMap p;
        if (file.contains("params"))
            for (auto& [k, v] : file["params"].items()) p[k] = v.get<double>();
        p = parse_params(o.params, p);
        r.problem = make_problem(b, *pre, p);
    } else if (!o.model_file.empty() || file.contains("model")) {
        if (!o.params.empty()) throw ConfigError("--param applies to benchmarks only");
        r.problem.model = file.contains("model") ? model_from_json(file["model"]) : load_model(o.model_file);
        if (!o.E && !o.E_cm) throw ConfigError("a model file needs --E or --E-cm");
        if (!o.x_L || !o.x_R) throw ConfigError("a model file needs --xl and --xr");
    } else {
        throw ConfigError("give --benchmark, --model, or --config");
    }
    if (o.E && o.E_cm) throw ConfigError("--E and --E-cm are mutually exclusive");
    if (o.E) r.problem.E = *o.E;
    if (o.E_cm) r.problem.E = cm_to_hartree(*o.E_cm);
    if (o.x_L) r.problem.x_L = *o.x_L;
    if (o.x_R) r.problem.x_R = *o.x_R;
    if (o.mass) r.problem.m = *o.mass;

    auto& c = r.config;
    if (pre) {
        c.N = pre->N;
        c.integrator = pre->integrator;
        c.scheme = pre->scheme;
        c.steps_per_shift = pre->steps_per_shift;
        if (pre->eps > 0) c.eps = pre->eps;
        c.t_max = pre->t_max;
    }
    if (file.contains("config")) {
        json base = config_to_json(c);
        base.update(file["config"]);
        c = config_from_json(base);
    }
    if (o.N) c.N = *o.N;
    if (o.integrator) {
        // phase_modified names the scheme; the stepping integrator is kept
        if (*o.integrator == "phase_modified") c.scheme = Scheme::phase_modified;
        else c.integrator = parse_integrator(*o.integrator);
    }
    if (o.scheme) c.scheme = parse_scheme(*o.scheme);
    if (o.steps_per_shift) c.steps_per_shift = *o.steps_per_shift;
    if (o.eps) c.eps = *o.eps;
    if (o.t_max) c.t_max = *o.t_max;
    if (o.p_tol) c.p_tol = *o.p_tol;
    if (o.window) c.window = *o.window;
    if (o.snapshot_every) c.snapshot_every = *o.snapshot_every;
    if (o.early_stop) c.early_stop = true;
    if (c.N < 4) throw ConfigError("N must be at least 4");
    if (c.steps_per_shift < 1) throw ConfigError("steps per shift must be a positive integer");
    if (!(r.problem.x_L < r.problem.x_R)) throw ConfigError("x_L must be below x_R");
    return r;
}

void add_problem_flags(CLI::App* app, Options& o) {
    app->add_option("-b,--benchmark", o.benchmark, "built-in benchmark (see `cpwm benchmarks`)");
    app->add_option("--model", o.model_file, "JSON model file");
    app->add_option("--preset", o.preset, "benchmark run preset label");
    app->add_option("--param", o.params, "benchmark shape parameter override key=value")->take_all();
    app->add_option("--config,--replay", o.config_file,
                    "JSON config file, or a result JSON whose embedded problem and config are rerun");
    app->add_option("--E", o.E, "energy (hartree)");
    app->add_option("--E-cm", o.E_cm, "energy (cm^-1)");
    app->add_option("--xl", o.x_L, "left window edge (bohr)");
    app->add_option("--xr", o.x_R, "right window edge (bohr)");
    app->add_option("--mass", o.mass, "mass (a.u.)");
}

void add_propagator_flags(CLI::App* app, Options& o) {
    app->add_option("--N", o.N, "grid points on surface 1");
    app->add_option("--integrator", o.integrator, "rk4 | cash_karp | phase_modified");
    app->add_option("--scheme", o.scheme, "general | phase_modified | automatic");
    app->add_option("--steps-per-shift", o.steps_per_shift, "RK4 steps per t_shift");
    app->add_option("--eps", o.eps, "Cash-Karp tolerance");
    app->add_option("--tmax", o.t_max, "relaxation time (a.u.)");
    app->add_option("--ptol", o.p_tol, "convergence tolerance on probabilities");
    app->add_option("--window", o.window, "convergence window (shifts)");
    app->add_flag("--early-stop", o.early_stop, "stop once converged");
    app->add_option("--snapshot-every", o.snapshot_every, "density snapshot cadence (shifts)");
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << text;
}

fs::path out_dir(const std::string& dir) {
    fs::path p(dir);
    std::error_code ec;
    fs::create_directories(p, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
    return p;
}

void print_summary(std::ostream& os, const ScatteringResult& r) {
    os << std::setprecision(10);
    os << r.model_name << "  E = " << r.E << "  scheme " << r.scheme << "  t_shift " << r.t_shift << "  shifts "
       << r.shifts << '\n';
    for (std::size_t i = 0; i < r.P_refl.size(); ++i)
        os << "  surface " << i + 1 << ":  P_refl " << r.P_refl[i] << "  P_trans " << r.P_trans[i] << '\n';
    os << std::setprecision(3) << "  unitarity defect " << r.unitarity_defect << "  converged "
       << (r.converged ? "yes" : "no") << "  runtime " << r.runtime_s << " s\n";
}

void warn_soft(const ScatteringProblem& p) {
    auto rep = validate_problem(p);
    for (const auto& c : rep.checks)
        if (!c.passed && !c.hard) std::cerr << "warning: " << c.name << ": " << c.detail << " = " << c.value << '\n';
}

int cmd_solve(const Options& o) {
    Run r = resolve(o);
    warn_soft(r.problem);
    Propagator prop(r.problem, r.config);
    std::ostringstream snaps;
    bool header = true;
    RelaxHooks hooks;
    hooks.on_snapshot = [&](const PropagationState& s) {
        write_snapshot_csv(snaps, s, prop, header);
        header = false;
    };
    auto out = relax_to_stationary(prop, hooks);
    json j = result_to_json(out.result, r.problem, r.config, o.history);
    if (o.out.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        auto dir = out_dir(o.out);
        write_file(dir / "result.json", j.dump(2) + "\n");
        std::ostringstream h;
        write_history_csv(h, out.result);
        write_file(dir / "history.csv", h.str());
        write_file(dir / "snapshots.csv", snaps.str());
        if (r.config.integrator == Integrator::cash_karp) {
            std::ostringstream st;
            st << "t,dt,err,accepted\n" << std::setprecision(15);
            for (const auto& s : out.steps) st << s.t << ',' << s.dt << ',' << s.err << ',' << s.accepted << '\n';
            write_file(dir / "steps.csv", st.str());
        }
        print_summary(std::cout, out.result);
    }
    return 0;
}

struct EnergyGrid {
    std::vector<double> list, list_cm;
    std::optional<double> lo, hi;
    int count = 0;
    bool log = false, cm = false;

    std::vector<double> energies() const {
        std::vector<double> E;
        for (double e : list) E.push_back(e);
        for (double e : list_cm) E.push_back(cm_to_hartree(e));
        if (lo || hi || count) {
            if (!lo || !hi || count < 1) throw ConfigError("an energy range needs --E-min, --E-max and --count");
            double a = cm ? cm_to_hartree(*lo) : *lo, b = cm ? cm_to_hartree(*hi) : *hi;
            if (!(a > 0 && b > 0) && log) throw ConfigError("a logarithmic energy grid needs positive bounds");
            for (int k = 0; k < count; ++k) {
                double s = count == 1 ? 0 : double(k) / (count - 1);
                E.push_back(log ? a * std::pow(b / a, s) : a + (b - a) * s);
            }
        }
        if (E.empty()) throw ConfigError("energy grid is empty");
        return E;
    }
};

int cmd_scan(const Options& o, const EnergyGrid& grid, int jobs, double ppw, double traversals, bool with_oracle) {
    Run base = resolve(o);
    const auto E = grid.energies();
    const int f = base.problem.model.f();
    struct Row {
        double E = 0;
        std::optional<ScatteringResult> r;
        std::optional<OracleSolution> oracle;
        PropagatorConfig config;
        std::string error;
        bool config_error = false;
    };
    std::vector<Row> rows(E.size());
#ifdef _OPENMP
    if (jobs <= 0) jobs = omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(jobs)
#endif
    for (long k = 0; k < static_cast<long>(E.size()); ++k) {
        auto& row = rows[k];
        row.E = E[k];
        try {
            ScatteringProblem p = base.problem;
            p.E = E[k];
            row.config = adapt_config(p, base.config, ppw, traversals);
            row.config.execution = Execution::serial;
            row.r = relax_to_stationary(p, row.config).result;
            if (with_oracle) {
                OracleOptions oo;
                oo.keep_wavefunction = false;
                row.oracle = solve_reference(p, oo);
            }
        } catch (const ConfigError& e) {
            row.error = e.what();
            row.config_error = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
    }
    (void)jobs;

    std::ostringstream csv;
    csv << "E,lnE";
    for (int i = 0; i < f; ++i) csv << ",P_refl_" << i + 1;
    for (int i = 0; i < f; ++i) csv << ",P_trans_" << i + 1;
    csv << ",unitarity_defect,converged,N,t_max";
    if (with_oracle) {
        for (int i = 0; i < f; ++i) csv << ",oracle_P_refl_" << i + 1;
        for (int i = 0; i < f; ++i) csv << ",oracle_P_trans_" << i + 1;
        csv << ",max_defect";
    }
    csv << ",status\n" << std::setprecision(17);
    int failures = 0, config_failures = 0;
    for (const auto& row : rows) {
        csv << row.E << ',' << std::log(row.E);
        if (row.r) {
            for (double v : row.r->P_refl) csv << ',' << v;
            for (double v : row.r->P_trans) csv << ',' << v;
            csv << ',' << row.r->unitarity_defect << ',' << row.r->converged << ',' << row.config.N << ','
                << row.config.t_max;
        } else {
            for (int i = 0; i < 2 * f + 4; ++i) csv << ',';
        }
        if (with_oracle) {
            if (row.r && row.oracle) {
                for (double v : row.oracle->P_refl) csv << ',' << v;
                for (double v : row.oracle->P_trans) csv << ',' << v;
                csv << ',' << compare(*row.r, *row.oracle).max_defect;
            } else {
                for (int i = 0; i < 2 * f + 1; ++i) csv << ',';
            }
        }
        std::string status = row.error.empty() ? "ok" : "error: " + row.error;
        std::replace(status.begin(), status.end(), ',', ';');
        std::replace(status.begin(), status.end(), '\n', ' ');
        csv << ',' << status << '\n';
        if (!row.error.empty()) {
            ++failures;
            if (row.config_error) ++config_failures;
            std::cerr << "E = " << row.E << ": " << row.error << '\n';
        }
    }
    if (o.out.empty()) std::cout << csv.str();
    else write_file(out_dir(o.out) / "scan.csv", csv.str());
    if (failures == 0) return 0;
    return config_failures == failures ? 2 : 1;
}

// one parameter swept, everything else fixed
int cmd_converge(const Options& o, const std::string& param, const std::vector<double>& values, double target,
                 bool with_oracle) {
    Run base = resolve(o);
    if (values.empty()) throw ConfigError("--values is empty");
    std::vector<PropagatorConfig> configs;
    std::vector<ScatteringProblem> problems;
    for (double v : values) {
        Run r = base;
        auto& c = r.config;
        if (param == "N") c.N = static_cast<int>(v);
        else if (param == "steps_per_shift" || param == "steps-per-shift") c.steps_per_shift = static_cast<int>(v);
        else if (param == "eps") c.eps = v;
        else if (param == "t_max" || param == "tmax") c.t_max = v;
        else if (param == "x_L" || param == "xl") r.problem.x_L = v;
        else if (param == "x_R" || param == "xr") r.problem.x_R = v;
        else if (param == "window") r.problem.x_L = -v, r.problem.x_R = v;
        else throw ConfigError("cannot sweep '" + param + "'");
        configs.push_back(c);
        problems.push_back(r.problem);
    }
    std::vector<ScatteringResult> res;
    for (std::size_t k = 0; k < values.size(); ++k) res.push_back(relax_to_stationary(problems[k], configs[k]).result);

    // reference: the oracle, or the last (most refined) entry
    std::vector<double> ref_r = res.back().P_refl, ref_t = res.back().P_trans;
    if (with_oracle) {
        OracleOptions oo;
        oo.keep_wavefunction = false;
        auto orc = solve_reference(problems.back(), oo);
        ref_r = orc.P_refl;
        ref_t = orc.P_trans;
    }
    const int f = static_cast<int>(ref_r.size());
    std::vector<double> delta;
    std::cout << param;
    for (int i = 0; i < f; ++i) std::cout << ",P_refl_" << i + 1;
    for (int i = 0; i < f; ++i) std::cout << ",P_trans_" << i + 1;
    std::cout << ",max_delta,runtime_s\n" << std::setprecision(12);
    for (std::size_t k = 0; k < res.size(); ++k) {
        double d = 0;
        for (int i = 0; i < f; ++i)
            d = std::max({d, std::abs(res[k].P_refl[i] - ref_r[i]), std::abs(res[k].P_trans[i] - ref_t[i])});
        delta.push_back(d);
        std::cout << values[k];
        for (double v : res[k].P_refl) std::cout << ',' << v;
        for (double v : res[k].P_trans) std::cout << ',' << v;
        std::cout << ',' << d << ',' << res[k].runtime_s << '\n';
    }
    // successive differences give the observed order for geometric sweeps
    if (res.size() >= 3) {
        std::cerr << "observed order:";
        for (std::size_t k = 0; k + 2 < res.size(); ++k) {
            double d1 = std::abs(res[k].P_trans[0] - res[k + 1].P_trans[0]);
            double d2 = std::abs(res[k + 1].P_trans[0] - res[k + 2].P_trans[0]);
            double ratio = values[k + 1] / values[k];
            std::cerr << ' ' << std::log(d1 / d2) / std::log(std::abs(ratio));
        }
        std::cerr << '\n';
    }
    const std::size_t last = with_oracle ? res.size() : res.size() - 1;
    for (std::size_t k = 0; k < last; ++k)
        if (delta[k] <= target) {
            std::cerr << "minimal " << param << " reaching " << target << ": " << values[k] << '\n';
            return 0;
        }
    std::cerr << "no " << param << " value reaches " << target << '\n';
    return 0;
}

int cmd_oracle(const Options& o, int dense_N, const std::string& compare_path, double tol) {
    Run r = resolve(o);
    OracleOptions oo;
    oo.dense_N = dense_N;
    oo.keep_wavefunction = false;
    auto sol = solve_reference(r.problem, oo);
    json j = oracle_to_json(sol, r.problem);
    int code = 0;
    if (!compare_path.empty()) {
        json res = read_json(compare_path);
        ScatteringResult cr;
        try {
            cr.P_refl = res.at("P_refl").get<std::vector<double>>();
            cr.P_trans = res.at("P_trans").get<std::vector<double>>();
            cr.model_name = res.at("problem").at("model").at("name").get<std::string>();
            cr.E = res.at("problem").at("E").get<double>();
        } catch (const json::exception& e) {
            throw ConfigError(std::string("bad result file: ") + e.what());
        }
        auto rep = compare(cr, sol, tol);
        j["compare"] = {{"d_refl", rep.d_refl}, {"d_trans", rep.d_trans}, {"max_defect", rep.max_defect},
                        {"tol", rep.tol}, {"pass", rep.pass}};
        if (!rep.pass) code = 1;
    }
    if (o.out.empty()) std::cout << j.dump(2) << '\n';
    else write_file(out_dir(o.out) / "oracle.json", j.dump(2) + "\n");
    return code;
}

int cmd_validate(const Options& o, double tol) {
    Run r = resolve(o);
    auto rep = validate_problem(r.problem, tol);
    std::cout << rep.summary();
    return rep.ok() ? 0 : 2;
}

int cmd_grid(const Options& o) {
    Run r = resolve(o);
    auto grids = build_grids(r.problem, r.config.N);
    if (o.out.empty()) {
        for (const auto& g : grids) {
            std::cout << "# surface " << g.surface + 1 << ", t_shift " << g.t_shift << '\n';
            write_grid_csv(std::cout, g);
        }
    } else {
        auto dir = out_dir(o.out);
        for (const auto& g : grids) {
            std::ofstream out(dir / ("grid_" + std::to_string(g.surface + 1) + ".csv"));
            write_grid_csv(out, g);
        }
    }
    return 0;
}

// shortest representation that reads back exactly
std::string num(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

int cmd_benchmarks() {
    for (auto b : all_benchmarks()) {
        std::cout << to_string(b) << '\n';
        std::cout << "  params:";
        for (const auto& [k, v] : default_params(b)) std::cout << ' ' << k << '=' << num(v);
        std::cout << '\n';
        for (const auto& p : presets(b))
            std::cout << "  preset '" << p.label << "': E " << num(p.E) << ", N " << p.N << ", window ["
                      << num(p.x_L) << ", " << num(p.x_R) << "], " << to_string(p.integrator)
                      << (p.integrator == Integrator::rk4 ? ", steps/shift " + std::to_string(p.steps_per_shift)
                                                          : ", eps " + num(p.eps))
                      << ", t_max " << num(p.t_max) << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bipolar counter-propagating wave method for 1D multisurface scattering"};
    app.require_subcommand(1);
    Options o;

    auto* solve = app.add_subcommand("solve", "relax one problem to its stationary state");
    add_problem_flags(solve, o);
    add_propagator_flags(solve, o);
    solve->add_option("-o,--out", o.out, "output directory (result.json, history.csv, snapshots.csv)");
    solve->add_flag("--history", o.history, "embed the probability history in result.json");

    EnergyGrid grid;
    int jobs = 0;
    double ppw = 0, traversals = 0;
    bool scan_oracle = false;
    auto* scan = app.add_subcommand("scan", "solve over an energy grid");
    add_problem_flags(scan, o);
    add_propagator_flags(scan, o);
    scan->add_option("--energies", grid.list, "energies (hartree)")->delimiter(',');
    scan->add_option("--energies-cm", grid.list_cm, "energies (cm^-1)")->delimiter(',');
    scan->add_option("--E-min", grid.lo, "range start");
    scan->add_option("--E-max", grid.hi, "range end");
    scan->add_option("--count", grid.count, "range size");
    scan->add_flag("--log", grid.log, "logarithmic spacing");
    scan->add_flag("--range-cm", grid.cm, "range bounds in cm^-1");
    scan->add_option("-j,--jobs", jobs, "concurrent solves (0 = all threads)");
    scan->add_option("--ppw", ppw, "raise N to this many points per intersurface beat wavelength (0 = off)");
    scan->add_option("--traversals", traversals, "raise t_max to this many slowest traversal times (0 = off)");
    scan->add_flag("--oracle", scan_oracle, "add oracle probabilities and defects");
    scan->add_option("-o,--out", o.out, "output directory (scan.csv)");

    std::string param;
    std::vector<double> values;
    double target = 1e-4;
    bool conv_oracle = false;
    auto* conv = app.add_subcommand("converge", "sweep one convergence parameter");
    add_problem_flags(conv, o);
    add_propagator_flags(conv, o);
    conv->add_option("--sweep", param, "N | steps_per_shift | eps | tmax | xl | xr | window")->required();
    conv->add_option("--values", values, "parameter values, coarse to fine")->delimiter(',')->required();
    conv->add_option("--target", target, "accuracy to flag");
    conv->add_flag("--oracle", conv_oracle, "measure against the oracle instead of the last entry");

    int dense_N = 0;
    std::string cmp;
    double cmp_tol = 1e-4;
    auto* orc = app.add_subcommand("oracle", "dense-grid stationary reference solution");
    add_problem_flags(orc, o);
    orc->add_option("--dense-N", dense_N, "fine grid steps (0 = automatic)");
    orc->add_option("--compare", cmp, "result.json to compare against");
    orc->add_option("--tol", cmp_tol, "comparison tolerance");
    orc->add_option("-o,--out", o.out, "output directory (oracle.json)");

    double vtol = 1e-2;
    auto* val = app.add_subcommand("validate", "check a problem's admissibility");
    add_problem_flags(val, o);
    val->add_option("--tol", vtol, "edge tolerance relative to E");

    auto* grd = app.add_subcommand("grid", "write the trajectory grids");
    add_problem_flags(grd, o);
    grd->add_option("--N", o.N, "grid points on surface 1");
    grd->add_option("-o,--out", o.out, "output directory (grid_<i>.csv)");

    auto* bms = app.add_subcommand("benchmarks", "list benchmarks, parameters and presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) return cmd_solve(o);
        if (scan->parsed()) return cmd_scan(o, grid, jobs, ppw, traversals, scan_oracle);
        if (conv->parsed()) return cmd_converge(o, param, values, target, conv_oracle);
        if (orc->parsed()) return cmd_oracle(o, dense_N, cmp, cmp_tol);
        if (val->parsed()) return cmd_validate(o, vtol);
        if (grd->parsed()) return cmd_grid(o);
        if (bms->parsed()) return cmd_benchmarks();
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 1;
    } catch (const std::out_of_range& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
