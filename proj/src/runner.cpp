#include "vortexsol/runner.hpp"

#include "vortexsol/errors.hpp"
#include "vortexsol/optimizer.hpp"
#include "vortexsol/quadrature.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace vortexsol {

namespace {

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used == value.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw ParameterError("config: '" + key + "' expects a number, got '" + value + "'");
}

long long parse_int(const std::string& key, const std::string& value)
{
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used == value.size()) {
            return v;
        }
    } catch (const std::exception&) {
    }
    throw ParameterError("config: '" + key + "' expects an integer, got '" + value + "'");
}

template <class T>
json opt_json(const std::optional<T>& v)
{
    return v ? json(*v) : json(nullptr);
}

void write_text(const fs::path& path, const std::string& text)
{
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    out << text;
}

std::shared_ptr<const SpectralBasis> make_basis(const RunConfig& config)
{
    auto grid = std::make_shared<const RadialGrid>(
        build_grid(config.params.R, config.panels, config.order));
    return std::make_shared<const SpectralBasis>(grid, config.basis_size);
}

json failure_json(const MinimizerResult& last)
{
    return {{"iterations", last.iterations},
            {"pg_norm", last.pg_norm},
            {"stop_reason", last.stop_reason},
            {"objective", last.value},
            {"a", std::vector<double>(last.x.data(), last.x.data() + last.x.size())}};
}

std::string label_for(const RunConfig& config)
{
    if (config.mode == RunMode::direct) {
        return "direct_lambda_" + fmt(config.params.lambda.value_or(0.0)) + "_m_" +
               std::to_string(config.params.m);
    }
    return "solve_n0_" + fmt(config.params.N0.value_or(0.0)) + "_m_" +
           std::to_string(config.params.m);
}

// Solve one constrained or direct problem on a prebuilt basis and fill the record.
void solve_into(ResultRecord& rec, const SpectralBasis& basis, const fs::path& dir,
                const std::string& label)
{
    const RunConfig& config = rec.config;
    const auto t0 = std::chrono::steady_clock::now();
    try {
        SolitonSolution sol = config.mode == RunMode::direct
                                  ? minimize_direct(basis, config.params, config.solver)
                                  : minimize_constrained(basis, config.params, config.solver);
        rec.bounds = make_bounds_report(sol.m, sol.R,
                                        sol.trivial ? std::nullopt : std::optional(sol.N0),
                                        sol.lambda);
        if (sol.lambda > 0.0 && !sol.trivial) {
            rec.decay = decay_fit(sol);
        }
        if (!sol.positivity_ok || !sol.bounds_ok) {
            rec.exit_code = kExitValidation;
            rec.error = !sol.positivity_ok ? "validation: profile changes sign"
                                           : "validation: frequency shift outside analytic bounds";
        }
        rec.solution = std::move(sol);
    } catch (const ConvergenceError& e) {
        rec.exit_code = kExitConvergence;
        rec.error = e.what();
        rec.failure = failure_json(e.last());
    }
    rec.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (!dir.empty()) {
        if (rec.solution) {
            const fs::path csv = dir / (label + "_profile.csv");
            write_text(csv, profile_csv(*rec.solution));
            rec.profile_csv_path = csv.string();
        }
        const fs::path rp = dir / (label + ".json");
        rec.record_path = rp.string();
        write_text(rp, record_to_json(rec).dump(2) + "\n");
        write_text(dir / (label + "_diagnostics.json"), diagnostics_to_json(rec).dump(2) + "\n");
    }
}

} // namespace

std::string to_string(RunMode mode)
{
    switch (mode) {
    case RunMode::solve: return "solve";
    case RunMode::direct: return "direct";
    case RunMode::bounds: return "bounds";
    case RunMode::sweep: return "sweep";
    }
    return "solve";
}

RunMode parse_run_mode(const std::string& text)
{
    if (text == "solve") return RunMode::solve;
    if (text == "direct") return RunMode::direct;
    if (text == "bounds") return RunMode::bounds;
    if (text == "sweep") return RunMode::sweep;
    throw ParameterError("unknown mode '" + text + "'");
}

std::string to_string(SweepTable table)
{
    return table == SweepTable::photon ? "photon" : "charge";
}

SweepTable parse_sweep_table(const std::string& text)
{
    if (text == "photon") return SweepTable::photon;
    if (text == "charge") return SweepTable::charge;
    throw ParameterError("unknown sweep table '" + text + "' (expected photon|charge)");
}

void apply_setting(RunConfig& c, const std::string& key, const std::string& value)
{
    if (key == "mode") c.mode = parse_run_mode(value);
    else if (key == "n0") c.params.N0 = parse_double(key, value);
    else if (key == "lambda") c.params.lambda = parse_double(key, value);
    else if (key == "m") c.params.m = static_cast<int>(parse_int(key, value));
    else if (key == "R") c.params.R = parse_double(key, value);
    else if (key == "basis") c.basis_size = static_cast<int>(parse_int(key, value));
    else if (key == "panels") c.panels = static_cast<int>(parse_int(key, value));
    else if (key == "order") c.order = static_cast<int>(parse_int(key, value));
    else if (key == "seed") c.solver.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else if (key == "init") c.solver.init = parse_init_kind(value);
    else if (key == "tol") c.solver.grad_tol = parse_double(key, value);
    else if (key == "max_iters") c.solver.max_iters = static_cast<int>(parse_int(key, value));
    else if (key == "jobs") c.jobs = static_cast<int>(parse_int(key, value));
    else if (key == "table") c.table = parse_sweep_table(value);
    else if (key == "out") c.out_dir = value;
    else throw ParameterError("config: unknown key '" + key + "'");
}

void apply_config_text(RunConfig& config, std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        const std::string body = trim(line);
        if (body.empty()) {
            continue;
        }
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ParameterError("config line " + std::to_string(lineno) + ": expected key = value");
        }
        apply_setting(config, trim(std::string_view(body).substr(0, eq)),
                      trim(std::string_view(body).substr(eq + 1)));
    }
}

void apply_config_file(RunConfig& config, const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ParameterError("cannot open config file " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    apply_config_text(config, ss.str());
}

json config_to_json(const RunConfig& c)
{
    return {{"mode", to_string(c.mode)},
            {"n0", opt_json(c.params.N0)},
            {"lambda", opt_json(c.params.lambda)},
            {"m", c.params.m},
            {"R", c.params.R},
            {"basis", c.basis_size},
            {"panels", c.panels},
            {"order", c.order},
            {"seed", c.solver.seed},
            {"init", to_string(c.solver.init)},
            {"tol", c.solver.grad_tol},
            {"max_iters", c.solver.max_iters},
            {"jobs", c.jobs},
            {"table", to_string(c.table)},
            {"out", c.out_dir}};
}

RunConfig config_from_json(const json& j)
{
    RunConfig c;
    c.mode = parse_run_mode(j.at("mode").get<std::string>());
    if (!j.at("n0").is_null()) c.params.N0 = j.at("n0").get<double>();
    if (!j.at("lambda").is_null()) c.params.lambda = j.at("lambda").get<double>();
    c.params.m = j.at("m").get<int>();
    c.params.R = j.at("R").get<double>();
    c.basis_size = j.at("basis").get<int>();
    c.panels = j.at("panels").get<int>();
    c.order = j.at("order").get<int>();
    c.solver.seed = j.at("seed").get<std::uint64_t>();
    c.solver.init = parse_init_kind(j.at("init").get<std::string>());
    c.solver.grad_tol = j.at("tol").get<double>();
    c.solver.max_iters = j.at("max_iters").get<int>();
    c.jobs = j.at("jobs").get<int>();
    c.table = parse_sweep_table(j.at("table").get<std::string>());
    c.out_dir = j.at("out").get<std::string>();
    return c;
}

json bounds_to_json(const BoundsReport& rep)
{
    json j = {{"m", rep.m},
              {"R", rep.R},
              {"N0", opt_json(rep.N0)},
              {"lambda", opt_json(rep.lambda)},
              {"r0", rep.r0},
              {"f_max", rep.f_max},
              {"necessary_upper", rep.necessary_upper},
              {"necessary_ok", opt_json(rep.necessary_ok)},
              {"k_max", rep.k_max},
              {"b0", rep.b0},
              {"lambda_max_direct", rep.lambda_max_direct},
              {"lambda_limit_direct", rep.lambda_limit_direct}};
    if (rep.photon) {
        const auto& t = *rep.photon;
        j["small_photon_excluded"] = t.small_photon_excluded;
        j["small_photon_hypothesis"] = t.hypothesis_holds;
        j["negative_lambda_forced"] = t.negative_lambda_forced;
        j["charge_threshold"] = t.charge_threshold;
        j["tent_b"] = t.tent_b;
        j["lambda_lower"] = t.lambda_lower;
    } else {
        j["small_photon_excluded"] = nullptr;
        j["negative_lambda_forced"] = nullptr;
        j["lambda_lower"] = nullptr;
    }
    if (rep.direct) {
        j["direct_exists_region"] = {{"lambda_max", rep.direct->lambda_max},
                                     {"R_min", rep.direct->R_min},
                                     {"R_min_theorem", rep.direct->R_min_theorem},
                                     {"radius_ok", opt_json(rep.direct_radius_ok)}};
    } else {
        j["direct_exists_region"] = nullptr;
    }
    return j;
}

json decay_to_json(const DecayFit& fit)
{
    return {{"available", fit.available},
            {"fitted_rate", fit.fitted_rate},
            {"C_fit", fit.C_fit},
            {"fit_window", {fit.window_lo, fit.window_hi}},
            {"samples_used", fit.samples_used},
            {"required_rate", fit.required_rate},
            {"rate_ok", fit.rate_ok}};
}

std::string bounds_to_text(const BoundsReport& rep)
{
    std::ostringstream os;
    os << "inputs: m = " << rep.m << ", R = " << fmt(rep.R);
    if (rep.N0) os << ", N0 = " << fmt(*rep.N0);
    if (rep.lambda) os << ", lambda = " << fmt(*rep.lambda);
    os << "\n";
    os << "r0 (first zero of J0)          = " << fmt(rep.r0) << "\n";
    os << "necessary upper bound on lambda = " << fmt(rep.necessary_upper)
       << "  (f_max - (r0^2 + m^2)/R^2, f_max = " << fmt(rep.f_max) << ")\n";
    if (rep.necessary_ok) {
        os << "  lambda within (0, bound]: " << (*rep.necessary_ok ? "yes" : "no") << "\n";
    }
    os << "k_max = " << fmt(rep.k_max) << " at b0 = " << fmt(rep.b0) << "\n";
    os << "direct existence: lambda < 3/2 k_max = " << fmt(rep.lambda_max_direct)
       << " (limit 3 k_max = " << fmt(rep.lambda_limit_direct) << ")\n";
    if (rep.direct) {
        os << "  R_min = " << fmt(rep.direct->R_min_theorem) << " (6(1+m^2(2ln2-1))/lambda form), "
           << fmt(rep.direct->R_min) << " (12/(lambda delta) form, delta = 1)\n";
        os << "  R satisfies the radius condition: " << (*rep.direct_radius_ok ? "yes" : "no") << "\n";
    }
    if (rep.photon) {
        const auto& t = *rep.photon;
        os << (t.small_photon_excluded ? "small-photon-number solutions excluded (N0 <= 1/2)\n"
                                       : "small-photon-number exclusion: not applicable\n");
        os << "negative lambda forced when |m| >= N0/(2 pi) = " << fmt(t.charge_threshold) << ": "
           << (t.negative_lambda_forced ? "yes" : "no") << "\n";
        os << "lower bound on lambda = " << fmt(t.lambda_lower) << " (tent b = " << fmt(t.tent_b)
           << ")\n";
    }
    return os.str();
}

json record_to_json(const ResultRecord& rec)
{
    json j;
    j["config"] = config_to_json(rec.config);
    const auto* s = rec.solution ? &*rec.solution : nullptr;
    const bool constrained = s && s->mode == SolveMode::constrained;
    j["lambda"] = s ? json(s->lambda) : json(nullptr);
    j["multiplier_raw"] = constrained ? json(s->multiplier_raw) : json(nullptr);
    j["A_max"] = s ? json(s->A_max) : json(nullptr);
    j["N0"] = s ? json(s->N0) : json(nullptr);
    j["m"] = rec.config.params.m;
    j["R"] = rec.config.params.R;
    j["J_value"] = s ? json(s->J_value) : json(nullptr);
    j["I_value"] = s ? json(s->I_value) : json(nullptr);
    j["residual_weak"] = s ? json(s->residual_weak) : json(nullptr);
    j["iterations"] = s ? json(s->iterations) : json(nullptr);
    j["positivity_ok"] = s ? json(s->positivity_ok) : json(nullptr);
    j["bounds"] = rec.bounds ? bounds_to_json(*rec.bounds) : json(nullptr);
    j["decay"] = rec.decay ? decay_to_json(*rec.decay) : json(nullptr);
    j["profile_csv_path"] = rec.profile_csv_path;
    j["version"] = kVersion;
    return j;
}

json diagnostics_to_json(const ResultRecord& rec)
{
    const auto* s = rec.solution ? &*rec.solution : nullptr;
    json d;
    if (s) {
        d["photon_number"] = s->photon_number;
        d["trivial"] = s->trivial;
        d["bounds_ok"] = s->bounds_ok;
        d["lambda_from_multiplier"] = s->lambda_from_multiplier;
        d["r_at_max"] = s->r_at_max;
        d["min_A"] = s->min_A;
        d["pg_norm"] = s->pg_norm;
        d["residual_strong"] = s->residual_strong;
        d["stop_reason"] = s->stop_reason;
        d["coefficients"] = std::vector<double>(s->a.data(), s->a.data() + s->a.size());
    }
    d["wall_clock_s"] = rec.wall_clock_s;
    d["platform"] = platform_note();
    d["exit_code"] = rec.exit_code;
    d["error"] = rec.error.empty() ? json(nullptr) : json(rec.error);
    if (!rec.failure.is_null()) {
        d["last_iterate"] = rec.failure;
    }
    return d;
}

std::string profile_csv(const SolitonSolution& sol)
{
    std::string out = "r,A\n";
    for (std::size_t i = 0; i < sol.profile_r.size(); ++i) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%.10g,%.12g\n", sol.profile_r[i], sol.profile_A[i]);
        out += buf;
    }
    return out;
}

std::string platform_note()
{
    std::string note;
#if defined(__clang__)
    note = "clang " __clang_version__;
#elif defined(__GNUC__)
    note = "gcc " __VERSION__;
#else
    note = "unknown compiler";
#endif
#if defined(__linux__)
    note += ", linux";
#elif defined(__APPLE__)
    note += ", macos";
#elif defined(_WIN32)
    note += ", windows";
#endif
    return note;
}

ResultRecord run_solve(const RunConfig& config)
{
    if (!config.params.N0) {
        throw ParameterError("solve: --n0 is required");
    }
    ResultRecord rec;
    rec.config = config;
    rec.config.mode = RunMode::solve;
    const auto basis = make_basis(rec.config);
    const fs::path dir = config.out_dir.empty() ? fs::path() : fs::path(config.out_dir);
    solve_into(rec, *basis, dir, label_for(rec.config));
    return rec;
}

ResultRecord run_direct(const RunConfig& config)
{
    if (!config.params.lambda) {
        throw ParameterError("direct: --lambda is required");
    }
    ResultRecord rec;
    rec.config = config;
    rec.config.mode = RunMode::direct;
    const auto basis = make_basis(rec.config);
    const fs::path dir = config.out_dir.empty() ? fs::path() : fs::path(config.out_dir);
    solve_into(rec, *basis, dir, label_for(rec.config));
    return rec;
}

ResultRecord run_bounds(const RunConfig& config)
{
    ResultRecord rec;
    rec.config = config;
    rec.config.mode = RunMode::bounds;
    rec.bounds = make_bounds_report(config.params.m, config.params.R, config.params.N0,
                                    config.params.lambda);
    if (!config.out_dir.empty()) {
        const fs::path rp = fs::path(config.out_dir) /
                            ("bounds_m_" + std::to_string(config.params.m) + "_R_" +
                             fmt(config.params.R) + ".json");
        rec.record_path = rp.string();
        json j = {{"config", config_to_json(rec.config)},
                  {"bounds", bounds_to_json(*rec.bounds)},
                  {"version", kVersion}};
        write_text(rp, j.dump(2) + "\n");
    }
    return rec;
}

std::vector<double> sweep_values(SweepTable table)
{
    if (table == SweepTable::photon) {
        return {50, 100, 500, 1000, 2500, 5000};
    }
    return {1, 2, 3, 4, 5};
}

std::string summary_csv(SweepTable table, const std::vector<ResultRecord>& cells)
{
    std::string out = table == SweepTable::photon ? "n0,lambda,a_max\n" : "m,lambda,a_max\n";
    for (const auto& rec : cells) {
        out += table == SweepTable::photon ? fmt(rec.config.params.N0.value_or(0.0))
                                           : std::to_string(rec.config.params.m);
        if (rec.solution) {
            out += "," + fmt(rec.solution->lambda) + "," + fmt(rec.solution->A_max) + "\n";
        } else {
            out += ",nan,nan\n";
        }
    }
    return out;
}

SweepResult run_sweep(const RunConfig& config)
{
    RunConfig base = config;
    base.mode = RunMode::sweep;
    if (base.table == SweepTable::charge && !base.params.N0) {
        base.params.N0 = 500.0;
    }

    const auto values = sweep_values(base.table);
    SweepResult result;
    result.cells.resize(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        RunConfig cell = base;
        cell.mode = RunMode::solve;
        if (base.table == SweepTable::photon) {
            cell.params.N0 = values[i];
            result.cells[i].cell_label = "n0_" + fmt(values[i]);
        } else {
            cell.params.m = static_cast<int>(values[i]);
            result.cells[i].cell_label = "m_" + std::to_string(cell.params.m);
        }
        result.cells[i].config = cell;
    }

    const auto basis = make_basis(base);
    const fs::path dir = base.out_dir.empty()
                             ? fs::path()
                             : fs::path(base.out_dir) / ("sweep_" + to_string(base.table));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next++; i < result.cells.size(); i = next++) {
            auto& rec = result.cells[i];
            try {
                solve_into(rec, *basis, dir, "cell_" + rec.cell_label);
            } catch (const std::exception& e) {
                rec.exit_code = kExitParse;
                rec.error = e.what();
            }
        }
    };
    const int jobs = std::max(1, std::min<int>(base.jobs, static_cast<int>(values.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < jobs; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& th : pool) {
        th.join();
    }

    result.summary_csv = summary_csv(base.table, result.cells);
    if (!dir.empty()) {
        const fs::path sp = fs::path(base.out_dir) / (to_string(base.table) + "_summary.csv");
        write_text(sp, result.summary_csv);
        result.summary_path = sp.string();
    }
    for (const auto& rec : result.cells) {
        result.exit_code = std::max(result.exit_code, rec.exit_code);
    }
    return result;
}

} // namespace vortexsol
