#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlrd/energy.hpp"
#include "nlrd/errors.hpp"
#include "nlrd/grid.hpp"
#include "nlrd/model.hpp"
#include "nlrd/oracles.hpp"
#include "nlrd/stepper.hpp"
#include "nlrd/tridiag.hpp"

namespace nlrd {

// Resolved front-end configuration. Precedence when resolving: command-line
// overrides > config file > preset > defaults.
struct RunConfig {
    std::string preset;  // empty when none requested
    int J = 400;
    int K = 400;
    double T = 0.2;
    double epsilon = 1e-6;
    double m0 = 1.0;
    bool literal_form = false;
    std::optional<double> m;   // defaults to m0
    double r = 1.0;
    double kappa = 10.0;
    double alpha = 0.0;
    std::optional<double> M1;  // unset: estimated post hoc from the run
    double delta = 1.95;
    std::string output_dir = "out";
    std::optional<int> snapshot_every;  // defaults to max(1, K/10)
    bool verify = false;

    double resolved_m() const { return m ? *m : m0; }
    int resolved_snapshot_every() const {
        if (snapshot_every) return *snapshot_every;
        return std::max(1, K / 10);
    }

    void validate() const {
        if (J < 2) throw ConfigError("J must be >= 2, got " + std::to_string(J));
        if (K < 0) throw ConfigError("K must be >= 0, got " + std::to_string(K));
        if (!(T > 0.0)) throw ConfigError("T must be > 0, got " + std::to_string(T));
        if (!(std::isfinite(delta)))
            throw ConfigError("delta must be finite, got " + std::to_string(delta));
        if (snapshot_every && *snapshot_every < 1)
            throw ConfigError("snapshot_every must be >= 1");
        if (!(resolved_m() > 0.0))
            throw ConfigError(
                "diffusion lower bound m must be > 0; set m explicitly when m0 = 0");
        diffusion_spec().validate();
        reaction_spec().validate();
    }

    DiffusionSpec diffusion_spec() const {
        DiffusionSpec d;
        d.epsilon = epsilon;
        d.m0 = m0;
        d.literal_form = literal_form;
        d.m = resolved_m();
        return d;
    }

    ReactionSpec reaction_spec() const {
        ReactionSpec rs;
        rs.r = r;
        rs.kappa = kappa;
        rs.alpha = alpha;
        rs.M1 = M1 ? *M1 : std::numeric_limits<double>::quiet_NaN();
        return rs;
    }

    SchemeConfig scheme_config() const {
        return SchemeConfig{T, K, build_grid(J), diffusion_spec(), reaction_spec()};
    }
};

inline void apply_preset(RunConfig& cfg, const std::string& name) {
    if (name != "extinction" && name != "persistence")
        throw ConfigError("unknown preset '" + name +
                          "' (available: extinction, persistence)");
    cfg.preset = name;
    cfg.J = 10000;
    cfg.K = 10000;
    cfg.T = 0.2;
    cfg.epsilon = 1e-6;
    cfg.m0 = (name == "extinction") ? 1.0 : 0.1;
    cfg.literal_form = false;
    cfg.r = 1.0;
    cfg.kappa = 10.0;
    cfg.alpha = 0.0;
    cfg.delta = 1.95;
}

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

inline bool parse_bool(const std::string& v, const std::string& key) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("key '" + key + "' expects a boolean (true/false), got '" + v + "'");
}

inline int parse_int(const std::string& v, const std::string& key) {
    int out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError("key '" + key + "' expects an integer, got '" + v + "'");
    return out;
}

inline double parse_double(const std::string& v, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double out = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "' expects a number, got '" + v + "'");
    }
}

inline void apply_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "preset") return;  // handled in a dedicated pass
    if (key == "J") cfg.J = parse_int(value, key);
    else if (key == "K") cfg.K = parse_int(value, key);
    else if (key == "T") cfg.T = parse_double(value, key);
    else if (key == "epsilon") cfg.epsilon = parse_double(value, key);
    else if (key == "m0") cfg.m0 = parse_double(value, key);
    else if (key == "literal_form") cfg.literal_form = parse_bool(value, key);
    else if (key == "m") cfg.m = parse_double(value, key);
    else if (key == "r") cfg.r = parse_double(value, key);
    else if (key == "kappa") cfg.kappa = parse_double(value, key);
    else if (key == "alpha") cfg.alpha = parse_double(value, key);
    else if (key == "M1") cfg.M1 = parse_double(value, key);
    else if (key == "delta") cfg.delta = parse_double(value, key);
    else if (key == "output_dir") cfg.output_dir = value;
    else if (key == "snapshot_every") cfg.snapshot_every = parse_int(value, key);
    else if (key == "verify") cfg.verify = parse_bool(value, key);
    else throw ConfigError("unknown config key '" + key + "'");
}

}  // namespace detail

struct KeyValue {
    std::string key;
    std::string value;
};

// Flat key = value lines; '#' starts a comment; keys match RunConfig fields.
inline std::vector<KeyValue> parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::vector<KeyValue> out;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = detail::trim(line);
        if (stripped.empty()) continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + ":" + std::to_string(lineno) +
                              ": expected 'key = value'");
        KeyValue kv{detail::trim(stripped.substr(0, eq)),
                    detail::trim(stripped.substr(eq + 1))};
        if (kv.key.empty())
            throw ConfigError(path + ":" + std::to_string(lineno) + ": empty key");
        out.push_back(std::move(kv));
    }
    return out;
}

inline KeyValue parse_assignment(const std::string& text) {
    const auto eq = text.find('=');
    if (eq == std::string::npos)
        throw ConfigError("expected key=value, got '" + text + "'");
    return {detail::trim(text.substr(0, eq)), detail::trim(text.substr(eq + 1))};
}

// Precedence: overrides (flags) > file entries > preset > defaults. The
// preset may be named by either layer; the flag wins.
inline RunConfig resolve_config(const std::vector<KeyValue>& file_entries,
                                const std::vector<KeyValue>& overrides) {
    RunConfig cfg;
    std::string preset;
    for (const auto& kv : file_entries)
        if (kv.key == "preset") preset = kv.value;
    for (const auto& kv : overrides)
        if (kv.key == "preset") preset = kv.value;
    if (!preset.empty()) apply_preset(cfg, preset);
    for (const auto& kv : file_entries) detail::apply_key(cfg, kv.key, kv.value);
    for (const auto& kv : overrides) detail::apply_key(cfg, kv.key, kv.value);
    cfg.validate();
    return cfg;
}

// Shortest decimal representation that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline FieldPair initial_state(const RunConfig& cfg) {
    const Grid1D grid = build_grid(cfg.J);
    const double delta = cfg.delta;
    Field u = sample_initial(
        grid, [delta](double x) { return delta * std::sin(std::numbers::pi * x); });
    Field v(grid);
    for (int i = 0; i <= grid.J; ++i) v[i] = -u[i];
    return FieldPair{std::move(u), std::move(v), 0.0};
}

namespace detail {

inline std::string snapshot_name(int k, int K) {
    std::string digits = std::to_string(k);
    const std::size_t width = std::to_string(K).size();
    if (digits.size() < width) digits.insert(0, width - digits.size(), '0');
    return "snap_" + digits + ".csv";
}

inline void write_snapshot(const std::filesystem::path& path, const FieldPair& state) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << "x,u,v\n";
    const Grid1D& g = state.u.grid;
    for (int i = 0; i <= g.J; ++i)
        out << format_double(g.node(i)) << ',' << format_double(state.u[i]) << ','
            << format_double(state.v[i]) << '\n';
}

}  // namespace detail

struct RunArtifacts {
    EnergyTrace trace;
    double w_min = 0.0, w_max = 0.0;
    double M1_observed = 0.0;
    std::optional<DecayFit> fit;
    double eta_pred = 0.0;
    bool decay_condition_met = false;
    double wall_seconds = 0.0;
};

// Full production run: simulate, stream energy.csv and snapshots, fit the
// decay rate, evaluate the decay condition, write run_summary.txt.
// Returns the process exit status (0 on success).
inline int run(const RunConfig& cfg, RunArtifacts* artifacts_out = nullptr,
               std::FILE* log = stdout) {
    cfg.validate();
    const auto t_start = std::chrono::steady_clock::now();
    const std::filesystem::path dir(cfg.output_dir);
    std::filesystem::create_directories(dir);

    const SchemeConfig scheme = cfg.scheme_config();
    const FieldPair state0 = initial_state(cfg);

    std::ofstream energy_csv(dir / "energy.csv", std::ios::binary);
    if (!energy_csv) throw IoError("cannot write " + (dir / "energy.csv").string());
    energy_csv << "t,E,l_u,l_v,max_abs_u,max_abs_v\n";

    RunArtifacts art;
    art.w_min = std::numeric_limits<double>::infinity();
    art.w_max = -std::numeric_limits<double>::infinity();

    std::vector<StepObserver> observers;
    observers.push_back(StepObserver{
        1, [&](int, const FieldPair& s, const StepReport*) {
            art.trace.append(s.t, s);
            energy_csv << format_double(art.trace.times.back()) << ','
                       << format_double(art.trace.energies.back()) << ','
                       << format_double(art.trace.l_u.back()) << ','
                       << format_double(art.trace.l_v.back()) << ','
                       << format_double(art.trace.max_abs_u.back()) << ','
                       << format_double(art.trace.max_abs_v.back()) << '\n';
            for (int i = 1; i < s.u.grid.J; ++i) {
                const double w = s.u[i] - s.v[i];
                art.w_min = std::min(art.w_min, w);
                art.w_max = std::max(art.w_max, w);
            }
        }});
    observers.push_back(StepObserver{
        cfg.resolved_snapshot_every(), [&](int k, const FieldPair& s, const StepReport*) {
            detail::write_snapshot(dir / detail::snapshot_name(k, cfg.K), s);
        }});

    try {
        simulate(state0, scheme, observers);
    } catch (const SimulationError& e) {
        if (log) std::fprintf(log, "run aborted: %s\n", e.what());
        return 1;
    }
    energy_csv.close();

    // Post-hoc decay diagnostics: M1 over the
    // observed solution range unless the user asserted one.
    if (cfg.M1) {
        art.M1_observed = *cfg.M1;
    } else if (art.w_max - art.w_min > 0.0) {
        const ReactionSpec rs = cfg.reaction_spec();
        art.M1_observed = lipschitz_estimate([&rs](double w) { return rs.f(w); },
                                             art.w_min, art.w_max, 1000);
    } else {
        art.M1_observed = 0.0;
    }
    const double c_p = poincare_constant();
    art.decay_condition_met =
        decay_condition(cfg.resolved_m(), art.M1_observed, cfg.alpha, c_p);
    art.eta_pred = predicted_decay_rate(cfg.resolved_m(), art.M1_observed, cfg.alpha, c_p);

    const auto [w_begin, w_end] = default_fit_window(art.trace);
    if (w_begin < w_end) art.fit = fit_decay_rate(art.trace, w_begin, w_end);

    art.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();

    std::ofstream summary(dir / "run_summary.txt", std::ios::binary);
    if (!summary) throw IoError("cannot write " + (dir / "run_summary.txt").string());
    auto line = [&](const std::string& k, const std::string& v) {
        summary << k << " = " << v << '\n';
        if (log) std::fprintf(log, "%s = %s\n", k.c_str(), v.c_str());
    };
    line("C", art.fit ? format_double(art.fit->C) : "n/a");
    line("eta", art.fit ? format_double(art.fit->eta) : "n/a");
    line("fit_rmse", art.fit ? format_double(art.fit->rmse) : "n/a");
    line("M1_observed", format_double(art.M1_observed));
    line("decay_condition_threshold",
         format_double(2.0 * c_p * (art.M1_observed + cfg.alpha)));
    line("decay_condition", art.decay_condition_met ? "satisfied" : "not_satisfied");
    line("eta_pred", art.eta_pred > 0.0 ? format_double(art.eta_pred) : "n/a");
    line("wall_time_s", format_double(art.wall_seconds));

    if (artifacts_out) *artifacts_out = std::move(art);
    return 0;
}

// Cross-checks a configuration against the independent reference computations
// at a scaled-down grid. Prints one pass/fail line per check; returns true
// iff every executed check passed.
inline bool verify(const RunConfig& cfg, std::FILE* log = stdout) {
    cfg.validate();
    bool all_pass = true;
    auto report = [&](const char* name, bool pass, const std::string& detail) {
        if (log) std::fprintf(log, "[%s] %s: %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
        all_pass = all_pass && pass;
    };

    {
        std::mt19937_64 rng(20260809u);
        std::uniform_real_distribution<double> off(-1.0, 1.0);
        std::uniform_real_distribution<double> bump(0.1, 2.0);
        std::uniform_int_distribution<std::size_t> size(2, 120);
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const std::size_t n = size(rng);
            TridiagonalSystem s;
            s.sub.resize(n - 1);
            s.sup.resize(n - 1);
            s.diag.resize(n);
            s.rhs.resize(n);
            for (auto& v : s.sub) v = off(rng);
            for (auto& v : s.sup) v = off(rng);
            for (auto& v : s.rhs) v = off(rng);
            for (std::size_t i = 0; i < n; ++i) {
                double row = bump(rng);
                if (i > 0) row += std::abs(s.sub[i - 1]);
                if (i + 1 < n) row += std::abs(s.sup[i]);
                s.diag[i] = row;
            }
            DenseSystem d;
            d.n = n;
            d.matrix.assign(n * n, 0.0);
            d.rhs = s.rhs;
            for (std::size_t i = 0; i < n; ++i) {
                d.at(i, i) = s.diag[i];
                if (i > 0) d.at(i, i - 1) = s.sub[i - 1];
                if (i + 1 < n) d.at(i, i + 1) = s.sup[i];
            }
            const auto xt = thomas_solve(s);
            const auto xd = dense_solve(d);
            double scale = 0.0, gap = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                scale = std::max(scale, std::abs(xd[i]));
                gap = std::max(gap, std::abs(xt[i] - xd[i]));
            }
            worst = std::max(worst, gap / std::max(scale, 1e-300));
        }
        report("tridiagonal vs dense oracle", worst <= 1e-12,
               "max relative gap " + format_double(worst) + " (tol 1e-12)");
    }

    {
        RunConfig small = cfg;
        small.J = std::min(cfg.J, 200);
        const Grid1D grid = build_grid(small.J);
        const double dt_base = grid.dx * grid.dx / 4.0;
        const int K_ref = static_cast<int>(std::ceil(cfg.T / dt_base));
        SchemeConfig scheme = small.scheme_config();
        scheme.K = K_ref;
        const FieldPair state0 = initial_state(small);
        const FieldPair implicit_final = simulate(state0, scheme);
        const ExplicitRunResult explicit_final =
            explicit_reference_run(state0, scheme, dt_base);
        double gap = 0.0;
        for (int i = 0; i <= grid.J; ++i)
            gap = std::max({gap, std::abs(implicit_final.u[i] - explicit_final.state.u[i]),
                            std::abs(implicit_final.v[i] - explicit_final.state.v[i])});
        report("implicit vs explicit integrator", gap <= 1e-2,
               "Linf gap " + format_double(gap) + " at J'=" + std::to_string(small.J) +
                   ", base dt " + format_double(dt_base) + " (" +
                   std::to_string(explicit_final.steps) + " explicit steps, tol 1e-2)");
    }

    {
        const DiffusionSpec d = cfg.diffusion_spec();
        const FieldPair probe = initial_state(cfg);
        const double xi0 = std::abs(nonlocal_form(probe.u));
        double a_min = std::numeric_limits<double>::infinity(), a_max = 0.0;
        for (const double xi : {0.0, 0.5 * xi0, xi0, 2.0 * xi0, -xi0}) {
            const double a = diffusion_coefficient(xi, d);
            a_min = std::min(a_min, a);
            a_max = std::max(a_max, a);
        }
        const bool constant_a = std::isfinite(a_max) && (a_max - a_min) <= 1e-9 * a_max;
        if (!constant_a || cfg.r != 0.0) {
            if (log)
                std::fprintf(log,
                             "[SKIP] exact heat mode: requires constant diffusion and r = 0\n");
        } else {
            const int Jp = std::min(cfg.J, 200);
            RunConfig small = cfg;
            small.J = Jp;
            SchemeConfig scheme = small.scheme_config();
            scheme.K = std::max(cfg.K, static_cast<int>(std::ceil(cfg.T * 20000.0)));
            const FieldPair state0 = initial_state(small);
            const FieldPair final_state = simulate(state0, scheme);
            const double a = a_max;
            double err = 0.0;
            const Grid1D grid = build_grid(Jp);
            for (int i = 0; i <= Jp; ++i)
                err = std::max(err, std::abs(final_state.u[i] -
                                             exact_heat_mode(grid.node(i), cfg.T, a,
                                                             cfg.delta)));
            report("exact heat mode", err <= 1e-3,
                   "Linf error " + format_double(err) + " at J'=" + std::to_string(Jp) +
                       " (tol 1e-3)");
        }
    }

    return all_pass;
}

}  // namespace nlrd
