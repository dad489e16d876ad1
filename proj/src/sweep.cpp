#include "modeinv/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "modeinv/errors.hpp"
#include "modeinv/kernels.hpp"

namespace modeinv::sweep {

namespace {

constexpr const char* tool_version = "modeinv 1.0";

std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

int thread_count(int points)
{
    int n = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("MODEINV_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0)
            n = parsed;
    }
    return std::clamp(n, 1, std::max(1, points));
}

void parallel_for(int count, const std::function<void(int)>& fn)
{
    const int workers = thread_count(count);
    if (workers == 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                    fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
                next.store(count);
            }
        });
    }
    for (auto& t : pool)
        t.join();
    for (const auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

const std::vector<std::string>& ignorable_keys()
{
    static const std::vector<std::string> keys = {
        "tool_version", "recipe", "generated_at", "baseline_p", "fit_slope", "family"};
    return keys;
}

} // namespace

fock::FieldState make_state(const StateSpec& s)
{
    if (s.kind == "fock")
        return fock::Fock{s.n};
    if (s.kind == "coherent")
        return fock::Coherent{std::polar(s.alpha_abs, s.alpha_arg)};
    if (s.kind == "squeezed_vacuum")
        return fock::SqueezedVacuum{fock::SqueezeParams::make(s.r, s.phi)};
    if (s.kind == "squeezed_coherent")
        return fock::SqueezedCoherent{fock::SqueezeParams::make(s.r, s.phi),
                                      std::polar(s.alpha_abs, s.alpha_arg)};
    throw ConfigError("unknown state kind '" + s.kind + "'");
}

namespace {

double to_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size())
            throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a number");
    }
}

int to_int(const std::string& key, const std::string& v)
{
    const double x = to_double(key, v);
    if (x != std::floor(x))
        throw ConfigError("key '" + key + "': '" + v + "' is not an integer");
    return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v)
{
    if (v == "true")
        return true;
    if (v == "false")
        return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + v + "'");
}

void apply_state_key(StateSpec& s, const std::string& field, const std::string& key,
                     const std::string& v)
{
    if (field == "kind")
        s.kind = v;
    else if (field == "n")
        s.n = to_int(key, v);
    else if (field == "alpha_abs")
        s.alpha_abs = to_double(key, v);
    else if (field == "alpha_arg")
        s.alpha_arg = to_double(key, v);
    else if (field == "r")
        s.r = to_double(key, v);
    else if (field == "phi")
        s.phi = to_double(key, v);
    else
        throw ConfigError("unknown state field '" + key + "'");
}

} // namespace

SweepSpec parse_spec(const std::map<std::string, std::string>& kv)
{
    SweepSpec s;
    s.reference.kind = "coherent";
    s.reference.alpha_abs = 1.0;

    for (const auto& [key, v] : kv) {
        if (std::find(ignorable_keys().begin(), ignorable_keys().end(), key)
            != ignorable_keys().end())
            continue;
        if (key == "observable")
            s.observable = v;
        else if (key == "param")
            s.param = v;
        else if (key == "min")
            s.min = to_double(key, v);
        else if (key == "max")
            s.max = to_double(key, v);
        else if (key == "points")
            s.points = to_int(key, v);
        else if (key == "scale")
            s.scale = v;
        else if (key.rfind("target.", 0) == 0)
            apply_state_key(s.target, key.substr(7), key, v);
        else if (key.rfind("reference.", 0) == 0)
            apply_state_key(s.reference, key.substr(10), key, v);
        else if (key == "L")
            s.L = to_double(key, v);
        else if (key == "beta")
            s.beta = to_int(key, v);
        else if (key == "resonant")
            s.resonant = to_bool(key, v);
        else if (key == "Omega")
            s.Omega = to_double(key, v);
        else if (key == "v_si")
            s.v_si = to_double(key, v);
        else if (key == "lambda")
            s.lambda = to_double(key, v);
        else if (key == "rel_tol")
            s.rel_tol = to_double(key, v);
        else if (key == "epsilon_si")
            s.epsilon_si = to_double(key, v);
        else if (key == "res_kind")
            s.res_kind = v;
        else if (key == "res_m")
            s.res_m = to_int(key, v);
        else if (key == "res_delta_alpha")
            s.res_delta_alpha = to_double(key, v);
        else if (key == "res_delta_r")
            s.res_delta_r = to_double(key, v);
        else if (key == "res_delta_psi")
            s.res_delta_psi = to_double(key, v);
        else if (key == "output")
            s.output = v;
        else if (key == "svg")
            s.svg = to_bool(key, v);
        else
            throw ConfigError("unknown key '" + key + "'");
    }
    return s;
}

SweepSpec parse_spec_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open spec file '" + path + "'");
    std::map<std::string, std::string> kv;
    std::string line;
    int lineno = 0;
    auto trim = [](std::string t) {
        const auto b = t.find_first_not_of(" \t\r");
        const auto e = t.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : t.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        std::string stripped = line;
        const bool echoed = stripped.rfind("#", 0) == 0;
        if (echoed) {
            // a metadata echo line ("# key = value") re-parses directly;
            // anything else leading with '#' is a comment
            stripped = trim(stripped.substr(1));
            const auto eq = stripped.find('=');
            if (eq == std::string::npos
                || trim(stripped.substr(0, eq)).find(' ') != std::string::npos)
                continue;
        } else {
            const auto hash = stripped.find('#');
            if (hash != std::string::npos)
                stripped = stripped.substr(0, hash); // trailing comment
            stripped = trim(stripped);
        }
        if (stripped.empty())
            continue;
        const auto eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string val = trim(stripped.substr(eq + 1));
        if (key.empty() || val.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        kv[key] = val;
    }
    return parse_spec(kv);
}

std::vector<std::pair<std::string, std::string>> spec_to_kv(const SweepSpec& s)
{
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("observable", s.observable);
    kv.emplace_back("param", s.param);
    kv.emplace_back("min", fmt(s.min));
    kv.emplace_back("max", fmt(s.max));
    kv.emplace_back("points", std::to_string(s.points));
    kv.emplace_back("scale", s.scale);
    auto state_kv = [&](const char* prefix, const StateSpec& st) {
        kv.emplace_back(std::string(prefix) + ".kind", st.kind);
        kv.emplace_back(std::string(prefix) + ".n", std::to_string(st.n));
        kv.emplace_back(std::string(prefix) + ".alpha_abs", fmt(st.alpha_abs));
        kv.emplace_back(std::string(prefix) + ".alpha_arg", fmt(st.alpha_arg));
        kv.emplace_back(std::string(prefix) + ".r", fmt(st.r));
        kv.emplace_back(std::string(prefix) + ".phi", fmt(st.phi));
    };
    state_kv("target", s.target);
    state_kv("reference", s.reference);
    kv.emplace_back("L", fmt(s.L));
    kv.emplace_back("beta", std::to_string(s.beta));
    kv.emplace_back("resonant", s.resonant ? "true" : "false");
    kv.emplace_back("Omega", fmt(s.Omega));
    kv.emplace_back("v_si", fmt(s.v_si));
    kv.emplace_back("lambda", fmt(s.lambda));
    kv.emplace_back("rel_tol", fmt(s.rel_tol));
    kv.emplace_back("epsilon_si", fmt(s.epsilon_si));
    kv.emplace_back("res_kind", s.res_kind);
    kv.emplace_back("res_m", std::to_string(s.res_m));
    kv.emplace_back("res_delta_alpha", fmt(s.res_delta_alpha));
    kv.emplace_back("res_delta_r", fmt(s.res_delta_r));
    kv.emplace_back("res_delta_psi", fmt(s.res_delta_psi));
    return kv;
}

namespace {

std::vector<double> make_grid(const SweepSpec& s)
{
    if (s.points < 2)
        throw ConfigError("grid needs at least 2 points");
    if (!(s.max > s.min))
        throw ConfigError("grid needs max > min");
    if (s.scale == "log" && !(s.min > 0.0))
        throw ConfigError("log grid needs positive bounds");
    if (s.scale != "log" && s.scale != "linear")
        throw ConfigError("scale must be linear or log");

    std::vector<double> g(static_cast<std::size_t>(s.points));
    for (int i = 0; i < s.points; ++i) {
        const double f = static_cast<double>(i) / (s.points - 1);
        g[static_cast<std::size_t>(i)] =
            s.scale == "log" ? std::exp(std::log(s.min) + f * (std::log(s.max) - std::log(s.min)))
                             : s.min + f * (s.max - s.min);
    }
    return g;
}

CavitySetup make_setup(const SweepSpec& s)
{
    CavitySetup c;
    c.L = s.L;
    c.beta = s.beta;
    c.resonant = s.resonant;
    c.Omega = s.Omega;
    c.v = convert_speed(s.v_si);
    c.lambda = s.lambda;
    c.validate();
    return c;
}

bool param_is_state_only(const std::string& p)
{
    return p == "alpha_abs" || p == "Psi" || p == "r" || p == "n" || p == "alpha_R";
}

void apply_param(SweepSpec& s, double x)
{
    if (s.param == "alpha_abs")
        s.target.alpha_abs = x;
    else if (s.param == "Psi") {
        s.target.alpha_arg = 0.5 * x; // Psi = 2 theta - phi realized with phi = 0
        s.target.phi = 0.0;
    } else if (s.param == "r")
        s.target.r = x;
    else if (s.param == "n") {
        s.target.kind = "fock";
        s.target.n = static_cast<int>(std::lround(x));
    } else if (s.param == "alpha_R")
        s.reference.alpha_abs = x;
    else if (s.param == "lambda")
        s.lambda = x;
    else if (s.param == "v_si")
        s.v_si = x;
    else if (s.param == "Omega") {
        if (s.resonant)
            throw ConfigError("sweeping Omega requires resonant = false");
        s.Omega = x;
    } else if (s.param == "epsilon_si") {
        s.epsilon_si = x;
    } else
        throw ConfigError("unknown swept parameter '" + s.param + "'");
}

pert::ResolutionQuery make_query(const SweepSpec& s, double x)
{
    if (s.res_kind == "fock_gap") {
        if (s.param != "n")
            throw ConfigError("fock_gap resolution sweeps param n");
        return pert::FockGap{static_cast<int>(std::lround(x)), s.res_m};
    }
    if (s.res_kind == "coherent_gap") {
        if (s.param != "alpha_abs")
            throw ConfigError("coherent_gap resolution sweeps param alpha_abs");
        return pert::CoherentGap{x, s.res_delta_alpha};
    }
    if (s.res_kind == "squeeze_gap") {
        if (s.param != "r")
            throw ConfigError("squeeze_gap resolution sweeps param r");
        return pert::SqueezeGap{x, s.res_delta_r};
    }
    if (s.res_kind == "rel_phase_gap") {
        if (s.param != "Psi")
            throw ConfigError("rel_phase_gap resolution sweeps param Psi");
        return pert::RelPhaseGap{x, s.res_delta_psi, s.target.r, s.target.alpha_abs};
    }
    throw ConfigError("unknown res_kind '" + s.res_kind + "'");
}

struct PointValues {
    double value = std::nan("");
    double p_target = std::nan("");
    double p_reference = std::nan("");
    double visibility = std::nan("");
    double weak = 1.0;
    double branch = 0.0;
};

void gate(const pert::ProbabilityResult& p, double x, const char* arm)
{
    if (p.p_excite >= pert::weak_adiabatic_threshold) {
        std::ostringstream os;
        os << arm << " arm leaves the QND regime (P_e = " << p.p_excite
           << ") at grid point " << x;
        throw WeakAdiabaticViolation(os.str());
    }
}

// Stable 1 - sqrt((1-a)(1-b)), meaningful even when a, b ~ 1e-22.
double visibility_deficit(double a, double b)
{
    const double s = a + b - a * b;
    return s / (1.0 + std::sqrt(std::max(0.0, 1.0 - s)));
}

PointValues eval_point(const SweepSpec& base, double x,
                       const kernels::TransitionKernels* shared)
{
    SweepSpec s = base;
    apply_param(s, x);

    kernels::TransitionKernels local;
    const kernels::TransitionKernels* table = shared;
    if (!table || s.lambda != base.lambda) {
        if (shared && s.param == "lambda") {
            local = *shared; // kernel values are coupling-independent
            local.setup.lambda = s.lambda;
        } else {
            local = kernels::build_kernels(make_setup(s), s.rel_tol);
        }
        table = &local;
    }

    PointValues out;
    const fock::FieldState target = make_state(s.target);
    const fock::FieldState reference = make_state(s.reference);

    if (s.observable == "probability") {
        const auto p = pert::assemble_probability(target, *table);
        out.value = p.p_excite;
        out.p_target = p.p_excite;
        out.weak = p.weak_adiabatic ? 1.0 : 0.0;
    } else if (s.observable == "phase") {
        const auto p = pert::assemble_probability(target, *table);
        const auto ph = pert::assemble_phase(target, *table);
        out.value = ph.gamma;
        out.p_target = p.p_excite;
        out.weak = p.weak_adiabatic ? 1.0 : 0.0;
        out.branch = ph.branch_warning ? 1.0 : 0.0;
    } else if (s.observable == "interferometric_phase" || s.observable == "visibility") {
        const auto pt = pert::assemble_probability(target, *table);
        const auto pr = pert::assemble_probability(reference, *table);
        gate(pt, x, "target");
        gate(pr, x, "reference");
        out.p_target = pt.p_excite;
        out.p_reference = pr.p_excite;
        out.weak = (pt.weak_adiabatic && pr.weak_adiabatic) ? 1.0 : 0.0;
        const auto ph_t = pert::assemble_phase(target, *table);
        const auto ph_r = pert::assemble_phase(reference, *table);
        out.branch = (ph_t.branch_warning || ph_r.branch_warning) ? 1.0 : 0.0;
        out.visibility = std::sqrt((1.0 - pt.p_excite) * (1.0 - pr.p_excite));
        if (s.observable == "interferometric_phase")
            out.value = std::arg(ph_t.survival_amplitude / ph_r.survival_amplitude);
        else
            out.value = out.visibility;
    } else if (s.observable == "resolution") {
        const auto query = make_query(s, x);
        struct Pts {
            fock::FieldState a, b;
        };
        const auto pts = std::visit(
            [](const auto& q) -> Pts {
                using T = std::decay_t<decltype(q)>;
                if constexpr (std::is_same_v<T, pert::FockGap>)
                    return {fock::Fock{q.n}, fock::Fock{q.n + q.m}};
                else if constexpr (std::is_same_v<T, pert::CoherentGap>)
                    return {fock::Coherent{cd(q.alpha_abs, 0.0)},
                            fock::Coherent{cd(q.alpha_abs + q.delta_alpha, 0.0)}};
                else if constexpr (std::is_same_v<T, pert::SqueezeGap>)
                    return {fock::SqueezedVacuum{fock::SqueezeParams::make(q.r, 0.0)},
                            fock::SqueezedVacuum{fock::SqueezeParams::make(q.r + q.delta_r, 0.0)}};
                else
                    return {fock::SqueezedCoherent{fock::SqueezeParams::make(q.r, 0.0),
                                                   std::polar(q.alpha_abs, 0.5 * q.psi)},
                            fock::SqueezedCoherent{
                                fock::SqueezeParams::make(q.r, 0.0),
                                std::polar(q.alpha_abs, 0.5 * (q.psi + q.delta_psi))}};
            },
            query);
        const auto p1 = pert::assemble_probability(pts.a, *table);
        const auto p2 = pert::assemble_probability(pts.b, *table);
        const auto pr = pert::assemble_probability(reference, *table);
        gate(p1, x, "first target");
        gate(p2, x, "second target");
        gate(pr, x, "reference");
        const cd a_ref = pert::assemble_phase(reference, *table).survival_amplitude;
        const double d1 = std::arg(pert::assemble_phase(pts.a, *table).survival_amplitude / a_ref);
        const double d2 = std::arg(pert::assemble_phase(pts.b, *table).survival_amplitude / a_ref);
        out.value = d1 - d2;
        out.p_target = std::max(p1.p_excite, p2.p_excite);
        out.p_reference = pr.p_excite;
        out.weak = 1.0;
    } else {
        throw ConfigError("unknown observable '" + s.observable + "'");
    }
    return out;
}

SweepTable run_stability(const SweepSpec& s)
{
    if (s.param != "epsilon_si")
        throw ConfigError("stability sweeps param epsilon_si");
    const std::vector<double> grid = make_grid(s);
    std::vector<double> eps_nat(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        eps_nat[i] = convert_rate(grid[i]);

    const CavitySetup setup = make_setup(s);
    SweepTable t = pert::stability_curve(setup, make_state(s.target), eps_nat, s.rel_tol);
    t.columns = {"epsilon_si", "p_excite", "p_minus_baseline"};
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        t.rows[i][0] = grid[i];
    return t;
}

} // namespace

SweepTable run_sweep(const SweepSpec& spec)
{
    if (spec.epsilon_si != 0.0 && spec.observable != "stability")
        throw ConfigError("epsilon_si is only meaningful for the stability observable");

    SweepTable table;
    table.metadata.emplace_back("tool_version", tool_version);
    for (auto& kvp : spec_to_kv(spec))
        table.metadata.push_back(kvp);

    if (spec.observable == "stability") {
        SweepTable t = run_stability(spec);
        t.metadata.insert(t.metadata.begin(), table.metadata.begin(), table.metadata.end());
        return t;
    }

    const std::vector<double> grid = make_grid(spec);

    // State-only parameters leave every kernel unchanged; build the table once.
    kernels::TransitionKernels shared;
    bool have_shared = false;
    if (param_is_state_only(spec.param) || spec.param == "lambda") {
        shared = kernels::build_kernels(make_setup(spec), spec.rel_tol);
        have_shared = true;
    }

    table.columns = {spec.param, spec.observable, "p_target", "p_reference",
                     "visibility", "weak_adiabatic", "branch_warning"};
    table.rows.assign(grid.size(), {});
    parallel_for(static_cast<int>(grid.size()), [&](int i) {
        const double x = grid[static_cast<std::size_t>(i)];
        try {
            const PointValues v = eval_point(spec, x, have_shared ? &shared : nullptr);
            table.rows[static_cast<std::size_t>(i)] = {x,          v.value, v.p_target,
                                                       v.p_reference, v.visibility, v.weak,
                                                       v.branch};
        } catch (const ConfigError&) {
            throw;
        } catch (const WeakAdiabaticViolation&) {
            throw; // gate() already names the grid point
        } catch (const std::exception& e) {
            std::ostringstream os;
            os << e.what() << " [grid point " << i << ", " << spec.param << " = " << x << "]";
            throw std::runtime_error(os.str());
        }
    });
    return table;
}

namespace {

struct FamilyMember {
    std::string label;
    std::function<void(SweepSpec&)> tweak;
};

struct Recipe {
    SweepSpec spec;
    std::vector<FamilyMember> family;
};

Recipe make_recipe(const std::string& name)
{
    Recipe r;
    SweepSpec& s = r.spec;
    // Shared defaults: probed even mode beta = 2 on resonance, L = 0.25 m
    // (pinned by the reported probability scales; see README), lambda = 1e-4.
    // Slow probes (1 m/s) maximize the phase signal for the phase figures.
    s.L = 0.25;
    s.beta = 2;
    s.resonant = true;
    s.lambda = 1e-4;
    s.rel_tol = 1e-8;
    s.reference.kind = "coherent";
    s.reference.alpha_abs = 1.0;

    auto squeezed_target = [&](double r_val, double alpha) {
        s.target.kind = "squeezed_coherent";
        s.target.r = r_val;
        s.target.alpha_abs = alpha;
        s.target.alpha_arg = 0.0;
        s.target.phi = 0.0;
    };

    if (name == "fig2-left") {
        s.observable = "phase";
        s.param = "Psi";
        s.min = 0.0;
        s.max = 2.0 * pi;
        s.points = 181;
        s.v_si = 1.0;
        squeezed_target(1.0, 1.0);
    } else if (name == "fig2-mid") {
        s.observable = "phase";
        s.param = "r";
        s.min = 0.0;
        s.max = 8.0;
        s.points = 161;
        s.v_si = 1.0;
        s.lambda = 6e-4; // places the saturation knee so sensitivity dies past r ~ 5
        squeezed_target(0.0, 1.0);
    } else if (name == "fig2-right") {
        s.observable = "phase";
        s.param = "alpha_abs";
        s.min = 0.0;
        s.max = 60.0;
        s.points = 121;
        s.v_si = 1.0;
        squeezed_target(1.0, 0.0);
    } else if (name == "fig3") {
        s.observable = "phase";
        s.param = "alpha_abs";
        s.min = 0.0;
        s.max = 100.0;
        s.points = 201;
        s.v_si = 1.0;
        s.target.kind = "coherent";
        s.target.alpha_arg = 0.0;
    } else if (name == "fig4-left" || name == "fig4-mid" || name == "fig4-right") {
        Recipe base = make_recipe(name == "fig4-left" ? "fig2-left"
                                  : name == "fig4-mid" ? "fig2-mid"
                                                       : "fig2-right");
        base.spec.observable = "visibility";
        return base;
    } else if (name == "fig5") {
        s.observable = "resolution";
        s.param = "Psi";
        s.min = 0.0;
        s.max = 2.0 * pi;
        s.points = 181;
        s.v_si = 1.0;
        s.res_kind = "rel_phase_gap";
        squeezed_target(1.0, 1.0);
        for (double f : {0.1, 0.2, 0.3, 0.4, 0.5}) {
            char lab[32];
            std::snprintf(lab, sizeof lab, "dPsi_%gpi", f);
            r.family.push_back({lab, [f](SweepSpec& q) { q.res_delta_psi = f * pi; }});
        }
    } else if (name == "fig6") {
        s.observable = "resolution";
        s.param = "alpha_abs";
        s.min = 0.0;
        s.max = 10.0;
        s.points = 101;
        s.v_si = 1.0;
        s.res_kind = "coherent_gap";
        s.target.kind = "coherent";
        for (int d = 1; d <= 5; ++d) {
            r.family.push_back({"dalpha_" + std::to_string(d),
                                [d](SweepSpec& q) { q.res_delta_alpha = d; }});
        }
    } else if (name == "fig7") {
        s.observable = "resolution";
        s.param = "r";
        s.min = 0.0;
        s.max = 5.0;
        s.points = 101;
        s.v_si = 1.0;
        s.res_kind = "squeeze_gap";
        s.target.kind = "squeezed_vacuum";
        for (int d = 1; d <= 5; ++d) {
            r.family.push_back(
                {"dr_" + std::to_string(d), [d](SweepSpec& q) { q.res_delta_r = d; }});
        }
    } else if (name == "fig8") {
        s.observable = "resolution";
        s.param = "n";
        s.min = 0.0;
        s.max = 30.0;
        s.points = 31;
        s.v_si = 1000.0;
        s.lambda = 1e-6; // keeps every arm deep in the gamma << 1 regime
        s.res_kind = "fock_gap";
        s.target.kind = "fock";
        for (int m : {5, 10, 15, 20, 25}) {
            r.family.push_back({"m_" + std::to_string(m), [m](SweepSpec& q) { q.res_m = m; }});
        }
    } else if (name == "fig9") {
        s.observable = "stability";
        s.param = "epsilon_si";
        s.min = 1e-5;
        s.max = 1e-2;
        s.points = 13;
        s.scale = "log";
        s.v_si = 1000.0;
        s.target.kind = "coherent";
        s.target.alpha_abs = 1.0;
        s.target.alpha_arg = 0.0;
    } else {
        throw ConfigError("unknown recipe '" + name + "'");
    }
    return r;
}

} // namespace

std::vector<std::string> recipe_names()
{
    return {"fig2-left", "fig2-mid", "fig2-right", "fig3",     "fig4-left",
            "fig4-mid",  "fig4-right", "fig5",     "fig6",     "fig7",
            "fig8",      "fig9"};
}

bool is_family_recipe(const std::string& name)
{
    return !make_recipe(name).family.empty();
}

SweepSpec recipe_spec(const std::string& name)
{
    return make_recipe(name).spec;
}

SweepTable run_recipe(const std::string& name)
{
    const Recipe r = make_recipe(name);
    if (r.family.empty()) {
        SweepTable t = run_sweep(r.spec);
        t.metadata.insert(t.metadata.begin(), {"recipe", name});
        if (r.spec.observable == "visibility") {
            // add the representable contrast loss as an extra column
            t.columns.push_back("visibility_deficit");
            for (auto& row : t.rows)
                row.push_back(visibility_deficit(row[2], row[3]));
        }
        return t;
    }

    SweepTable merged;
    merged.metadata.emplace_back("recipe", name);
    bool first = true;
    for (const auto& member : r.family) {
        SweepSpec s = r.spec;
        member.tweak(s);
        const SweepTable t = run_sweep(s);
        if (first) {
            merged.metadata.insert(merged.metadata.end(), t.metadata.begin(), t.metadata.end());
            merged.columns = {s.param};
            merged.rows.assign(t.rows.size(), {});
            for (std::size_t i = 0; i < t.rows.size(); ++i)
                merged.rows[i].push_back(t.rows[i][0]);
            first = false;
        }
        merged.metadata.emplace_back("family", member.label);
        merged.columns.push_back(s.observable + "_" + member.label);
        for (std::size_t i = 0; i < t.rows.size(); ++i)
            merged.rows[i].push_back(t.rows[i][1]);
    }
    return merged;
}

} // namespace modeinv::sweep
