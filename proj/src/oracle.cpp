#include "modeinv/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "modeinv/errors.hpp"

namespace modeinv::oracle {

namespace {

// Precomputed sigma+ (x) ladder actions.  H(t) is applied through these index
// lists; hamiltonian_at assembles a sparse matrix from the very same lists so
// the two agree by construction.
struct Generator {
    struct Links {
        std::vector<int> g_index; // source in the atom-ground block
        std::vector<int> e_index; // destination in the atom-excited block
        std::vector<double> val;  // ladder matrix element
    };
    std::vector<Links> raise; // sigma+ adag
    std::vector<Links> lower; // sigma+ a
    std::vector<double> pref; // lambda (k L)^{-1/2}
    std::vector<double> omega, kv;
    double gap = 0.0;
    std::size_t dim = 0, fock_dim = 0;
};

Generator make_generator(const ModelSpace& space, const CavitySetup& setup)
{
    setup.validate();
    Generator g;
    g.dim = space.dim;
    g.fock_dim = space.fock_dim;
    g.gap = setup.atom_gap();

    const int n_modes = static_cast<int>(space.modes.size());
    g.raise.resize(n_modes);
    g.lower.resize(n_modes);
    for (int m = 0; m < n_modes; ++m) {
        const int kappa = space.modes[m];
        g.pref.push_back(setup.lambda / std::sqrt(kappa * pi));
        g.omega.push_back(setup.mode_frequency(kappa));
        g.kv.push_back(setup.mode_wavenumber(kappa) * setup.v);

        const std::size_t stride = space.strides[m];
        const int levels = space.cutoffs[m] + 1;
        for (std::size_t f = 0; f < space.fock_dim; ++f) {
            const int occ = static_cast<int>((f / stride) % levels);
            if (occ + 1 < levels) {
                g.raise[m].g_index.push_back(static_cast<int>(f));
                g.raise[m].e_index.push_back(static_cast<int>(space.fock_dim + f + stride));
                g.raise[m].val.push_back(std::sqrt(occ + 1.0));
            }
            if (occ > 0) {
                g.lower[m].g_index.push_back(static_cast<int>(f));
                g.lower[m].e_index.push_back(static_cast<int>(space.fock_dim + f - stride));
                g.lower[m].val.push_back(std::sqrt(static_cast<double>(occ)));
            }
        }
    }
    return g;
}

// y += H(t) x
void apply_hamiltonian(const Generator& g, double t, double chi, const cd* x, cd* y)
{
    for (std::size_t m = 0; m < g.raise.size(); ++m) {
        const double envelope = chi * g.pref[m] * std::sin(g.kv[m] * t);
        if (envelope == 0.0)
            continue;
        const cd c_raise = envelope * std::exp(cd(0.0, (g.gap + g.omega[m]) * t));
        const cd c_lower = envelope * std::exp(cd(0.0, (g.gap - g.omega[m]) * t));

        const auto& r = g.raise[m];
        for (std::size_t i = 0; i < r.val.size(); ++i) {
            y[r.e_index[i]] += c_raise * r.val[i] * x[r.g_index[i]];
            y[r.g_index[i]] += std::conj(c_raise) * r.val[i] * x[r.e_index[i]];
        }
        const auto& l = g.lower[m];
        for (std::size_t i = 0; i < l.val.size(); ++i) {
            y[l.e_index[i]] += c_lower * l.val[i] * x[l.g_index[i]];
            y[l.g_index[i]] += std::conj(c_lower) * l.val[i] * x[l.e_index[i]];
        }
    }
}

long heuristic_steps(const Generator& g, const CavitySetup& setup)
{
    double omega_max = 0.0;
    for (double w : g.omega)
        omega_max = std::max(omega_max, w);
    const double rate = g.gap + omega_max;
    const double periods = rate * setup.flight_time() / (2.0 * pi);
    const long n = static_cast<long>(std::ceil(periods * 16.0));
    return std::clamp(n, 256L, 1L << 20);
}

} // namespace

ModelSpace ModelSpace::make(std::vector<int> modes, std::vector<int> cutoffs,
                            std::size_t budget)
{
    if (modes.empty() || modes.size() != cutoffs.size())
        throw std::invalid_argument("ModelSpace: need one cutoff per retained mode");
    for (std::size_t i = 0; i < modes.size(); ++i) {
        if (modes[i] < 1)
            throw std::invalid_argument("ModelSpace: mode indices must be >= 1");
        if (i > 0 && modes[i] <= modes[i - 1])
            throw std::invalid_argument("ModelSpace: mode indices must be ascending");
        if (cutoffs[i] < 1)
            throw std::invalid_argument("ModelSpace: cutoffs must be >= 1");
    }

    ModelSpace s;
    s.modes = std::move(modes);
    s.cutoffs = std::move(cutoffs);
    s.fock_dim = 1;
    for (int c : s.cutoffs)
        s.fock_dim *= static_cast<std::size_t>(c + 1);
    s.dim = 2 * s.fock_dim;
    if (s.dim > budget) {
        std::ostringstream os;
        os << "ModelSpace dimension " << s.dim << " exceeds budget " << budget;
        throw std::invalid_argument(os.str());
    }

    // lexicographic: first mode most significant
    s.strides.assign(s.modes.size(), 1);
    for (int i = static_cast<int>(s.modes.size()) - 2; i >= 0; --i)
        s.strides[i] = s.strides[i + 1] * static_cast<std::size_t>(s.cutoffs[i + 1] + 1);
    return s;
}

int ModelSpace::mode_position(int kappa) const
{
    const auto it = std::find(modes.begin(), modes.end(), kappa);
    return it == modes.end() ? -1 : static_cast<int>(it - modes.begin());
}

std::size_t ModelSpace::index(int atom, const std::vector<int>& occupation) const
{
    std::size_t idx = atom == 0 ? 0 : fock_dim;
    for (std::size_t m = 0; m < strides.size(); ++m)
        idx += strides[m] * static_cast<std::size_t>(occupation[m]);
    return idx;
}

TruncatedState ground_vacuum(const ModelSpace& space)
{
    TruncatedState s;
    s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dim));
    s.amplitudes(0) = 1.0;
    return s;
}

TruncatedState initial_state(const ModelSpace& space, const CavitySetup& setup,
                             const fock::FieldState& state, double defect_tol)
{
    const int pos = space.mode_position(setup.beta);
    if (pos < 0)
        throw std::invalid_argument("initial_state: probed mode is not retained");

    const fock::FockVector fv =
        fock::build_state(state, {space.cutoffs[static_cast<std::size_t>(pos)]}, defect_tol);

    TruncatedState s;
    s.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(space.dim));
    const std::size_t stride = space.strides[static_cast<std::size_t>(pos)];
    for (Eigen::Index n = 0; n < fv.amplitudes.size(); ++n)
        s.amplitudes(static_cast<Eigen::Index>(stride * static_cast<std::size_t>(n))) =
            fv.amplitudes(n);
    return s;
}

Eigen::SparseMatrix<cd> hamiltonian_at(double t, const ModelSpace& space,
                                       const CavitySetup& setup,
                                       const SwitchingProfile& profile)
{
    const Generator g = make_generator(space, setup);
    const double chi = 1.0 - profile.epsilon * t;

    std::vector<Eigen::Triplet<cd>> trips;
    for (std::size_t m = 0; m < g.raise.size(); ++m) {
        const double envelope = chi * g.pref[m] * std::sin(g.kv[m] * t);
        const cd c_raise = envelope * std::exp(cd(0.0, (g.gap + g.omega[m]) * t));
        const cd c_lower = envelope * std::exp(cd(0.0, (g.gap - g.omega[m]) * t));
        const auto& r = g.raise[m];
        for (std::size_t i = 0; i < r.val.size(); ++i) {
            trips.emplace_back(r.e_index[i], r.g_index[i], c_raise * r.val[i]);
            trips.emplace_back(r.g_index[i], r.e_index[i], std::conj(c_raise) * r.val[i]);
        }
        const auto& l = g.lower[m];
        for (std::size_t i = 0; i < l.val.size(); ++i) {
            trips.emplace_back(l.e_index[i], l.g_index[i], c_lower * l.val[i]);
            trips.emplace_back(l.g_index[i], l.e_index[i], std::conj(c_lower) * l.val[i]);
        }
    }
    Eigen::SparseMatrix<cd> h(static_cast<int>(space.dim), static_cast<int>(space.dim));
    h.setFromTriplets(trips.begin(), trips.end());
    return h;
}

namespace {

struct RunResult {
    Eigen::VectorXcd psi;
};

// Classical RK4 on  psi' = -i chi(t) H(t) psi  with n uniform steps.
RunResult run_rk4(const Generator& g, const Eigen::VectorXcd& psi0, double T,
                  double epsilon, long n)
{
    const double h = T / static_cast<double>(n);
    const Eigen::Index d = psi0.size();
    Eigen::VectorXcd y = psi0, k1(d), k2(d), k3(d), k4(d), tmp(d);

    auto rhs = [&](double t, const Eigen::VectorXcd& x, Eigen::VectorXcd& out) {
        out.setZero();
        apply_hamiltonian(g, t, 1.0 - epsilon * t, x.data(), out.data());
        out *= cd(0.0, -1.0);
    };

    for (long s = 0; s < n; ++s) {
        const double t = h * static_cast<double>(s);
        rhs(t, y, k1);
        tmp = y + (0.5 * h) * k1;
        rhs(t + 0.5 * h, tmp, k2);
        tmp = y + (0.5 * h) * k2;
        rhs(t + 0.5 * h, tmp, k3);
        tmp = y + h * k3;
        rhs(t + h, tmp, k4);
        y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return {std::move(y)};
}

EvolutionReport report_from(const Eigen::VectorXcd& psi0, const Eigen::VectorXcd& psiT,
                            std::size_t fock_dim, long steps)
{
    EvolutionReport r;
    r.survival_amplitude = psi0.dot(psiT);
    double pe = 0.0;
    for (Eigen::Index i = static_cast<Eigen::Index>(fock_dim); i < psiT.size(); ++i)
        pe += std::norm(psiT(i));
    r.p_excite = pe;
    r.p_orthogonal = 1.0 - std::norm(r.survival_amplitude);
    r.acquired_phase = std::arg(r.survival_amplitude);
    r.norm_drift = std::abs(psiT.norm() - 1.0);
    r.steps = steps;
    return r;
}

} // namespace

EvolutionReport evolve(const TruncatedState& psi0, const ModelSpace& space,
                       const CavitySetup& setup, const SwitchingProfile& profile,
                       const EvolveOptions& opt)
{
    const double T = setup.flight_time();
    profile.validate(T);
    const Generator g = make_generator(space, setup);

    long n = opt.initial_steps > 0 ? opt.initial_steps : heuristic_steps(g, setup);
    EvolutionReport prev{};
    bool have_prev = false;
    while (n <= opt.max_steps) {
        const RunResult run = run_rk4(g, psi0.amplitudes, T, profile.epsilon, n);
        EvolutionReport rep = report_from(psi0.amplitudes, run.psi, space.fock_dim, n);
        if (have_prev) {
            const double dp = std::abs(rep.p_excite - prev.p_excite);
            const double da = std::abs(rep.survival_amplitude - prev.survival_amplitude);
            const bool p_ok = dp <= opt.rel_tol * rep.p_excite + 1e-30;
            const bool a_ok =
                da <= opt.rel_tol * (std::abs(1.0 - rep.survival_amplitude) + 1e-15);
            if (p_ok && a_ok) {
                if (rep.norm_drift > opt.norm_tol)
                    throw NormDrift("norm drift " + std::to_string(rep.norm_drift)
                                    + " above tolerance");
                return rep;
            }
        }
        prev = rep;
        have_prev = true;
        n *= 2;
    }
    throw StepFailure("evolve: step-halving criterion unmet within budget");
}

DysonTerms dyson_orders(const TruncatedState& psi0, const ModelSpace& space,
                        const CavitySetup& setup, int order, const EvolveOptions& opt)
{
    if (order < 1 || order > 2)
        throw std::invalid_argument("dyson_orders: order must be 1 or 2");
    const double T = setup.flight_time();
    const Generator g = make_generator(space, setup);
    const Eigen::Index d = psi0.amplitudes.size();

    // y1(t) = \int_0^t H psi0,  y2(t) = \int_0^t H(t') y1(t') dt':
    // y1' = H psi0, y2' = H y1, marched together with RK4.
    auto run = [&](long n) {
        const double h = T / static_cast<double>(n);
        Eigen::VectorXcd y1 = Eigen::VectorXcd::Zero(d), y2 = Eigen::VectorXcd::Zero(d);
        Eigen::VectorXcd k1a(d), k2a(d), k3a(d), k4a(d);
        Eigen::VectorXcd k1b(d), k2b(d), k3b(d), k4b(d), tmp(d);

        auto rhs1 = [&](double t, Eigen::VectorXcd& out) {
            out.setZero();
            apply_hamiltonian(g, t, 1.0, psi0.amplitudes.data(), out.data());
        };
        auto rhs2 = [&](double t, const Eigen::VectorXcd& y1_at, Eigen::VectorXcd& out) {
            out.setZero();
            apply_hamiltonian(g, t, 1.0, y1_at.data(), out.data());
        };

        for (long s = 0; s < n; ++s) {
            const double t = h * static_cast<double>(s);
            rhs1(t, k1a);
            rhs2(t, y1, k1b);
            tmp = y1 + (0.5 * h) * k1a;
            rhs1(t + 0.5 * h, k2a);
            rhs2(t + 0.5 * h, tmp, k2b);
            tmp = y1 + (0.5 * h) * k2a;
            rhs2(t + 0.5 * h, tmp, k3b);
            k3a = k2a;
            tmp = y1 + h * k3a;
            rhs1(t + h, k4a);
            rhs2(t + h, tmp, k4b);
            y1 += (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
            y2 += (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
        }
        return std::make_pair(std::move(y1), std::move(y2));
    };

    const double tol = std::min(opt.rel_tol, 1e-8);
    long n = opt.initial_steps > 0 ? opt.initial_steps : heuristic_steps(g, setup);
    auto prev = run(n);
    while (2 * n <= opt.max_steps) {
        n *= 2;
        auto next = run(n);
        const double d1 = (next.first - prev.first).norm();
        const double d2 = (next.second - prev.second).norm();
        const bool ok1 = d1 <= tol * next.first.norm() + 1e-300;
        const bool ok2 = order < 2 || d2 <= tol * next.second.norm() + 1e-300;
        if (ok1 && ok2) {
            DysonTerms out;
            out.first = cd(0.0, -1.0) * next.first;
            if (order >= 2)
                out.second = -next.second;
            out.steps = n;
            return out;
        }
        prev = std::move(next);
    }
    throw StepFailure("dyson_orders: integral refinement unmet within budget");
}

} // namespace modeinv::oracle
