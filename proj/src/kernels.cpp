#include "modeinv/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <sstream>

#include "modeinv/errors.hpp"

namespace modeinv::kernels {

namespace {

constexpr double resonance_delta = 1e-8; // |u w| < delta b^2 flags the resonant limit
constexpr double sliver_phase = 1e-3;    // |u T| or |w T| below this -> C fallback

struct ModeParams {
    double a;    // omega_kappa +- Omega
    double b;    // k_kappa v
    double u;    // a + b
    double w;    // a - b
    double T;    // flight time L/v
    double norm; // (k_kappa L)^{-1/2} = 1/sqrt(kappa pi)
};

ModeParams mode_params(const CavitySetup& setup, Sign sign, int kappa)
{
    if (kappa < 1)
        throw std::invalid_argument("mode index must be >= 1");
    const double omega = setup.mode_frequency(kappa);
    const double gap = setup.atom_gap();
    const double a = (sign == Sign::plus) ? omega + gap : omega - gap;
    const double b = setup.mode_wavenumber(kappa) * setup.v;
    return {a, b, a + b, a - b, setup.flight_time(), 1.0 / std::sqrt(kappa * pi)};
}

// Bare first-order integral \int_0^T e^{iat} sin(bt) dt.  With bT = kappa*pi
// the numerator is b(e^{iuT} - 1) = b(e^{iwT} - 1), so evaluating the
// oscillatory factor at the smaller of u, w keeps the removable singularities
// at u = 0 and w = 0 fully resolved.
cd bare_first_order(const ModeParams& p, int kappa)
{
    if (p.a == 0.0) {
        // exact resonance: \int sin(bt) = (1 - (-1)^kappa)/b, identically 0 for even kappa
        return (kappa % 2 == 0) ? cd(0.0) : cd(2.0 / p.b);
    }
    if (std::abs(p.w) <= std::abs(p.u))
        return cd(0.0, 1.0) * p.b * osc_integral(p.w, p.T) / p.u;
    return cd(0.0, 1.0) * p.b * osc_integral(p.u, p.T) / p.w;
}

// \int_0^T t e^{iat} sin(bt) dt (the switching correction term).
cd bare_first_order_t(const ModeParams& p)
{
    return (osc_integral_t(p.u, p.T) - osc_integral_t(p.w, p.T)) / cd(0.0, 2.0);
}

Method classify(const ModeParams& p)
{
    return (std::abs(p.u * p.w) < resonance_delta * p.b * p.b) ? Method::resonant_limit
                                                               : Method::closed_form;
}

cd inner_first_order(const ModeParams& p, double t)
{
    // \int_0^t e^{-ia t'} sin(b t') dt'
    const cd e1 = t * phase_ratio(cd(0.0, -p.w * t));
    const cd e2 = t * phase_ratio(cd(0.0, -p.u * t));
    return (e1 - e2) / cd(0.0, 2.0);
}

double kernel_scale(const ModeParams& p)
{
    return p.b * p.T * p.norm;
}

// \int_0^T t^n e^{i nu t} dt for n = 0..4 with small-|nu T| series branches.
cd osc_moment(int n, double nu, double T)
{
    const cd z(0.0, nu * T);
    if (std::abs(z) < 1e-3) {
        // T^{n+1} sum_k z^k / (k! (k+n+1)), five terms
        cd acc = 0.0;
        double kfac = 1.0;
        cd zp = 1.0;
        for (int k = 0; k <= 4; ++k) {
            if (k > 0) {
                kfac *= k;
                zp *= z;
            }
            acc += zp / (kfac * (k + n + 1));
        }
        return std::pow(T, n + 1) * acc;
    }
    if (n == 0)
        return osc_integral(nu, T);
    const cd einT = expm1c(z) + 1.0;
    return (std::pow(T, n) * einT - static_cast<double>(n) * osc_moment(n - 1, nu, T))
         / cd(0.0, nu);
}

} // namespace

KernelValue transition_kernel(const CavitySetup& setup, Sign sign, int kappa)
{
    setup.validate();
    const ModeParams p = mode_params(setup, sign, kappa);
    const cd bare = bare_first_order(p, kappa);
    KernelValue k;
    k.value = -p.norm * bare;
    k.method = classify(p);
    k.est_error = 1e-14 * std::abs(k.value) + 1e-16 * kernel_scale(p);
    return k;
}

KernelValue transition_kernel_quadrature(const CavitySetup& setup, Sign sign, int kappa,
                                         const QuadOptions& opt)
{
    setup.validate();
    const ModeParams p = mode_params(setup, sign, kappa);
    auto f = [&](double t) { return std::exp(cd(0.0, p.a * t)) * std::sin(p.b * t); };
    const QuadResult q = integrate_gk(f, sine_zero_partition(p.b, p.T), opt);
    return {-p.norm * q.value, Method::quadrature, p.norm * q.est_error};
}

KernelValue transition_kernel_switched(const CavitySetup& setup, Sign sign, int kappa,
                                       const SwitchingProfile& profile)
{
    setup.validate();
    profile.validate(setup.flight_time());
    const ModeParams p = mode_params(setup, sign, kappa);
    const cd bare = bare_first_order(p, kappa) - profile.epsilon * bare_first_order_t(p);
    KernelValue k;
    k.value = -p.norm * bare;
    k.method = classify(p);
    k.est_error = 1e-14 * std::abs(k.value) + 1e-16 * kernel_scale(p);
    return k;
}

KernelValue transition_kernel_switched_quadrature(const CavitySetup& setup, Sign sign,
                                                  int kappa, const SwitchingProfile& profile,
                                                  const QuadOptions& opt)
{
    setup.validate();
    profile.validate(setup.flight_time());
    const ModeParams p = mode_params(setup, sign, kappa);
    auto f = [&](double t) {
        return (1.0 - profile.epsilon * t) * std::exp(cd(0.0, p.a * t)) * std::sin(p.b * t);
    };
    const QuadResult q = integrate_gk(f, sine_zero_partition(p.b, p.T), opt);
    if (!q.converged) {
        std::ostringstream os;
        os << "switched kernel quadrature stalled at " << q.intervals
           << " intervals, est_error " << q.est_error;
        throw QuadratureFailure(os.str());
    }
    return {-p.norm * q.value, Method::quadrature, p.norm * q.est_error};
}

cd transition_kernel_switching_derivative(const CavitySetup& setup, Sign sign, int kappa)
{
    const ModeParams p = mode_params(setup, sign, kappa);
    return p.norm * bare_first_order_t(p);
}

KernelValue phase_kernel(const CavitySetup& setup, Sign sign, int kappa)
{
    setup.validate();
    const ModeParams p = mode_params(setup, sign, kappa);
    if (std::min(std::abs(p.u), std::abs(p.w)) * p.T < sliver_phase)
        return phase_kernel_nested(setup, sign, kappa);

    // C = (i/2) (aT - b (E(w) - E(u))) / (u w), using E(+-2b) = 0 exactly
    // since 2bT is an even multiple of pi.
    const cd q = osc_integral(p.w, p.T) - osc_integral(p.u, p.T);
    KernelValue k;
    k.value = cd(0.0, 0.5) * (p.a * p.T - p.b * q) / (p.u * p.w);
    k.method = classify(p);
    k.est_error = 1e-15 * (std::abs(p.a * p.T) + p.b * p.T * 2.0 + std::abs(p.b * q))
                / std::abs(p.u * p.w);
    return k;
}

KernelValue phase_kernel_nested(const CavitySetup& setup, Sign sign, int kappa,
                                const QuadOptions& opt)
{
    setup.validate();
    const ModeParams p = mode_params(setup, sign, kappa);
    auto f = [&](double t) {
        return std::exp(cd(0.0, p.a * t)) * std::sin(p.b * t) * inner_first_order(p, t);
    };
    const QuadResult q = integrate_gk(f, sine_zero_partition(p.b, p.T), opt);
    if (!q.converged) {
        std::ostringstream os;
        os << "nested phase-kernel quadrature stalled, est_error " << q.est_error;
        throw QuadratureFailure(os.str());
    }
    return {q.value, Method::quadrature, q.est_error};
}

KernelValue phase_kernel_quadrature_2d(const CavitySetup& setup, Sign sign, int kappa,
                                       const QuadOptions& opt)
{
    setup.validate();
    const ModeParams p = mode_params(setup, sign, kappa);

    // Triangle mapped to a product domain via t' = s t; inner integral done
    // by quadrature as well, so this shares nothing with the closed form.
    QuadOptions inner_opt = opt;
    inner_opt.abs_tol = std::max(opt.abs_tol, 1e-15);
    auto f_outer = [&](double t) {
        auto f_inner = [&](double s) {
            return std::exp(cd(0.0, -p.a * s * t)) * std::sin(p.b * s * t);
        };
        std::vector<double> bk{0.0};
        if (p.b * t > pi) {
            const int zeros = static_cast<int>(std::floor(p.b * t / pi));
            const int stride = std::max(1, zeros / 256);
            for (int j = stride; j <= zeros; j += stride) {
                const double s = j * pi / (p.b * t);
                if (s > bk.back() && s < 1.0)
                    bk.push_back(s);
            }
        }
        bk.push_back(1.0);
        const QuadResult inner = integrate_gk(f_inner, bk, inner_opt);
        return t * std::exp(cd(0.0, p.a * t)) * std::sin(p.b * t) * inner.value;
    };
    const QuadResult q = integrate_gk(f_outer, sine_zero_partition(p.b, p.T), opt);
    if (!q.converged)
        throw QuadratureFailure("2-D phase-kernel quadrature stalled");
    return {q.value, Method::quadrature, q.est_error};
}

cd ordered_exp_kernel(double mu1, double mu2, double b, double T)
{
    // Z = -(1/4) sum_{s1,s2} s1 s2 F(mu1 + s1 b, mu2 + s2 b) where
    // F(nu, x) = \int_0^T e^{i nu t} t phase_ratio(i x t) dt
    //          = [E(nu + x) - E(nu)]/(i x).
    cd z = 0.0;
    for (int s1 : {+1, -1}) {
        for (int s2 : {+1, -1}) {
            const double nu = mu1 + s1 * b;
            const double x = mu2 + s2 * b;
            cd factor;
            if (std::abs(x) * T >= sliver_phase) {
                factor = (osc_integral(nu + x, T) - osc_integral(nu, T)) / cd(0.0, x);
            } else {
                // series in x: sum_k (ix)^k/(k+1)! * \int t^{k+1} e^{i nu t}
                factor = 0.0;
                cd xp = 1.0;
                double fac = 1.0;
                for (int k = 0; k <= 3; ++k) {
                    if (k > 0) {
                        xp *= cd(0.0, x);
                        fac *= (k + 1);
                    }
                    factor += xp / fac * osc_moment(k + 1, nu, T);
                }
            }
            z += static_cast<double>(s1 * s2) * factor;
        }
    }
    return -0.25 * z;
}

namespace {

cd sum_term(const CavitySetup& setup, SumKind kind, int gamma,
            const std::optional<SwitchingProfile>& profile)
{
    if (kind == SumKind::abs_i_plus_sq) {
        const KernelValue k = (profile && !profile->is_off())
                                  ? transition_kernel_switched(setup, Sign::plus, gamma, *profile)
                                  : transition_kernel(setup, Sign::plus, gamma);
        return std::norm(k.value);
    }
    const KernelValue c = phase_kernel(setup, Sign::plus, gamma);
    return std::conj(c.value) / (gamma * pi);
}

// Smooth gamma^-2 part of conj(C+)/(k L): the leading -i T a / (2 u w) piece,
// whose infinite tail sums in closed form through the digamma function.
cd c_sum_smooth_term(const CavitySetup& setup, int gamma)
{
    const double a = setup.mode_frequency(gamma) + setup.atom_gap();
    return cd(0.0, -setup.flight_time() / (2.0 * pi)) / (gamma * a);
}

cd c_sum_smooth_tail(const CavitySetup& setup, long gamma_last)
{
    // sum_{gamma > g*} 1/(gamma (gamma + c)),  c = Omega L / pi
    const double c = setup.atom_gap() * setup.L / pi;
    const double x = static_cast<double>(gamma_last) + 1.0;
    const double s = (c > 1e-8) ? (digamma(x + c) - digamma(x)) / c : trigamma(x);
    return cd(0.0, -setup.flight_time() * setup.L / (2.0 * pi * pi)) * s;
}

// Power-law tail A gamma^-p fitted through block means of the trailing
// window.  The exponent is clamped to the known asymptotic decay and the
// result doubled, so the estimate errs on the conservative side.
double tail_from_window(const std::deque<std::pair<double, double>>& window, double p_max)
{
    constexpr int blocks = 4;
    const int per_block = static_cast<int>(window.size()) / blocks;
    double lx[blocks], ly[blocks];
    for (int j = 0; j < blocks; ++j) {
        double g = 0.0, m = 0.0;
        for (int i = 0; i < per_block; ++i) {
            g += window[j * per_block + i].first;
            m += window[j * per_block + i].second;
        }
        g /= per_block;
        m /= per_block;
        if (m <= 0.0)
            return -1.0;
        lx[j] = std::log(g);
        ly[j] = std::log(m);
    }
    double p = -fit_slope(lx, ly, blocks);
    if (!std::isfinite(p))
        return -1.0;
    p = std::min(p, p_max);
    if (!(p > 1.05))
        return -1.0;
    const double g_last = window.back().first;
    const double a = std::exp(ly[blocks - 1] + p * lx[blocks - 1]);
    return 2.0 * a * std::pow(g_last, 1.0 - p) / (p - 1.0);
}

} // namespace

ModeSum mode_sum(const CavitySetup& setup, SumKind kind, double rel_tol,
                 const std::optional<SwitchingProfile>& profile)
{
    setup.validate();
    if (!(rel_tol > 0.0))
        throw std::invalid_argument("mode_sum: rel_tol must be positive");

    constexpr long max_terms = 1000000;
    constexpr int window_size = 64;
    // |K+|^2 terms decay like gamma^-3; the oscillatory residual of the
    // second-order terms does too once the smooth gamma^-2 part is split off.
    const double p_max = 3.0;
    const bool smooth_split = kind == SumKind::c_plus_conj;

    cd sum = 0.0;
    std::deque<std::pair<double, double>> window; // (gamma, |residual term|)
    for (long gamma = 1; gamma <= max_terms; ++gamma) {
        const cd t = sum_term(setup, kind, static_cast<int>(gamma), profile);
        sum += t;
        const cd residual =
            smooth_split ? t - c_sum_smooth_term(setup, static_cast<int>(gamma)) : t;
        window.emplace_back(static_cast<double>(gamma), std::abs(residual));
        if (window.size() > window_size)
            window.pop_front();

        if (gamma >= 128 && gamma % 16 == 0 && window.size() == window_size) {
            const double osc_tail = tail_from_window(window, p_max);
            if (osc_tail < 0.0)
                continue;
            cd value = sum;
            double tail = osc_tail;
            if (smooth_split) {
                const cd smooth = c_sum_smooth_tail(setup, gamma);
                value += smooth;
                tail += std::abs(smooth) * (setup.v * setup.v + 8.0 / (gamma * gamma));
            }
            if (tail <= rel_tol * std::abs(value))
                return {value, gamma, tail};
        }
    }
    std::ostringstream os;
    os << "mode sum still above rel_tol " << rel_tol << " after " << max_terms << " terms";
    throw NonConvergence(os.str());
}

ModeSum mode_sum_window(const CavitySetup& setup, SumKind kind, std::span<const int> modes,
                        const std::optional<SwitchingProfile>& profile)
{
    setup.validate();
    cd sum = 0.0;
    for (int gamma : modes)
        sum += sum_term(setup, kind, gamma, profile);
    return {sum, static_cast<long>(modes.size()), 0.0};
}

TransitionKernels build_kernels(const CavitySetup& setup, double rel_tol,
                                const SwitchingProfile& profile)
{
    TransitionKernels t;
    t.setup = setup;
    t.profile = profile;
    if (profile.is_off()) {
        t.k_plus = transition_kernel(setup, Sign::plus, setup.beta);
        t.k_minus = transition_kernel(setup, Sign::minus, setup.beta);
    } else {
        t.k_plus = transition_kernel_switched(setup, Sign::plus, setup.beta, profile);
        t.k_minus = transition_kernel_switched(setup, Sign::minus, setup.beta, profile);
    }
    t.c_plus = phase_kernel(setup, Sign::plus, setup.beta);
    t.c_minus = phase_kernel(setup, Sign::minus, setup.beta);
    t.i_sum = mode_sum(setup, SumKind::abs_i_plus_sq, rel_tol,
                       profile.is_off() ? std::nullopt : std::optional(profile));
    t.c_sum = mode_sum(setup, SumKind::c_plus_conj, rel_tol);
    return t;
}

TransitionKernels build_kernels_window(const CavitySetup& setup, std::span<const int> modes,
                                       const SwitchingProfile& profile)
{
    TransitionKernels t;
    t.setup = setup;
    t.profile = profile;
    if (profile.is_off()) {
        t.k_plus = transition_kernel(setup, Sign::plus, setup.beta);
        t.k_minus = transition_kernel(setup, Sign::minus, setup.beta);
    } else {
        t.k_plus = transition_kernel_switched(setup, Sign::plus, setup.beta, profile);
        t.k_minus = transition_kernel_switched(setup, Sign::minus, setup.beta, profile);
    }
    t.c_plus = phase_kernel(setup, Sign::plus, setup.beta);
    t.c_minus = phase_kernel(setup, Sign::minus, setup.beta);
    t.i_sum = mode_sum_window(setup, SumKind::abs_i_plus_sq, modes,
                              profile.is_off() ? std::nullopt : std::optional(profile));
    t.c_sum = mode_sum_window(setup, SumKind::c_plus_conj, modes);
    t.window.assign(modes.begin(), modes.end());
    return t;
}

} // namespace modeinv::kernels
