#ifndef MODEINV_KERNELS_HPP
#define MODEINV_KERNELS_HPP

#include <optional>
#include <span>
#include <vector>

#include "modeinv/cavity.hpp"
#include "modeinv/numeric.hpp"
#include "modeinv/quadrature.hpp"

namespace modeinv::kernels {

/// Sign of the atomic-gap term in the kernel exponent e^{i(+-Omega + omega)t}.
/// `minus` is the rotating-wave resonant branch.
enum class Sign { plus, minus };

enum class Method { closed_form, resonant_limit, quadrature };

struct KernelValue {
    cd value{};
    Method method = Method::closed_form;
    double est_error = 0.0;
};

/// First-order trajectory kernel for mode kappa,
///
///   K(+-, kappa) = -(k L)^{-1/2} \int_0^T e^{i(+-Omega + omega)t} sin(k v t) dt,
///
/// the normalized per-mode transition amplitude factor (the excitation
/// amplitude to mode kappa is i*lambda*K).  Evaluated in closed form; the
/// removable singularities at omega +- Omega = k v are handled analytically
/// and flagged as `resonant_limit`.  At exact resonance the even-mode minus
/// kernel is identically zero and is returned as exact 0.
KernelValue transition_kernel(const CavitySetup& setup, Sign sign, int kappa);

/// Same integral by adaptive quadrature (independent evaluation path).
KernelValue transition_kernel_quadrature(const CavitySetup& setup, Sign sign, int kappa,
                                         const QuadOptions& opt = {});

/// First-order kernel with the linearly switched coupling (1 - epsilon t).
/// The epsilon term has an elementary antiderivative, so this stays closed
/// form; epsilon = 0 reproduces transition_kernel exactly.
KernelValue transition_kernel_switched(const CavitySetup& setup, Sign sign, int kappa,
                                       const SwitchingProfile& profile);

/// Quadrature route for the switched kernel.  Throws QuadratureFailure when
/// the requested tolerance cannot be met within the subdivision budget (the
/// oscillation count at small v makes this route infeasible there; use the
/// closed form).
KernelValue transition_kernel_switched_quadrature(const CavitySetup& setup, Sign sign,
                                                  int kappa, const SwitchingProfile& profile,
                                                  const QuadOptions& opt = {});

/// d/d(epsilon) of the switched kernel at fixed parameters (closed form).
cd transition_kernel_switching_derivative(const CavitySetup& setup, Sign sign, int kappa);

/// Second-order (time-ordered) kernel for mode kappa, the bare double
/// integral
///
///   C(+-, kappa) = \int_0^T dt \int_0^t dt' e^{i(omega +- Omega)(t - t')}
///                  sin(k v t) sin(k v t'),
///
/// evaluated in closed form away from the removable inner resonances
/// |omega +- Omega| = k v, with an automatic nested-quadrature fallback
/// inside that sliver (recorded in `method`).
KernelValue phase_kernel(const CavitySetup& setup, Sign sign, int kappa);

/// Nested evaluation: inner integral closed form, outer adaptive quadrature.
KernelValue phase_kernel_nested(const CavitySetup& setup, Sign sign, int kappa,
                                const QuadOptions& opt = {});

/// Full two-dimensional quadrature over the time-ordered triangle
/// (test oracle; never used on the production path).
KernelValue phase_kernel_quadrature_2d(const CavitySetup& setup, Sign sign, int kappa,
                                       const QuadOptions& opt = {});

/// Generalized ordered kernel
///   Z = \int_0^T dt e^{i mu1 t} sin(b t) \int_0^t dt' e^{i mu2 t'} sin(b t'),
/// needed to assemble the pair-correlation terms that the standard
/// second-order expressions drop.  b*T must be an integer multiple of pi.
cd ordered_exp_kernel(double mu1, double mu2, double b, double T);

enum class SumKind { abs_i_plus_sq, c_plus_conj };

struct ModeSum {
    cd value{};
    long terms_used = 0;
    double tail_estimate = 0.0;
};

/// Convergent sum over all cavity modes gamma = 1, 2, ...:
///   abs_i_plus_sq : sum |K(+, gamma)|^2            (real)
///   c_plus_conj   : sum conj(C(+, gamma))/(k_gamma L)
/// Terms decay like gamma^-3; the tail is estimated from a power-law fit
/// A gamma^-p over trailing block means and the sum stops once
/// tail <= rel_tol * |partial|.  Throws NonConvergence past 10^6 terms.
ModeSum mode_sum(const CavitySetup& setup, SumKind kind, double rel_tol,
                 const std::optional<SwitchingProfile>& profile = std::nullopt);

/// Same sums restricted to an explicit mode window (oracle-matched runs).
ModeSum mode_sum_window(const CavitySetup& setup, SumKind kind, std::span<const int> modes,
                        const std::optional<SwitchingProfile>& profile = std::nullopt);

/// Cached kernel bundle for one setup: probed-mode kernels plus the vacuum
/// sums, either converged or restricted to a window.  Immutable after
/// construction and safe to share across threads.  A switching profile
/// affects the first-order pieces only.
struct TransitionKernels {
    CavitySetup setup;
    SwitchingProfile profile{};
    KernelValue k_plus, k_minus;
    KernelValue c_plus, c_minus;
    ModeSum i_sum;
    ModeSum c_sum;
    std::vector<int> window; // empty = converged infinite sums
};

TransitionKernels build_kernels(const CavitySetup& setup, double rel_tol,
                                const SwitchingProfile& profile = {});
TransitionKernels build_kernels_window(const CavitySetup& setup, std::span<const int> modes,
                                       const SwitchingProfile& profile = {});

} // namespace modeinv::kernels

#endif
