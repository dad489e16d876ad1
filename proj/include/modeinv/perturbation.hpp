#ifndef MODEINV_PERTURBATION_HPP
#define MODEINV_PERTURBATION_HPP

#include <span>
#include <variant>
#include <vector>

#include "modeinv/cavity.hpp"
#include "modeinv/fockspace.hpp"
#include "modeinv/kernels.hpp"
#include "modeinv/table.hpp"

namespace modeinv::pert {

using fock::FieldState;

/// Excitation probability with its per-term breakdown.  The terms sum to
/// p_excite exactly; each already carries the lambda^2 prefactor.
struct ProbabilityResult {
    double p_excite = 0.0;
    double resonant_mode_term = 0.0; // photon-population part of the probed mode
    double squeeze_term = 0.0;       // sinh^2 r part
    double interference_term = 0.0;  // squeeze/displacement cross term
    double vacuum_sum_term = 0.0;    // all-mode vacuum fluctuation sum
    bool weak_adiabatic = false;     // p_excite < 1e-6
};

/// Global phase observables.  gamma = Re(eta) is the measurable phase;
/// survival_amplitude is 1 - lambda^2 <second-order bracket>.
struct PhaseResult {
    cd eta{};
    double gamma = 0.0;
    cd survival_amplitude{1.0, 0.0};
    bool branch_warning = false; // |lambda^2 bracket| > 0.5, log expansion strained
};

/// Two-arm interferometer: both arms share one cavity setup.
struct InterferometryConfig {
    FieldState target;
    FieldState reference;
    CavitySetup setup;
    double rel_tol = 1e-8;
};

struct FockGap {
    int n = 0;
    int m = 1;
};
struct CoherentGap {
    double alpha_abs = 1.0;
    double delta_alpha = 1.0;
};
struct SqueezeGap {
    double r = 0.0;
    double delta_r = 1.0;
};
struct RelPhaseGap {
    double psi = 0.0;
    double delta_psi = 0.1 * pi;
    double r = 1.0;
    double alpha_abs = 1.0;
};
using ResolutionQuery = std::variant<FockGap, CoherentGap, SqueezeGap, RelPhaseGap>;

/// Threshold below which an arm is considered unperturbed (QND regime).
inline constexpr double weak_adiabatic_threshold = 1e-6;

ProbabilityResult assemble_probability(const FieldState& state,
                                       const kernels::TransitionKernels& table);
PhaseResult assemble_phase(const FieldState& state,
                           const kernels::TransitionKernels& table);
double assemble_linearized_phase(const FieldState& state,
                                 const kernels::TransitionKernels& table);

/// P_e to second order, vacuum sum converged to rel_tol.
ProbabilityResult excitation_probability(const FieldState& state, const CavitySetup& setup,
                                         double rel_tol);
/// Mode-window variant: the vacuum sums run over exactly `modes` (the
/// contract for comparisons against the exact propagator).
ProbabilityResult excitation_probability(const FieldState& state, const CavitySetup& setup,
                                         std::span<const int> modes);

/// eta = -i ln[1 - lambda^2 ((C+* + C-)/(k L) W + sum_gamma C+*/(k_gamma L))],
/// principal branch, W the mean photon number of the probed state.
PhaseResult acquired_phase(const FieldState& state, const CavitySetup& setup, double rel_tol);
PhaseResult acquired_phase(const FieldState& state, const CavitySetup& setup,
                           std::span<const int> modes);

/// Linearized (gamma << 1) phase, -Im(lambda^2 bracket); affine in the Fock
/// occupation by construction.
double linearized_phase(const FieldState& state, const CavitySetup& setup, double rel_tol);

/// Phase difference between the two arms, Re[-i ln(A_target/A_reference)],
/// wrapped into (-pi, pi].  Throws WeakAdiabaticViolation when either arm is
/// measurably perturbed.
double interferometric_phase(const InterferometryConfig& config);

/// Difference of two interferometric phases at the query's two points,
/// e.g. Fock n vs n+m against the same reference arm.
double phase_resolution(const ResolutionQuery& query, const InterferometryConfig& base);

/// Fringe contrast sqrt((1 - P_target)(1 - P_reference)) in [0, 1].
double fringe_visibility(const InterferometryConfig& config);

/// P_e(epsilon) under the linearly switched coupling, one row per epsilon
/// (natural units; epsilon * T < 1 required).  Metadata carries the fitted
/// log-log slope of P - P(0).
SweepTable stability_curve(const CavitySetup& setup, const FieldState& state,
                           std::span<const double> epsilons, double rel_tol);

} // namespace modeinv::pert

#endif
