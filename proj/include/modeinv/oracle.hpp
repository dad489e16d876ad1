#ifndef MODEINV_ORACLE_HPP
#define MODEINV_ORACLE_HPP

#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "modeinv/cavity.hpp"
#include "modeinv/fockspace.hpp"

namespace modeinv::oracle {

/// Finite atom (x) multimode-Fock realization.  Basis ordering: atom level
/// (g then e) outermost, then the occupation tuple lexicographically with the
/// first retained mode most significant.
struct ModelSpace {
    std::vector<int> modes;   // ascending cavity mode indices
    std::vector<int> cutoffs; // n_max per mode
    std::size_t fock_dim = 0;
    std::size_t dim = 0;                // 2 * fock_dim
    std::vector<std::size_t> strides;

    /// Throws when sizes mismatch, modes are not ascending, or the total
    /// dimension exceeds `budget` (default 2e5).
    static ModelSpace make(std::vector<int> modes, std::vector<int> cutoffs,
                           std::size_t budget = 200000);

    int mode_position(int kappa) const; // -1 when not retained
    std::size_t index(int atom, const std::vector<int>& occupation) const;
};

struct TruncatedState {
    Eigen::VectorXcd amplitudes;
};

/// |g> (x) vacuum in every retained mode.
TruncatedState ground_vacuum(const ModelSpace& space);

/// |g> (x) (state in mode beta) (x) vacuum elsewhere.  The single-mode state
/// is realized at that mode's cutoff; `defect_tol` bounds its truncation.
TruncatedState initial_state(const ModelSpace& space, const CavitySetup& setup,
                             const fock::FieldState& state, double defect_tol = 1e-9);

/// Interaction-picture Hamiltonian at time t, restricted to the retained
/// modes.  Hermitian by construction.
Eigen::SparseMatrix<cd> hamiltonian_at(double t, const ModelSpace& space,
                                       const CavitySetup& setup,
                                       const SwitchingProfile& profile = {});

struct EvolutionReport {
    cd survival_amplitude{};
    double p_excite = 0.0;
    double p_orthogonal = 0.0;
    double acquired_phase = 0.0;
    double norm_drift = 0.0;
    long steps = 0;
};

struct EvolveOptions {
    double rel_tol = 1e-3;   // accepted when halving the step moves p_excite less than this
    double norm_tol = 1e-9;  // unitarity monitor
    long initial_steps = 0;  // 0 = frequency-based heuristic
    long max_steps = 1L << 24;
};

/// Integrate i d/dt psi = H_I(t) psi over the flight with classical RK4,
/// doubling the step count until the report is stable.  Throws StepFailure
/// when the budget is exhausted and NormDrift when unitarity cannot be held.
EvolutionReport evolve(const TruncatedState& psi0, const ModelSpace& space,
                       const CavitySetup& setup, const SwitchingProfile& profile = {},
                       const EvolveOptions& opt = {});

struct DysonTerms {
    Eigen::VectorXcd first;  // U^(1) psi0
    Eigen::VectorXcd second; // U^(2) psi0 (empty when order < 2)
    long steps = 0;
};

/// Nested time-ordered Dyson integrals applied to psi0, evaluated by
/// fourth-order marching of the equivalent integral system.
DysonTerms dyson_orders(const TruncatedState& psi0, const ModelSpace& space,
                        const CavitySetup& setup, int order = 2,
                        const EvolveOptions& opt = {});

} // namespace modeinv::oracle

#endif
