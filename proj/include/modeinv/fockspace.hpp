#ifndef MODEINV_FOCKSPACE_HPP
#define MODEINV_FOCKSPACE_HPP

#include <complex>
#include <utility>
#include <variant>

#include <Eigen/Dense>

#include "modeinv/numeric.hpp"

namespace modeinv::fock {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Highest Fock level retained in a single-mode basis (dimension n_max + 1).
struct ModeCutoff {
    int n_max = 30;
    int dim() const { return n_max + 1; }
};

/// zeta = r e^{i phi}; r >= 0, phi reduced into [0, 2pi).
struct SqueezeParams {
    double r = 0.0;
    double phi = 0.0;

    static SqueezeParams make(double r, double phi);
    cd zeta() const { return std::polar(r, phi); }
};

struct Fock {
    int n = 0;
};
struct Coherent {
    cd alpha{};
};
struct SqueezedVacuum {
    SqueezeParams zeta;
};
/// S(zeta) D(alpha) |0>, squeeze applied after the displacement.
struct SqueezedCoherent {
    SqueezeParams zeta;
    cd alpha{};
};

using FieldState = std::variant<Fock, Coherent, SqueezedVacuum, SqueezedCoherent>;

/// Single-mode state realized on a finite basis.  `amplitudes` is unit norm;
/// `norm_defect` is the probability mass lost to truncation before the final
/// renormalization.
struct FockVector {
    Vector amplitudes;
    double norm_defect = 0.0;
};

/// Annihilation/creation matrices on an (n_max+1)-dimensional basis.
/// a|n> = sqrt(n)|n-1>, adag|n> = sqrt(n+1)|n+1> with the top row/column cut.
std::pair<Matrix, Matrix> ladder_matrices(ModeCutoff cutoff);

/// Cutoff heuristic max(30, ceil(10 (|alpha|^2 + e^{2r}))) — coherent tails
/// die super-exponentially, squeezing populates ~e^{2r} levels.
ModeCutoff default_cutoff(const FieldState& state);

/// Realize a field state on a finite basis via the exponentiated displacement
/// and squeeze generators.  Throws TruncationError when the recorded defect
/// exceeds `defect_tol`.
FockVector build_state(const FieldState& state, ModeCutoff cutoff,
                       double defect_tol = 1e-10);

/// <a† a> in closed form:
///   sinh^2 r + |alpha|^2 (cosh^2 r + sinh^2 r) - sinh(2r) |alpha|^2 cos(2 theta - phi)
/// with the obvious reductions for Fock / coherent / squeezed-vacuum states.
double mean_photon_number(const FieldState& state);

/// <a a> in closed form; zero for Fock states, alpha^2 for coherent ones.
cd pair_moment(const FieldState& state);

/// Max elementwise deviation of S†aS from a cosh r - a† e^{i phi} sinh r over
/// the interior block (indices <= n_max - guard_band).  guard_band < 0 selects
/// the default n_max/3.
double bogoliubov_residual(SqueezeParams zeta, ModeCutoff cutoff, int guard_band = -1);

/// Scaling-and-squaring matrix exponential (via Eigen); exposed so tests can
/// pit it against a plain Taylor series.
Matrix matrix_exponential(const Matrix& m);

} // namespace modeinv::fock

#endif
