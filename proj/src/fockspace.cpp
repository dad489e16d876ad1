#include "modeinv/fockspace.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "modeinv/errors.hpp"

namespace modeinv::fock {

namespace {

void check_finite(cd z, const char* what)
{
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw std::invalid_argument(std::string(what) + " must be finite");
}

Matrix displacement_generator(cd alpha, int dim)
{
    auto [a, adag] = ladder_matrices({dim - 1});
    return alpha * adag - std::conj(alpha) * a;
}

Matrix squeeze_generator(cd zeta, int dim)
{
    auto [a, adag] = ladder_matrices({dim - 1});
    return 0.5 * (std::conj(zeta) * (a * a) - zeta * (adag * adag));
}

// Build on a padded basis, then project to the requested cutoff.  The
// truncated generators exponentiate to exactly unitary matrices, so the
// meaningful defect is the mass sitting above n_max, not a norm loss.
Vector build_padded(const FieldState& state, int dim_padded)
{
    Vector v0 = Vector::Zero(dim_padded);
    v0(0) = 1.0;

    struct Builder {
        int dim;
        Vector operator()(const Fock& f) const
        {
            if (f.n < 0)
                throw std::invalid_argument("Fock occupation must be >= 0");
            if (f.n >= dim)
                throw TruncationError("Fock level above cutoff");
            Vector v = Vector::Zero(dim);
            v(f.n) = 1.0;
            return v;
        }
        Vector operator()(const Coherent& c) const
        {
            check_finite(c.alpha, "alpha");
            Vector v = Vector::Zero(dim);
            v(0) = 1.0;
            return matrix_exponential(displacement_generator(c.alpha, dim)) * v;
        }
        Vector operator()(const SqueezedVacuum& s) const
        {
            Vector v = Vector::Zero(dim);
            v(0) = 1.0;
            return matrix_exponential(squeeze_generator(s.zeta.zeta(), dim)) * v;
        }
        Vector operator()(const SqueezedCoherent& sc) const
        {
            check_finite(sc.alpha, "alpha");
            Vector v = Vector::Zero(dim);
            v(0) = 1.0;
            v = matrix_exponential(displacement_generator(sc.alpha, dim)) * v;
            return matrix_exponential(squeeze_generator(sc.zeta.zeta(), dim)) * v;
        }
    };
    return std::visit(Builder{dim_padded}, state);
}

} // namespace

SqueezeParams SqueezeParams::make(double r, double phi)
{
    if (!(r >= 0.0) || !std::isfinite(r))
        throw std::invalid_argument("squeeze magnitude must be finite and >= 0");
    if (!std::isfinite(phi))
        throw std::invalid_argument("squeeze phase must be finite");
    phi = std::fmod(phi, 2.0 * pi);
    if (phi < 0.0)
        phi += 2.0 * pi;
    return {r, phi};
}

std::pair<Matrix, Matrix> ladder_matrices(ModeCutoff cutoff)
{
    if (cutoff.n_max < 1)
        throw std::invalid_argument("ladder_matrices: n_max must be >= 1");
    const int d = cutoff.dim();
    Matrix a = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n)
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {a, a.adjoint()};
}

ModeCutoff default_cutoff(const FieldState& state)
{
    double alpha_sq = 0.0, r = 0.0;
    if (const auto* c = std::get_if<Coherent>(&state))
        alpha_sq = std::norm(c->alpha);
    if (const auto* s = std::get_if<SqueezedVacuum>(&state))
        r = s->zeta.r;
    if (const auto* sc = std::get_if<SqueezedCoherent>(&state)) {
        alpha_sq = std::norm(sc->alpha);
        r = sc->zeta.r;
    }
    if (const auto* f = std::get_if<Fock>(&state))
        return {std::max(30, f->n + 1)};
    // 8 levels of headroom: the bare 10(|alpha|^2 + e^{2r}) estimate leaves
    // the defect marginally above the default tolerance near r = 1
    const double suggested = 10.0 * (alpha_sq + std::exp(2.0 * r)) + 8.0;
    return {std::max(30, static_cast<int>(std::ceil(suggested)))};
}

FockVector build_state(const FieldState& state, ModeCutoff cutoff, double defect_tol)
{
    if (cutoff.n_max < 1)
        throw std::invalid_argument("cutoff must retain at least two levels");

    const int pad = std::min(std::max(8, cutoff.n_max / 4), 48);
    Vector padded = build_padded(state, cutoff.dim() + pad);

    Vector head = padded.head(cutoff.dim());
    const double kept = head.squaredNorm();
    const double defect = 1.0 - kept;
    if (defect > defect_tol) {
        std::ostringstream os;
        os << "norm defect " << defect << " above tolerance " << defect_tol
           << " at n_max = " << cutoff.n_max;
        throw TruncationError(os.str());
    }
    head /= std::sqrt(kept);
    return {std::move(head), defect};
}

double mean_photon_number(const FieldState& state)
{
    struct Mean {
        double operator()(const Fock& f) const { return static_cast<double>(f.n); }
        double operator()(const Coherent& c) const { return std::norm(c.alpha); }
        double operator()(const SqueezedVacuum& s) const
        {
            const double sh = std::sinh(s.zeta.r);
            return sh * sh;
        }
        double operator()(const SqueezedCoherent& sc) const
        {
            const double sh = std::sinh(sc.zeta.r);
            const double ch = std::cosh(sc.zeta.r);
            const double a2 = std::norm(sc.alpha);
            const double psi = 2.0 * std::arg(sc.alpha) - sc.zeta.phi;
            return sh * sh + a2 * (ch * ch + sh * sh) - 2.0 * sh * ch * a2 * std::cos(psi);
        }
    };
    return std::visit(Mean{}, state);
}

cd pair_moment(const FieldState& state)
{
    struct Pair {
        cd operator()(const Fock&) const { return 0.0; }
        cd operator()(const Coherent& c) const { return c.alpha * c.alpha; }
        cd operator()(const SqueezedVacuum& s) const
        {
            return -std::sinh(s.zeta.r) * std::cosh(s.zeta.r)
                 * std::polar(1.0, s.zeta.phi);
        }
        cd operator()(const SqueezedCoherent& sc) const
        {
            const double sh = std::sinh(sc.zeta.r);
            const double ch = std::cosh(sc.zeta.r);
            const cd eiphi = std::polar(1.0, sc.zeta.phi);
            const cd shifted = ch * sc.alpha - sh * eiphi * std::conj(sc.alpha);
            return -sh * ch * eiphi + shifted * shifted;
        }
    };
    return std::visit(Pair{}, state);
}

double bogoliubov_residual(SqueezeParams zeta, ModeCutoff cutoff, int guard_band)
{
    if (guard_band < 0)
        guard_band = cutoff.n_max / 3;
    const int interior = cutoff.dim() - guard_band;
    if (interior < 1)
        throw std::invalid_argument("guard band leaves no interior block");

    // Exponentiating the generator at the cutoff itself reflects the squeeze
    // flow off the basis wall and corrupts the interior; build on a doubled
    // basis and project, so only genuine tail leakage remains.
    const int d = cutoff.dim();
    const Matrix s_pad = matrix_exponential(squeeze_generator(zeta.zeta(), 2 * d));
    const Matrix s = s_pad.topLeftCorner(d, d);

    auto [a, adag] = ladder_matrices(cutoff);
    const Matrix transformed = s.adjoint() * a * s;
    const Matrix expected = std::cosh(zeta.r) * a
                          - std::sinh(zeta.r) * std::polar(1.0, zeta.phi) * adag;
    return (transformed - expected).topLeftCorner(interior, interior).cwiseAbs().maxCoeff();
}

Matrix matrix_exponential(const Matrix& m)
{
    return m.exp();
}

} // namespace modeinv::fock
