#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "modeinv/errors.hpp"
#include "modeinv/fockspace.hpp"

using namespace modeinv;
using namespace modeinv::fock;

namespace {

// independent <psi|a†a|psi> on a realized vector
double matrix_mean_photons(const FockVector& v)
{
    double acc = 0.0;
    for (Eigen::Index n = 0; n < v.amplitudes.size(); ++n)
        acc += static_cast<double>(n) * std::norm(v.amplitudes(n));
    return acc;
}

cd matrix_pair_moment(const FockVector& v)
{
    // <psi|a a|psi> = sum_n conj(c_n) sqrt((n+1)(n+2)) c_{n+2}
    cd acc = 0.0;
    for (Eigen::Index n = 0; n + 2 < v.amplitudes.size(); ++n)
        acc += std::conj(v.amplitudes(n)) * std::sqrt((n + 1.0) * (n + 2.0))
             * v.amplitudes(n + 2);
    return acc;
}

Matrix taylor_exponential(const Matrix& m, int terms)
{
    Matrix acc = Matrix::Identity(m.rows(), m.cols());
    Matrix power = acc;
    double fact = 1.0;
    for (int k = 1; k <= terms; ++k) {
        power = power * m;
        fact *= k;
        acc += power / fact;
    }
    return acc;
}

} // namespace

TEST_CASE("ladder matrices: defining elements at n_max = 1")
{
    auto [a, adag] = ladder_matrices({1});
    CHECK(a(0, 0) == cd(0.0));
    CHECK(a(0, 1) == cd(1.0));
    CHECK(a(1, 0) == cd(0.0));
    CHECK(a(1, 1) == cd(0.0));
    CHECK(adag(1, 0) == cd(1.0));
}

TEST_CASE("ladder matrices: truncated commutator is diag(1,1,1,-3) at n_max = 3")
{
    auto [a, adag] = ladder_matrices({3});
    const Matrix comm = a * adag - adag * a;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const double expected = (i != j) ? 0.0 : (i == 3 ? -3.0 : 1.0);
            CHECK(std::abs(comm(i, j) - expected) < 1e-15);
        }
}

TEST_CASE("ladder matrices: number operator diag(0,1,2) at n_max = 2")
{
    auto [a, adag] = ladder_matrices({2});
    const Matrix num = adag * a;
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(num(i, i) - static_cast<double>(i)) < 1e-15);
}

TEST_CASE("build_state: D(0) leaves the vacuum untouched")
{
    const FockVector v = build_state(Coherent{0.0}, {10});
    CHECK(v.amplitudes(0) == cd(1.0));
    CHECK(v.amplitudes.tail(10).norm() == 0.0);
    CHECK(v.norm_defect == 0.0);
}

TEST_CASE("build_state: coherent amplitudes match e^{-|a|^2/2} a^n / sqrt(n!)")
{
    const FockVector v = build_state(Coherent{cd(1.0, 0.0)}, {30});
    double fact = 1.0;
    for (int n = 0; n <= 12; ++n) {
        if (n > 0)
            fact *= n;
        const double expected = std::exp(-0.5) / std::sqrt(fact);
        CHECK(std::abs(v.amplitudes(n) - expected) < 1e-13);
    }
    CHECK(matrix_mean_photons(v) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("build_state: squeezed coherent mean photons match the closed form")
{
    const FieldState st =
        SqueezedCoherent{SqueezeParams::make(1.0, 0.0), std::polar(1.0, pi / 4.0)};
    const FockVector v = build_state(st, {140});
    CHECK(std::abs(v.amplitudes.norm() - 1.0) < 1e-15); // renormalized exactly
    CHECK(matrix_mean_photons(v)
          == doctest::Approx(mean_photon_number(st)).epsilon(1e-10));
}

TEST_CASE("build_state: throws TruncationError when the basis is too small")
{
    CHECK_THROWS_AS(build_state(Coherent{cd(3.0, 0.0)}, {5}), TruncationError);
    CHECK_THROWS_AS(build_state(Fock{12}, {5}), TruncationError);
}

TEST_CASE("norm defect shrinks monotonically with the cutoff")
{
    for (const FieldState st :
         {FieldState(Coherent{cd(2.0, 0.0)}),
          FieldState(SqueezedCoherent{SqueezeParams::make(1.5, 1.0), std::polar(1.5, 0.7)})}) {
        double prev = 1.0;
        for (int n_max : {20, 40, 80}) {
            const FockVector v = build_state(st, {n_max}, 1.0); // tolerance off
            CHECK(v.norm_defect <= prev + 1e-15);
            prev = v.norm_defect;
        }
        // harsh squeezing still carries visible tail mass at 80 levels
        CHECK(prev < 1e-2);
    }
    CHECK(build_state(Coherent{cd(2.0, 0.0)}, {80}, 1.0).norm_defect < 1e-12);
}

TEST_CASE("displacement covariance <D0|a|D0> = alpha")
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> mag(0.0, 2.0), ang(0.0, 2.0 * pi);
    auto [a, adag] = ladder_matrices({80});
    for (int trial = 0; trial < 6; ++trial) {
        const cd alpha = std::polar(mag(rng), ang(rng));
        const FockVector v = build_state(Coherent{alpha}, {80});
        const cd mean = v.amplitudes.dot(a * v.amplitudes);
        CHECK(std::abs(mean - alpha) < 1e-10);
    }
}

TEST_CASE("mean photon number closed forms")
{
    CHECK(mean_photon_number(Coherent{cd(2.0, 0.0)}) == 4.0);
    CHECK(mean_photon_number(SqueezedVacuum{SqueezeParams::make(0.0, 0.0)}) == 0.0);
    CHECK(mean_photon_number(Fock{7}) == 7.0);

    // r = 1, |alpha| = 1, Psi = 0: sinh^2 + cosh^2 + sinh^2 - 2 sinh cosh
    const FieldState st = SqueezedCoherent{SqueezeParams::make(1.0, 0.0), cd(1.0, 0.0)};
    const double sh = std::sinh(1.0), ch = std::cosh(1.0);
    CHECK(mean_photon_number(st)
          == doctest::Approx(sh * sh + ch * ch + sh * sh - 2.0 * sh * ch).epsilon(1e-15));
    const FockVector v = build_state(st, {100});
    CHECK(mean_photon_number(st) == doctest::Approx(matrix_mean_photons(v)).epsilon(1e-10));
}

TEST_CASE("photon-number identity over the r / |alpha| / Psi grid")
{
    for (double r : {0.0, 0.5, 1.0}) {
        for (double alpha_abs : {0.0, 1.0, 2.0}) {
            for (double psi : {0.0, pi / 2.0, pi}) {
                const FieldState st = SqueezedCoherent{SqueezeParams::make(r, 0.0),
                                                       std::polar(alpha_abs, 0.5 * psi)};
                // displacement along the antisqueezed axis grows a fat
                // exponential number tail; enlarge until the defect is tiny
                int n_max = default_cutoff(st).n_max;
                FockVector v = build_state(st, {n_max}, 1.0);
                while (v.norm_defect > 2e-12 && n_max < 400) {
                    n_max = n_max * 5 / 4 + 16;
                    v = build_state(st, {n_max}, 1.0);
                }
                CHECK(std::abs(matrix_mean_photons(v) - mean_photon_number(st)) < 1e-8);
            }
        }
    }
}

TEST_CASE("pair moment closed form matches the matrix element")
{
    const FieldState states[] = {
        FieldState(Coherent{std::polar(1.3, 0.4)}),
        FieldState(SqueezedVacuum{SqueezeParams::make(0.8, 1.1)}),
        FieldState(SqueezedCoherent{SqueezeParams::make(0.6, 2.0), std::polar(0.9, 0.5)})};
    for (const auto& st : states) {
        const FockVector v = build_state(st, {100});
        CHECK(std::abs(pair_moment(st) - matrix_pair_moment(v)) < 1e-9);
    }
    CHECK(pair_moment(Fock{3}) == cd(0.0));
}

TEST_CASE("special-case collapse of squeezed coherent states")
{
    const cd alpha = std::polar(1.1, 0.6);
    const FockVector a = build_state(SqueezedCoherent{SqueezeParams::make(0.0, 0.0), alpha}, {60});
    const FockVector b = build_state(Coherent{alpha}, {60});
    CHECK((a.amplitudes - b.amplitudes).cwiseAbs().maxCoeff() < 1e-12);

    const SqueezeParams z = SqueezeParams::make(0.9, 0.8);
    const FockVector c = build_state(SqueezedCoherent{z, 0.0}, {80});
    const FockVector d = build_state(SqueezedVacuum{z}, {80});
    CHECK((c.amplitudes - d.amplitudes).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("bogoliubov residual")
{
    CHECK(bogoliubov_residual(SqueezeParams::make(0.0, 0.0), {40}) == 0.0);
    // squeezing spreads level j up to ~ j e^{2r}, so the identity only holds
    // where interior * e^{2r} stays inside the basis; guard pinned empirically
    CHECK(bogoliubov_residual(SqueezeParams::make(0.5, pi / 3.0), {60}, 52) < 1e-8);
    CHECK(bogoliubov_residual(SqueezeParams::make(0.5, pi / 3.0), {60}, 20) > 1e-3);
    // small basis, harsh squeeze: truncation artifacts swamp the whole block
    CHECK(bogoliubov_residual(SqueezeParams::make(2.0, 0.0), {20}, 2) > 1e-3);
}

TEST_CASE("matrix exponential agrees with a 20-term Taylor series at small norm")
{
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 12; ++trial) {
        Matrix m(12, 12);
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j)
                m(i, j) = cd(u(rng), u(rng));
        m *= 0.5 / m.norm(); // Frobenius norm bounds the operator norm
        const Matrix diff = matrix_exponential(m) - taylor_exponential(m, 20);
        CHECK(diff.cwiseAbs().maxCoeff() < 1e-14);
    }
}

TEST_CASE("default cutoff rule")
{
    CHECK(default_cutoff(Coherent{cd(0.5, 0.0)}).n_max == 30);
    CHECK(default_cutoff(SqueezedCoherent{SqueezeParams::make(1.0, 0.0), cd(2.0, 0.0)}).n_max
          == static_cast<int>(std::ceil(10.0 * (4.0 + std::exp(2.0)) + 8.0)));
    // the rule must be adequate for its own states
    for (double r : {0.0, 0.5, 1.0}) {
        for (double alpha_abs : {0.0, 1.0, 2.0}) {
            const FieldState st =
                SqueezedCoherent{SqueezeParams::make(r, 0.0), cd(alpha_abs, 0.0)};
            CHECK_NOTHROW(build_state(st, default_cutoff(st)));
        }
    }
}

TEST_CASE("squeeze parameter validation")
{
    const SqueezeParams z = SqueezeParams::make(0.5, -1.0);
    CHECK(z.phi >= 0.0);
    CHECK(z.phi < 2.0 * pi);
    CHECK_THROWS_AS(SqueezeParams::make(-0.1, 0.0), std::invalid_argument);
}
