#ifndef MODEINV_CAVITY_HPP
#define MODEINV_CAVITY_HPP

#include <string>
#include <vector>

#include "modeinv/numeric.hpp"

namespace modeinv {

/// Speed of light, m/s.  The library works in natural units (c = 1, lengths
/// in metres, times in metres); SI speeds and rates are converted on entry.
inline constexpr double speed_of_light = 2.99792458e8;

/// Dirichlet cavity crossed by a two-level probe at constant speed.
///
/// Natural units c = 1.  Mode kappa has wavenumber k = kappa*pi/L and equal
/// frequency.  `v` and `lambda` are dimensionless; `Omega` is the atomic gap
/// unless `resonant` is set, in which case the gap tracks the probed mode.
struct CavitySetup {
    double L = 0.25;        // cavity length
    int beta = 2;           // probed mode index (>= 1)
    double Omega = 0.0;     // atomic gap when not resonant
    double v = 3.3356409519815204e-6; // probe speed (fraction of c)
    double lambda = 1e-4;   // coupling strength
    bool resonant = true;   // tie Omega to mode beta

    double mode_wavenumber(int kappa) const { return kappa * pi / L; }
    double mode_frequency(int kappa) const { return kappa * pi / L; }
    double atom_gap() const { return resonant ? mode_frequency(beta) : Omega; }
    double flight_time() const { return L / v; }

    /// Throws std::invalid_argument on structurally bad parameters.
    void validate() const;

    /// Non-fatal advisories (e.g. v above the weakly-relativistic regime).
    std::vector<std::string> warnings() const;
};

/// Linear switching of the coupling, chi(t) = 1 - epsilon*t (natural units).
struct SwitchingProfile {
    double epsilon = 0.0;

    bool is_off() const { return epsilon == 0.0; }
    /// epsilon*T must stay below 1 so the coupling keeps its sign.
    void validate(double flight_time) const;
};

/// m/s -> dimensionless v.  Throws RangeError outside (0, c).
double convert_speed(double v_si);

/// 1/s -> natural-unit rate (1/m).  Throws RangeError for negatives.
double convert_rate(double rate_si);

} // namespace modeinv

#endif
