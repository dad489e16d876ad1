#include "modeinv/cavity.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "modeinv/errors.hpp"

namespace modeinv {

void CavitySetup::validate() const
{
    if (!(L > 0.0) || !std::isfinite(L))
        throw std::invalid_argument("CavitySetup: L must be positive and finite");
    if (beta < 1)
        throw std::invalid_argument("CavitySetup: beta must be >= 1");
    if (!(v > 0.0) || !(v < 1.0))
        throw std::invalid_argument("CavitySetup: v must lie in (0, 1)");
    if (!std::isfinite(lambda))
        throw std::invalid_argument("CavitySetup: lambda must be finite");
    if (!resonant && !(Omega > 0.0))
        throw std::invalid_argument("CavitySetup: Omega must be positive when not resonant");
}

std::vector<std::string> CavitySetup::warnings() const
{
    std::vector<std::string> w;
    if (v > 0.01) {
        std::ostringstream os;
        os << "v = " << v << " exceeds 0.01; the constant-speed, non-relativistic "
              "model is being stretched";
        w.push_back(os.str());
    }
    return w;
}

void SwitchingProfile::validate(double flight_time) const
{
    if (epsilon < 0.0 || !std::isfinite(epsilon))
        throw std::invalid_argument("SwitchingProfile: epsilon must be finite and >= 0");
    if (epsilon * flight_time >= 1.0)
        throw std::invalid_argument("SwitchingProfile: epsilon*T >= 1 flips the coupling sign");
}

double convert_speed(double v_si)
{
    if (!(v_si > 0.0) || !(v_si < speed_of_light))
        throw RangeError("speed must lie strictly between 0 and c");
    return v_si / speed_of_light;
}

double convert_rate(double rate_si)
{
    if (rate_si < 0.0 || !std::isfinite(rate_si))
        throw RangeError("rate must be finite and non-negative");
    return rate_si / speed_of_light;
}

} // namespace modeinv
