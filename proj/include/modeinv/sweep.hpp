#ifndef MODEINV_SWEEP_HPP
#define MODEINV_SWEEP_HPP

#include <map>
#include <string>
#include <vector>

#include "modeinv/fockspace.hpp"
#include "modeinv/perturbation.hpp"
#include "modeinv/table.hpp"

namespace modeinv::sweep {

/// Flat description of a single-mode field state as it appears in config files.
struct StateSpec {
    std::string kind = "coherent"; // fock | coherent | squeezed_vacuum | squeezed_coherent
    int n = 0;
    double alpha_abs = 1.0;
    double alpha_arg = 0.0;
    double r = 0.0;
    double phi = 0.0;
};

fock::FieldState make_state(const StateSpec& s);

/// One sweep: an observable, a swept parameter on a grid, and the fixed
/// cavity/state configuration.  Parsed from a flat key = value file; every
/// key here round-trips through the CSV metadata echo.
struct SweepSpec {
    std::string observable = "phase";
    // probability | phase | interferometric_phase | resolution | visibility | stability
    std::string param = "alpha_abs";
    // alpha_abs | Psi | r | n | alpha_R | epsilon_si | lambda | v_si | Omega
    double min = 0.0;
    double max = 1.0;
    int points = 2;
    std::string scale = "linear"; // linear | log

    StateSpec target;
    StateSpec reference; // coherent alpha_R = 1 by default

    double L = 0.25;
    int beta = 2;
    bool resonant = true;
    double Omega = 0.0;   // used when resonant = false
    double v_si = 1000.0; // probe speed, m/s
    double lambda = 1e-4;
    double rel_tol = 1e-8;
    double epsilon_si = 0.0; // fixed switching rate (1/s) when not swept

    std::string res_kind = "fock_gap";
    int res_m = 5;
    double res_delta_alpha = 1.0;
    double res_delta_r = 1.0;
    double res_delta_psi = 0.1 * pi;

    std::string output; // CSV path; empty = stdout
    bool svg = false;   // also emit <output>.svg
};

SweepSpec parse_spec(const std::map<std::string, std::string>& kv);
SweepSpec parse_spec_file(const std::string& path);
std::vector<std::pair<std::string, std::string>> spec_to_kv(const SweepSpec& spec);

/// Evaluate the observable over the grid (points run in parallel, output
/// ordered by grid index).  Deterministic for a fixed spec; the metadata
/// echo re-parses to the same spec.
SweepTable run_sweep(const SweepSpec& spec);

std::vector<std::string> recipe_names();
bool is_family_recipe(const std::string& name);

/// The fixed parameter choices behind each built-in figure recipe.
SweepSpec recipe_spec(const std::string& name);

/// Run a recipe; family recipes (several curves per figure) come back as one
/// table with one value column per family member.
SweepTable run_recipe(const std::string& name);

} // namespace modeinv::sweep

#endif
