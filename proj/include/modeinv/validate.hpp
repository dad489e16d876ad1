#ifndef MODEINV_VALIDATE_HPP
#define MODEINV_VALIDATE_HPP

#include <string>
#include <vector>

namespace modeinv::validate {

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double bound = 0.0;
    std::string note;
};

struct ValidationReport {
    std::string preset;
    std::vector<CheckResult> checks;
    bool all_pass() const;
};

std::vector<std::string> preset_names(); // quick | reductions | scaling

/// Run the named suite of oracle-vs-formula and identity checks.  Numerical
/// trouble is reported as a failing check, never as a crash.
ValidationReport run_preset(const std::string& name);

} // namespace modeinv::validate

#endif
