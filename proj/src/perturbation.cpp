#include "modeinv/perturbation.hpp"

#include <cmath>
#include <sstream>

#include "modeinv/errors.hpp"

namespace modeinv::pert {

namespace {

using kernels::TransitionKernels;

// Population / squeeze / interference weights multiplying the probed-mode
// kernel factor.  They sum to the mean photon number of the state.
struct Weights {
    double population = 0.0;
    double squeeze = 0.0;
    double interference = 0.0;
};

Weights state_weights(const FieldState& state)
{
    struct Visitor {
        Weights operator()(const fock::Fock& f) const
        {
            return {static_cast<double>(f.n), 0.0, 0.0};
        }
        Weights operator()(const fock::Coherent& c) const
        {
            return {std::norm(c.alpha), 0.0, 0.0};
        }
        Weights operator()(const fock::SqueezedVacuum& s) const
        {
            const double sh = std::sinh(s.zeta.r);
            return {0.0, sh * sh, 0.0};
        }
        Weights operator()(const fock::SqueezedCoherent& sc) const
        {
            const double sh = std::sinh(sc.zeta.r);
            const double ch = std::cosh(sc.zeta.r);
            const double a2 = std::norm(sc.alpha);
            const double psi = 2.0 * std::arg(sc.alpha) - sc.zeta.phi;
            return {(ch * ch + sh * sh) * a2, sh * sh,
                    -2.0 * sh * ch * a2 * std::cos(psi)};
        }
    };
    return std::visit(Visitor{}, state);
}

cd second_order_bracket(const FieldState& state, const TransitionKernels& t)
{
    const double w = fock::mean_photon_number(state);
    const double kl = t.setup.beta * pi;
    return (std::conj(t.c_plus.value) + t.c_minus.value) / kl * w + t.c_sum.value;
}

} // namespace

ProbabilityResult assemble_probability(const FieldState& state, const TransitionKernels& t)
{
    const double lam2 = t.setup.lambda * t.setup.lambda;
    const double mode_factor = std::norm(t.k_minus.value) + std::norm(t.k_plus.value);
    const Weights w = state_weights(state);

    ProbabilityResult r;
    r.resonant_mode_term = lam2 * mode_factor * w.population;
    r.squeeze_term = lam2 * mode_factor * w.squeeze;
    r.interference_term = lam2 * mode_factor * w.interference;
    r.vacuum_sum_term = lam2 * t.i_sum.value.real();
    r.p_excite = r.resonant_mode_term + r.squeeze_term + r.interference_term
               + r.vacuum_sum_term;
    r.weak_adiabatic = r.p_excite < weak_adiabatic_threshold;
    return r;
}

PhaseResult assemble_phase(const FieldState& state, const TransitionKernels& t)
{
    const double lam2 = t.setup.lambda * t.setup.lambda;
    const cd bracket = lam2 * second_order_bracket(state, t);

    PhaseResult r;
    r.survival_amplitude = 1.0 - bracket;
    r.eta = cd(0.0, -1.0) * std::log(r.survival_amplitude);
    r.gamma = r.eta.real();
    r.branch_warning = std::abs(bracket) > 0.5;
    return r;
}

double assemble_linearized_phase(const FieldState& state, const TransitionKernels& t)
{
    const double lam2 = t.setup.lambda * t.setup.lambda;
    return -lam2 * second_order_bracket(state, t).imag();
}

ProbabilityResult excitation_probability(const FieldState& state, const CavitySetup& setup,
                                         double rel_tol)
{
    return assemble_probability(state, kernels::build_kernels(setup, rel_tol));
}

ProbabilityResult excitation_probability(const FieldState& state, const CavitySetup& setup,
                                         std::span<const int> modes)
{
    return assemble_probability(state, kernels::build_kernels_window(setup, modes));
}

PhaseResult acquired_phase(const FieldState& state, const CavitySetup& setup, double rel_tol)
{
    return assemble_phase(state, kernels::build_kernels(setup, rel_tol));
}

PhaseResult acquired_phase(const FieldState& state, const CavitySetup& setup,
                           std::span<const int> modes)
{
    return assemble_phase(state, kernels::build_kernels_window(setup, modes));
}

double linearized_phase(const FieldState& state, const CavitySetup& setup, double rel_tol)
{
    return assemble_linearized_phase(state, kernels::build_kernels(setup, rel_tol));
}

namespace {

void gate_weak_adiabatic(const ProbabilityResult& p, const char* arm)
{
    if (p.p_excite >= weak_adiabatic_threshold) {
        std::ostringstream os;
        os << arm << " arm P_e = " << p.p_excite << " >= " << weak_adiabatic_threshold
           << "; phase readout is not in the QND regime";
        throw WeakAdiabaticViolation(os.str());
    }
}

} // namespace

double interferometric_phase(const InterferometryConfig& config)
{
    const TransitionKernels t = kernels::build_kernels(config.setup, config.rel_tol);
    gate_weak_adiabatic(assemble_probability(config.target, t), "target");
    gate_weak_adiabatic(assemble_probability(config.reference, t), "reference");
    const cd a_t = assemble_phase(config.target, t).survival_amplitude;
    const cd a_r = assemble_phase(config.reference, t).survival_amplitude;
    return std::arg(a_t / a_r);
}

double phase_resolution(const ResolutionQuery& query, const InterferometryConfig& base)
{
    struct Points {
        FieldState first, second;
    };
    struct Visitor {
        Points operator()(const FockGap& q) const
        {
            if (q.n < 0 || q.m < 1)
                throw std::invalid_argument("FockGap needs n >= 0 and m >= 1");
            return {fock::Fock{q.n}, fock::Fock{q.n + q.m}};
        }
        Points operator()(const CoherentGap& q) const
        {
            if (!(q.delta_alpha > 0.0))
                throw std::invalid_argument("CoherentGap needs delta_alpha > 0");
            return {fock::Coherent{cd(q.alpha_abs, 0.0)},
                    fock::Coherent{cd(q.alpha_abs + q.delta_alpha, 0.0)}};
        }
        Points operator()(const SqueezeGap& q) const
        {
            if (!(q.delta_r > 0.0))
                throw std::invalid_argument("SqueezeGap needs delta_r > 0");
            return {fock::SqueezedVacuum{fock::SqueezeParams::make(q.r, 0.0)},
                    fock::SqueezedVacuum{fock::SqueezeParams::make(q.r + q.delta_r, 0.0)}};
        }
        Points operator()(const RelPhaseGap& q) const
        {
            if (!(q.delta_psi > 0.0))
                throw std::invalid_argument("RelPhaseGap needs delta_psi > 0");
            // realize Psi = 2 theta - phi with phi = 0, theta = Psi/2
            auto at = [&](double psi) {
                return fock::SqueezedCoherent{fock::SqueezeParams::make(q.r, 0.0),
                                              std::polar(q.alpha_abs, 0.5 * psi)};
            };
            return {at(q.psi), at(q.psi + q.delta_psi)};
        }
    };
    const Points pts = std::visit(Visitor{}, query);

    const TransitionKernels t = kernels::build_kernels(base.setup, base.rel_tol);
    const ProbabilityResult p1 = assemble_probability(pts.first, t);
    const ProbabilityResult p2 = assemble_probability(pts.second, t);
    const ProbabilityResult pr = assemble_probability(base.reference, t);
    gate_weak_adiabatic(p1, "first target");
    gate_weak_adiabatic(p2, "second target");
    gate_weak_adiabatic(pr, "reference");

    const cd a_ref = assemble_phase(base.reference, t).survival_amplitude;
    const double d1 = std::arg(assemble_phase(pts.first, t).survival_amplitude / a_ref);
    const double d2 = std::arg(assemble_phase(pts.second, t).survival_amplitude / a_ref);
    return d1 - d2;
}

double fringe_visibility(const InterferometryConfig& config)
{
    const TransitionKernels t = kernels::build_kernels(config.setup, config.rel_tol);
    const ProbabilityResult pt = assemble_probability(config.target, t);
    const ProbabilityResult pr = assemble_probability(config.reference, t);
    gate_weak_adiabatic(pt, "target");
    gate_weak_adiabatic(pr, "reference");
    return std::sqrt((1.0 - pt.p_excite) * (1.0 - pr.p_excite));
}

SweepTable stability_curve(const CavitySetup& setup, const FieldState& state,
                           std::span<const double> epsilons, double rel_tol)
{
    setup.validate();
    const double T = setup.flight_time();
    for (double eps : epsilons)
        SwitchingProfile{eps}.validate(T);

    const double baseline =
        assemble_probability(state, kernels::build_kernels(setup, rel_tol)).p_excite;

    SweepTable table;
    table.columns = {"epsilon", "p_excite", "p_minus_baseline"};
    std::vector<double> lx, ly;
    for (double eps : epsilons) {
        const auto kt = kernels::build_kernels(setup, rel_tol, SwitchingProfile{eps});
        const double p = assemble_probability(state, kt).p_excite;
        table.rows.push_back({eps, p, p - baseline});
        if (eps > 0.0 && p - baseline > 0.0) {
            lx.push_back(std::log(eps));
            ly.push_back(std::log(p - baseline));
        }
    }

    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", baseline);
    table.metadata.emplace_back("baseline_p", buf);
    if (lx.size() >= 2) {
        std::snprintf(buf, sizeof buf, "%.6f",
                      fit_slope(lx.data(), ly.data(), static_cast<int>(lx.size())));
        table.metadata.emplace_back("fit_slope", buf);
    }
    return table;
}

} // namespace modeinv::pert
