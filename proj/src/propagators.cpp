#include "nlsdecay/propagators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlsdecay/kernels.hpp"
#include "nlsdecay/norms.hpp"

namespace nlsdecay {

int SolverConfig::steps() const {
    const double raw = t_end / dt;
    const int n = static_cast<int>(std::lround(raw));
    if (n <= 0 || std::abs(n * dt - t_end) > 1e-12 * std::max(1.0, t_end))
        throw std::invalid_argument("SolverConfig: dt does not divide t_end");
    return n;
}

void SolverConfig::validate() const {
    if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
    if (!(t_end > 0.0)) throw std::invalid_argument("SolverConfig: t_end must be positive");
    if (snapshot_cadence <= 0)
        throw std::invalid_argument("SolverConfig: snapshot_cadence must be positive");
    (void)steps();
}

ComplexField linear_propagate(const ComplexField& f, double t) {
    SpectralField F = forward_transform(f);
    const FrequencyLattice lattice(f.grid);
    kernels::rotate_by_table(F.values, lattice.k_squared(), -t);
    ComplexField out = inverse_transform(F);
    if (f.time_stamp) out.time_stamp = *f.time_stamp + t;
    return out;
}

ComplexField nonlinear_phase_step(const ComplexField& f, double dt, const EquationSpec& eq) {
    eq.validate();
    ComplexField out = f;
    if (!eq.linear) kernels::nonlinear_phase(out.values, -dt, eq.power_q - 1);
    if (f.time_stamp) out.time_stamp = *f.time_stamp + dt;
    return out;
}

ComplexField strang_step(const ComplexField& f, double dt, const EquationSpec& eq,
                         bool dealias) {
    eq.validate();
    if (dt == 0.0) throw std::invalid_argument("strang_step: dt must be nonzero");
    const FrequencyLattice lattice(f.grid);
    SpectralField F = forward_transform(f);
    kernels::rotate_by_table(F.values, lattice.k_squared(), -0.5 * dt);
    ComplexField u = inverse_transform(F);
    if (!eq.linear) kernels::nonlinear_phase(u.values, -dt, eq.power_q - 1);
    F = forward_transform(u);
    kernels::rotate_by_table(F.values, lattice.k_squared(), -0.5 * dt);
    if (dealias) {
        const auto mask = dealias_mask(f.grid);
        kernels::multiply_real(F.values, mask);
    }
    ComplexField out = inverse_transform(F);
    if (f.time_stamp) out.time_stamp = *f.time_stamp + dt;
    return out;
}

Evolution::Evolution(const ComplexField& u0, const EquationSpec& eq, const SolverConfig& cfg)
    : eq_(eq), cfg_(cfg), transformer_(u0.grid), state_(transformer_.forward(u0)) {
    eq_.validate();
    cfg_.validate();
    const FrequencyLattice lattice(u0.grid);
    const auto& k2 = lattice.k_squared();
    half_kick_.resize(k2.size());
    for (std::size_t i = 0; i < k2.size(); ++i) {
        const double phi = -0.5 * cfg_.dt * k2[i];
        half_kick_[i] = cplx(std::cos(phi), std::sin(phi));
    }
    if (cfg_.dealias) mask_ = dealias_mask(u0.grid);
}

Evolution::Evolution(SpectralField state, int step_index, const EquationSpec& eq,
                     const SolverConfig& cfg)
    : eq_(eq), cfg_(cfg), transformer_(state.grid), state_(std::move(state)),
      step_(step_index) {
    eq_.validate();
    cfg_.validate();
    const FrequencyLattice lattice(state_.grid);
    const auto& k2 = lattice.k_squared();
    half_kick_.resize(k2.size());
    for (std::size_t i = 0; i < k2.size(); ++i) {
        const double phi = -0.5 * cfg_.dt * k2[i];
        half_kick_[i] = cplx(std::cos(phi), std::sin(phi));
    }
    if (cfg_.dealias) mask_ = dealias_mask(state_.grid);
}

void Evolution::step() {
    kernels::multiply_pointwise(state_.values, half_kick_);
    ComplexField u = transformer_.inverse(state_);
    if (!eq_.linear) kernels::nonlinear_phase(u.values, -cfg_.dt, eq_.power_q - 1);
    state_ = transformer_.forward(u);
    kernels::multiply_pointwise(state_.values, half_kick_);
    if (!mask_.empty()) kernels::multiply_real(state_.values, mask_);
    ++step_;
    const double m = mass();
    if (!std::isfinite(m)) {
        // roll back to the last finite physical state we can still produce
        throw SolverBlowup(step_, u);
    }
}

ComplexField Evolution::field() const {
    ComplexField u = transformer_.inverse(state_);
    u.time_stamp = time();
    return u;
}

double Evolution::mass() const { return spectral_l2_norm(state_); }

TrajectoryHistory evolve(const ComplexField& u0, const EquationSpec& eq,
                         const SolverConfig& cfg,
                         const std::vector<StepObserver>& observers) {
    if (!kernels::all_finite(u0.values))
        throw std::invalid_argument("evolve: initial datum contains non-finite values");
    Evolution evo(u0, eq, cfg);

    TrajectoryHistory history;
    history.equation = eq;
    history.grid = u0.grid;
    history.initial_datum = u0;
    history.initial_datum.time_stamp = 0.0;
    history.snapshots.emplace_back(0.0, history.initial_datum);

    const int total_steps = cfg.steps();
    for (int s = 1; s <= total_steps; ++s) {
        evo.step();
        const bool want_snapshot = (s % cfg.snapshot_cadence == 0) || (s == total_steps);
        if (!observers.empty() || want_snapshot) {
            ComplexField u = evo.field();
            for (const auto& obs : observers) obs(evo.time(), u);
            if (want_snapshot) history.snapshots.emplace_back(evo.time(), std::move(u));
        }
    }
    return history;
}

double validity_window(const ComplexField& u0) {
    const SpectralField F = forward_transform(u0);
    const FrequencyLattice lattice(u0.grid);
    const auto& k2 = lattice.k_squared();

    // spectral radius holding 99% of the mass; the far tail carries too
    // little amplitude to matter at the tolerances the window guards
    const double total = kernels::sum_abs2(F.values);
    if (total == 0.0) return 0.0;
    std::vector<std::pair<double, double>> by_k2(k2.size());
    for (std::size_t i = 0; i < k2.size(); ++i)
        by_k2[i] = {k2[i], std::norm(F.values[i])};
    std::sort(by_k2.begin(), by_k2.end());
    double cum = 0.0;
    double radius2 = 0.0;
    const double target = 0.99 * total;
    for (const auto& [kk, w] : by_k2) {
        cum += w;
        radius2 = kk;
        if (cum >= target) break;
    }
    const double k_content = std::sqrt(radius2);

    // RMS width per axis from the physical profile
    const double mass2 = kernels::sum_abs2(u0.values);
    double second = 0.0;
    const std::size_t totaln = u0.size();
    for (std::size_t i = 0; i < totaln; ++i) {
        const auto x = u0.grid.point(i);
        double r2 = 0.0;
        for (int a = 0; a < u0.grid.dimension; ++a)
            r2 += x[static_cast<std::size_t>(a)] * x[static_cast<std::size_t>(a)];
        second += r2 * std::norm(u0.values[i]);
    }
    const double width = std::sqrt(second / mass2 / u0.grid.dimension);

    if (k_content <= 0.0) return std::numeric_limits<double>::infinity();
    // nearest periodic image sits 2l away; bulk content moving at group
    // velocity 2k pollutes near-center sup norms once it covers that gap
    return std::max(0.0, (2.0 * u0.grid.half_width - 4.0 * width) /
                              (2.0 * k_content));
}

}  // namespace nlsdecay
