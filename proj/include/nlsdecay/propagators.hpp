#ifndef NLSDECAY_PROPAGATORS_HPP
#define NLSDECAY_PROPAGATORS_HPP

#include <functional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "nlsdecay/equation.hpp"
#include "nlsdecay/fft.hpp"
#include "nlsdecay/field.hpp"

namespace nlsdecay {

/// Split-step integrator settings.
struct SolverConfig {
    double dt = 1e-3;
    double t_end = 1.0;
    int snapshot_cadence = 10;   // store every k-th step
    bool dealias = true;         // 2/3-rule mask each step
    int steps() const;           // t_end / dt, validated to reconstruct t_end
    void validate() const;
};

/// Exact free propagator e^{it Lap}: spectral rotation by e^{-i|k|^2 t}.
/// Mass-preserving; group property holds to roundoff.  Negative t allowed.
ComplexField linear_propagate(const ComplexField& f, double t);

/// Exact flow of i u_t = |u|^(q-1) u with the Laplacian frozen:
/// u <- u * e^{-i |u|^(q-1) dt}.  Pointwise modulus preserved.
ComplexField nonlinear_phase_step(const ComplexField& f, double dt, const EquationSpec& eq);

/// Second-order splitting: half linear, full nonlinear phase, half linear.
/// Accepts negative dt (the flow is time-reversible).
ComplexField strang_step(const ComplexField& f, double dt, const EquationSpec& eq,
                         bool dealias = false);

/// Ordered (time, field) snapshots of one evolution.
struct TrajectoryHistory {
    EquationSpec equation;
    GridSpec grid;
    ComplexField initial_datum;
    std::vector<std::pair<double, ComplexField>> snapshots;

    std::size_t size() const { return snapshots.size(); }
    double time_at(std::size_t i) const { return snapshots[i].first; }
    const ComplexField& field_at(std::size_t i) const { return snapshots[i].second; }
};

/// Thrown when the state stops being finite mid-run; carries the field
/// captured at detection for forensics (it may itself contain the first
/// non-finite entries).  The last healthy snapshot is whatever the caller
/// stored before this step.
struct SolverBlowup : std::runtime_error {
    int step_index;
    ComplexField at_detection;
    SolverBlowup(int step, ComplexField state)
        : std::runtime_error("solver state became non-finite at step " +
                             std::to_string(step)),
          step_index(step),
          at_detection(std::move(state)) {}
};

/// Incremental split-step evolution owning the spectral state.  The state
/// advances strictly serially in model time; stepping is deterministic.
/// Used directly by the experiment runner (checkpointing needs to pause
/// and restore the loop); evolve() below wraps it.
class Evolution {
  public:
    Evolution(const ComplexField& u0, const EquationSpec& eq, const SolverConfig& cfg);

    /// Restore from a previously captured spectral state at step_index.
    Evolution(SpectralField state, int step_index, const EquationSpec& eq,
              const SolverConfig& cfg);

    /// Advance one step; throws SolverBlowup if the state goes non-finite.
    void step();

    int step_index() const { return step_; }
    double time() const { return step_ * cfg_.dt; }
    bool done() const { return step_ >= cfg_.steps(); }

    const SpectralField& spectral_state() const { return state_; }
    ComplexField field() const;  // physical-space state at the current time

    /// L2 norm of the current state (via Parseval, no transform needed).
    double mass() const;

    const SolverConfig& config() const { return cfg_; }
    const EquationSpec& equation() const { return eq_; }

  private:
    EquationSpec eq_;
    SolverConfig cfg_;
    Transformer transformer_;
    SpectralField state_;
    int step_ = 0;
    std::vector<cplx> half_kick_;  // e^{-i |k|^2 dt/2} table
    std::vector<double> mask_;
};

using StepObserver = std::function<void(double t, const ComplexField& u)>;

/// Run the full evolution, collecting snapshots at the configured cadence
/// (the final time is always stored).  Observers are invoked every step
/// with the end-of-step state.
TrajectoryHistory evolve(const ComplexField& u0, const EquationSpec& eq,
                         const SolverConfig& cfg,
                         const std::vector<StepObserver>& observers = {});

/// Torus wrap-around validity window (2l - 4*width) / (2*K): the time for
/// bulk spectral content (K = radius holding 99% of the spectral mass,
/// group velocity 2K) to reach the nearest periodic image, with width the
/// RMS spatial width.  Sup-norm diagnostics are whole-space faithful only
/// up to this time.
double validity_window(const ComplexField& u0);

}  // namespace nlsdecay

#endif
