#pragma once

#include <functional>

#include "kronred/crn_model.hpp"

namespace kronred {

/// Piecewise-constant input u(t). A step is a single piece from t = 0.
class InputSignal {
public:
    static InputSignal zero(Index channels);
    static InputSignal step(const Vector& magnitude);
    /// values[k] holds on [breaks[k], breaks[k+1]); breaks[0] must be 0.
    static InputSignal piecewise(std::vector<double> breaks, std::vector<Vector> values);

    Vector at(double t) const;
    Index channels() const noexcept { return channels_; }
    /// Switching times strictly inside (0, t_final).
    std::vector<double> switches_before(double t_final) const;

private:
    Index channels_ = 0;
    std::vector<double> breaks_;
    std::vector<Vector> values_;
};

struct OdeOptions {
    double rtol = 1e-8;
    double atol = 1e-10;
    double h_min = 1e-14;
    double h_init = 0.0;  // 0: automatic
    std::size_t max_steps = 10'000'000;
    /// reject steps that produce nonpositive components and halve h
    bool positivity_guard = false;
    /// if nonempty, the trajectory is recorded exactly at these times
    std::vector<double> output_times;
    /// overflow guard on |x|_inf
    double blowup = 1e100;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> states;
    std::vector<Vector> outputs;
    std::size_t accepted_steps = 0;
    std::size_t rejected_steps = 0;
};

using OdeRhs = std::function<Vector(double, const Vector&)>;

/// Dormand-Prince 5(4) with PI-free standard step control. Integrates on
/// [t0, t1] from x0; records every accepted step (or opts.output_times).
Trajectory integrate_dopri5(const OdeRhs& f, const Vector& x0, double t0, double t1, const OdeOptions& opts = {});

Trajectory simulate_linear(const OpenLinearSystem& sys, const InputSignal& u, double t_final, const Vector& x0,
                           const OdeOptions& opts = {});

/// Mass-action dynamics with the positivity guard always on. x0 > 0.
Trajectory simulate_mass_action(const CrnNetwork& net, const InputSignal& v_in, double t_final, const Vector& x0,
                                const OdeOptions& opts = {});

/// 10 / |Re lambda_slowest(A)|
double default_horizon(const Matrix& A);

}  // namespace kronred
