#include "kronred/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace kronred {

InputSignal InputSignal::zero(Index channels)
{
    return step(Vector::Zero(static_cast<Eigen::Index>(channels)));
}

InputSignal InputSignal::step(const Vector& magnitude)
{
    return piecewise({0.0}, {magnitude});
}

InputSignal InputSignal::piecewise(std::vector<double> breaks, std::vector<Vector> values)
{
    if (breaks.empty() || breaks.size() != values.size()) {
        throw InputError("input schedule: need one value per breakpoint");
    }
    if (breaks.front() != 0.0) {
        throw InputError("input schedule: first breakpoint must be t = 0");
    }
    for (std::size_t k = 1; k < breaks.size(); ++k) {
        if (!(breaks[k] > breaks[k - 1])) {
            throw InputError("input schedule: breakpoints must be strictly increasing");
        }
        if (values[k].size() != values[0].size()) {
            throw InputError("input schedule: inconsistent channel counts");
        }
    }
    InputSignal u;
    u.channels_ = static_cast<Index>(values[0].size());
    u.breaks_ = std::move(breaks);
    u.values_ = std::move(values);
    return u;
}

Vector InputSignal::at(double t) const
{
    auto it = std::upper_bound(breaks_.begin(), breaks_.end(), t);
    const auto k = it == breaks_.begin() ? 0 : static_cast<std::size_t>(it - breaks_.begin()) - 1;
    return values_[k];
}

std::vector<double> InputSignal::switches_before(double t_final) const
{
    std::vector<double> s;
    for (std::size_t k = 1; k < breaks_.size(); ++k) {
        if (breaks_[k] > 0.0 && breaks_[k] < t_final) {
            s.push_back(breaks_[k]);
        }
    }
    return s;
}

namespace {

// Dormand-Prince 5(4) tableau
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Trajectory integrate_dopri5(const OdeRhs& f, const Vector& x0, double t0, double t1, const OdeOptions& opts)
{
    if (!(t1 >= t0)) {
        throw InputError("integrate: t_final must not precede t0");
    }
    Trajectory tr;
    std::vector<double> stops = opts.output_times;
    std::sort(stops.begin(), stops.end());
    stops.erase(std::remove_if(stops.begin(), stops.end(), [&](double s) { return s < t0 || s > t1; }),
                stops.end());
    const bool dense = stops.empty();
    if (dense) {
        stops.push_back(t1);
    } else if (stops.back() != t1) {
        stops.push_back(t1);
    }
    auto record = [&](double t, const Vector& x) {
        tr.times.push_back(t);
        tr.states.push_back(x);
    };
    const bool want_t0 = dense || std::find(opts.output_times.begin(), opts.output_times.end(), t0)
                                       != opts.output_times.end();
    if (want_t0) {
        record(t0, x0);
    }
    if (t1 == t0) {
        return tr;
    }

    const Eigen::Index n = x0.size();
    auto err_norm = [&](const Vector& x, const Vector& xn, const Vector& err) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double sc = opts.atol + opts.rtol * std::max(std::abs(x(i)), std::abs(xn(i)));
            s += (err(i) / sc) * (err(i) / sc);
        }
        return n == 0 ? 0.0 : std::sqrt(s / static_cast<double>(n));
    };

    double t = t0;
    Vector x = x0;
    Vector k1 = f(t, x);
    double h = opts.h_init;
    if (!(h > 0.0)) {
        const double d0 = x.size() ? x.cwiseAbs().maxCoeff() : 0.0;
        const double d1 = k1.size() ? k1.cwiseAbs().maxCoeff() : 0.0;
        h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
        h = std::min(h, t1 - t0);
    }
    std::size_t next_stop = 0;
    while (next_stop < stops.size()) {
        if (tr.accepted_steps + tr.rejected_steps > opts.max_steps) {
            throw NumericalError("integrate: maximum number of steps exceeded");
        }
        const double target = stops[next_stop];
        bool lands = false;
        double hs = h;
        if (t + hs >= target || target - (t + hs) < 1e-12 * std::max(1.0, std::abs(target))) {
            hs = target - t;
            lands = true;
        }
        if (hs < opts.h_min) {
            if (lands && hs >= 0.0) {
                // target is within rounding of t; treat as reached
                t = target;
                if (!dense) {
                    record(t, x);
                }
                ++next_stop;
                continue;
            }
            std::ostringstream os;
            os << "integrate: step size underflow (h = " << hs << " at t = " << t
               << "); the problem is stiff or the state is near the positivity boundary, "
                  "try a shorter horizon";
            throw NumericalError(os.str());
        }
        // stage states outside the positive orthant reject the step
        bool outside = false;
        auto stage = [&](double ts, const Vector& xs) -> Vector {
            if (!xs.allFinite() || (xs.size() && xs.cwiseAbs().maxCoeff() > opts.blowup)) {
                throw NumericalError("integrate: state overflow; the system is unstable on this horizon");
            }
            if (outside || (opts.positivity_guard && (xs.array() <= 0.0).any())) {
                outside = true;
                return Vector::Zero(xs.size());
            }
            return f(ts, xs);
        };
        const Vector k2 = stage(t + c2 * hs, x + hs * (a21 * k1));
        const Vector k3 = stage(t + c3 * hs, x + hs * (a31 * k1 + a32 * k2));
        const Vector k4 = stage(t + c4 * hs, x + hs * (a41 * k1 + a42 * k2 + a43 * k3));
        const Vector k5 = stage(t + c5 * hs, x + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
        const Vector k6 = stage(t + hs, x + hs * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
        const Vector xn = x + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        const Vector k7 = stage(t + hs, xn);
        if (outside) {
            ++tr.rejected_steps;
            h = 0.5 * hs;
            continue;
        }
        const Vector err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        const double en = err_norm(x, xn, err);
        if (en <= 1.0) {
            ++tr.accepted_steps;
            t = lands ? target : t + hs;
            x = xn;
            k1 = k7;
            if (dense) {
                record(t, x);
            }
            if (lands) {
                if (!dense) {
                    record(t, x);
                }
                ++next_stop;
            }
            const double fac = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
            h = lands ? std::max(h, hs * fac) : hs * fac;
        } else {
            ++tr.rejected_steps;
            h = hs * std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9);
        }
    }
    return tr;
}

namespace {

Trajectory piecewise_run(const std::function<Vector(double, const Vector&, const Vector&)>& rhs,
                         const InputSignal& u, double t_final, const Vector& x0, const OdeOptions& opts)
{
    std::vector<double> edges{0.0};
    for (double s : u.switches_before(t_final)) {
        edges.push_back(s);
    }
    edges.push_back(t_final);
    Trajectory all;
    Vector x = x0;
    for (std::size_t seg = 0; seg + 1 < edges.size(); ++seg) {
        const double a = edges[seg];
        const double b = edges[seg + 1];
        const Vector useg = u.at(a);
        OdeOptions o = opts;
        if (!opts.output_times.empty()) {
            o.output_times.clear();
            for (double s : opts.output_times) {
                if (s >= a && (s < b || (seg + 2 == edges.size() && s <= b))) {
                    o.output_times.push_back(s);
                }
            }
            o.output_times.push_back(b);
        }
        Trajectory part = integrate_dopri5([&](double t, const Vector& y) { return rhs(t, y, useg); }, x, a, b, o);
        x = part.states.back();
        const bool last = seg + 2 == edges.size();
        for (std::size_t i = 0; i < part.times.size(); ++i) {
            const bool dup = !all.times.empty() && part.times[i] <= all.times.back();
            const bool forced_edge = !opts.output_times.empty() && !last && part.times[i] == b
                && std::find(opts.output_times.begin(), opts.output_times.end(), b) == opts.output_times.end();
            if (dup || forced_edge) {
                continue;
            }
            all.times.push_back(part.times[i]);
            all.states.push_back(part.states[i]);
        }
        all.accepted_steps += part.accepted_steps;
        all.rejected_steps += part.rejected_steps;
    }
    return all;
}

}  // namespace

Trajectory simulate_linear(const OpenLinearSystem& sys, const InputSignal& u, double t_final, const Vector& x0,
                           const OdeOptions& opts)
{
    if (static_cast<Index>(x0.size()) != sys.order()) {
        throw InputError("simulate_linear: x0 has the wrong dimension");
    }
    if (u.channels() != sys.num_inputs()) {
        throw InputError("simulate_linear: input has the wrong number of channels");
    }
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
        throw InputError("simulate_linear: t_final must be positive and finite");
    }
    Trajectory tr = piecewise_run(
        [&](double, const Vector& x, const Vector& v) { return Vector(sys.A * x + sys.B * v); }, u, t_final, x0,
        opts);
    for (const auto& x : tr.states) {
        tr.outputs.push_back(sys.C * x);
    }
    return tr;
}

Trajectory simulate_mass_action(const CrnNetwork& net, const InputSignal& v_in, double t_final, const Vector& x0,
                                const OdeOptions& opts)
{
    if (static_cast<Index>(x0.size()) != net.num_species()) {
        throw InputError("simulate_mass_action: x0 has the wrong dimension");
    }
    if ((x0.array() <= 0.0).any()) {
        throw DomainError("simulate_mass_action: initial concentrations must be strictly positive");
    }
    if (v_in.channels() != net.num_inputs()) {
        throw InputError("simulate_mass_action: input has the wrong number of channels");
    }
    if (!(t_final > 0.0) || !std::isfinite(t_final)) {
        throw InputError("simulate_mass_action: t_final must be positive and finite");
    }
    OdeOptions o = opts;
    o.positivity_guard = true;
    Trajectory tr = piecewise_run(
        [&](double, const Vector& x, const Vector& v) { return mass_action_rhs(net, x, v); }, v_in, t_final, x0, o);
    const Matrix C = net.output_selection();
    for (const auto& x : tr.states) {
        tr.outputs.push_back(C * complex_monomials(net.complex_matrix(), x));
    }
    return tr;
}

double default_horizon(const Matrix& A)
{
    if (A.rows() == 0) {
        return 1.0;
    }
    const Eigen::VectorXcd ev = A.eigenvalues();
    double slow = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        slow = std::min(slow, std::abs(ev(i).real()));
    }
    if (!(slow > 0.0)) {
        throw NumericalError("default_horizon: A has an eigenvalue on the imaginary axis");
    }
    return 10.0 / slow;
}

}  // namespace kronred
