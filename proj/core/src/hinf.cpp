#include "kronred/hinf.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace kronred {

namespace {

struct Peak {
    double value = 0.0;
    double omega = 0.0;
};

template <typename Eval>
Peak golden_refine(const Eval& eval, double w_lo, double w_hi, Peak best)
{
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = std::log10(w_lo);
    double b = std::log10(w_hi);
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = sigma_max(eval(std::pow(10.0, c)));
    double fd = sigma_max(eval(std::pow(10.0, d)));
    for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = sigma_max(eval(std::pow(10.0, c)));
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = sigma_max(eval(std::pow(10.0, d)));
        }
    }
    if (fc > best.value) {
        best = {fc, std::pow(10.0, c)};
    }
    if (fd > best.value) {
        best = {fd, std::pow(10.0, d)};
    }
    return best;
}

/// Imaginary-axis crossings of sigma_max(G(jw)) = gamma from the Hamiltonian.
std::vector<double> crossings(const OpenLinearSystem& sys, double gamma)
{
    const Eigen::Index n = sys.A.rows();
    Matrix H(2 * n, 2 * n);
    H.topLeftCorner(n, n) = sys.A;
    H.topRightCorner(n, n) = sys.B * sys.B.transpose() / gamma;
    H.bottomLeftCorner(n, n) = -sys.C.transpose() * sys.C / gamma;
    H.bottomRightCorner(n, n) = -sys.A.transpose();
    Eigen::EigenSolver<Matrix> es(H, false);
    if (es.info() != Eigen::Success) {
        throw NumericalError("hinf: Hamiltonian eigenvalue iteration did not converge");
    }
    const double tol = 1e-8 * std::max(1.0, H.norm());
    std::vector<double> w;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
        const auto lam = es.eigenvalues()(i);
        if (std::abs(lam.real()) <= tol) {
            w.push_back(std::abs(lam.imag()));
        }
    }
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end(), [](double x, double y) { return std::abs(x - y) <= 1e-12 * (1.0 + y); }),
            w.end());
    return w;
}

template <typename Eval, typename GridEval>
ErrorNormReport hinf_core(const OpenLinearSystem& realization, const Eval& eval, const GridEval& grid_eval,
                          const Matrix& dc, const std::vector<double>& grid, const HinfOptions& opts)
{
    ErrorNormReport rep;
    Peak best{dc.size() == 0 ? 0.0 : sigma_max(dc.cast<std::complex<double>>()), 0.0};
    Index best_k = grid.size();
    for (Index k = 0; k < grid.size(); ++k) {
        const double s = sigma_max(grid_eval(k));
        if (s > best.value) {
            best = {s, grid[k]};
            best_k = k;
        }
    }
    rep.grid_refinement = grid.size();
    if (best_k < grid.size()) {
        const double lo = best_k > 0 ? grid[best_k - 1] : grid[best_k] * 0.5;
        const double hi = best_k + 1 < grid.size() ? grid[best_k + 1] : grid[best_k] * 2.0;
        best = golden_refine(eval, lo, hi, best);
    }
    rep.grid_estimate = best.value;
    rep.hinf = best.value;
    rep.peak_frequency = best.omega;
    rep.lower = best.value;
    rep.upper = best.value;
    if (opts.grid_only || best.value == 0.0) {
        rep.method = "grid";
        return rep;
    }
    rep.method = "hamiltonian-bisection";
    double lb = best.value;
    double w_peak = best.omega;
    double ub = lb;
    for (int it = 0; it < opts.max_iterations; ++it) {
        rep.iterations = it + 1;
        const double gamma = (1.0 + 2.0 * opts.rel_tol) * lb;
        const std::vector<double> w = crossings(realization, gamma);
        if (w.empty()) {
            ub = gamma;
            break;
        }
        std::vector<double> probe;
        probe.push_back(0.0);
        double prev = 0.0;
        for (double x : w) {
            probe.push_back(0.5 * (prev + x));
            prev = x;
        }
        probe.push_back(std::sqrt(prev * prev + 1.0) + prev);
        double improved = lb;
        double w_best = w_peak;
        for (double x : probe) {
            const double s = x == 0.0 ? sigma_max(dc.cast<std::complex<double>>()) : sigma_max(eval(x));
            if (s > improved) {
                improved = s;
                w_best = x;
            }
        }
        if (improved <= gamma) {
            // crossings without a verified excursion above gamma: accept the bracket
            ub = gamma;
            break;
        }
        lb = improved;
        w_peak = w_best;
        ub = lb;
    }
    rep.hinf = lb;
    rep.peak_frequency = w_peak;
    rep.lower = lb;
    rep.upper = ub;
    rep.methods_agree = std::abs(rep.hinf - rep.grid_estimate) <= opts.agreement * rep.hinf;
    return rep;
}

}  // namespace

OpenLinearSystem error_system(const OpenLinearSystem& full, const OpenLinearSystem& reduced)
{
    if (full.num_inputs() != reduced.num_inputs() || full.num_outputs() != reduced.num_outputs()) {
        throw InputError("error_system: input/output dimensions differ");
    }
    const auto n = full.A.rows();
    const auto m = reduced.A.rows();
    OpenLinearSystem e;
    e.A = Matrix::Zero(n + m, n + m);
    e.A.topLeftCorner(n, n) = full.A;
    e.A.bottomRightCorner(m, m) = reduced.A;
    e.B.resize(n + m, full.B.cols());
    e.B << full.B, reduced.B;
    e.C.resize(full.C.rows(), n + m);
    e.C << full.C, -reduced.C;
    return e;
}

ErrorNormReport hinf_norm(const OpenLinearSystem& sys, const HinfOptions& opts)
{
    if (!is_hurwitz(sys.A)) {
        throw NumericalError("hinf: system is not Hurwitz");
    }
    const FrequencyResponse G(sys);
    const auto grid = log_grid(opts.w_min, opts.w_max, opts.grid_points);
    const Matrix dc = G.dc();
    return hinf_core(
        sys, [&](double w) { return G(w); }, [&](Index k) { return G(grid[k]); }, dc, grid, opts);
}

FullResponseCache::FullResponseCache(const OpenLinearSystem& full, const HinfOptions& opts)
    : full_(full), response_(full), opts_(opts), grid_(log_grid(opts.w_min, opts.w_max, opts.grid_points))
{
    if (!is_hurwitz(full.A)) {
        throw NumericalError("hinf: full system is not Hurwitz");
    }
    samples_.reserve(grid_.size());
    for (double w : grid_) {
        samples_.push_back(response_(w));
    }
    dc_ = response_.dc();
}

ErrorNormReport hinf_error(const FullResponseCache& cache, const OpenLinearSystem& reduced)
{
    if (reduced.order() > 0 && !is_hurwitz(reduced.A)) {
        throw NumericalError("hinf: reduced system is not Hurwitz");
    }
    const FrequencyResponse Gr(reduced);
    const auto& G = cache.response();
    const auto& grid = cache.grid();
    const auto& samples = cache.samples();
    const Matrix dc = cache.dc() - Gr.dc();
    return hinf_core(
        error_system(cache.system(), reduced), [&](double w) { return ComplexMatrix(G(w) - Gr(w)); },
        [&](Index k) { return ComplexMatrix(samples[k] - Gr(grid[k])); }, dc, grid, cache.options());
}

ErrorNormReport hinf_error(const OpenLinearSystem& full, const OpenLinearSystem& reduced, const HinfOptions& opts)
{
    return hinf_error(FullResponseCache(full, opts), reduced);
}

}  // namespace kronred
