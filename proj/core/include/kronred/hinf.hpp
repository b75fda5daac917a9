#pragma once

#include <memory>
#include <string>

#include "kronred/frequency.hpp"

namespace kronred {

struct HinfOptions {
    Index grid_points = 4000;
    double w_min = 1e-4;
    double w_max = 1e4;
    /// relative bracket width at convergence of the Hamiltonian iteration
    double rel_tol = 1e-7;
    int max_iterations = 50;
    /// grid estimate and Hamiltonian result must agree to this relative level
    double agreement = 1e-3;
    /// skip the Hamiltonian step and report the refined grid peak
    bool grid_only = false;
};

struct ErrorNormReport {
    double hinf = 0.0;
    double peak_frequency = 0.0;
    /// "hamiltonian-bisection" or "grid"
    std::string method;
    Index grid_refinement = 0;
    double grid_estimate = 0.0;
    double lower = 0.0;
    double upper = 0.0;
    int iterations = 0;
    bool methods_agree = true;
};

/// Block-diagonal realization of G - G_hat: A = blkdiag(A, A_hat),
/// B = [B; B_hat], C = [C, -C_hat].
OpenLinearSystem error_system(const OpenLinearSystem& full, const OpenLinearSystem& reduced);

/// H-infinity norm of a strictly proper stable system.
ErrorNormReport hinf_norm(const OpenLinearSystem& sys, const HinfOptions& opts = {});

/// H-infinity norm of G - G_hat.
ErrorNormReport hinf_error(const OpenLinearSystem& full, const OpenLinearSystem& reduced,
                           const HinfOptions& opts = {});

/// Frequency samples of the full model shared by many hinf_error calls
/// against the same full system.
class FullResponseCache {
public:
    FullResponseCache(const OpenLinearSystem& full, const HinfOptions& opts);

    const OpenLinearSystem& system() const noexcept { return full_; }
    const FrequencyResponse& response() const noexcept { return response_; }
    const std::vector<double>& grid() const noexcept { return grid_; }
    const std::vector<ComplexMatrix>& samples() const noexcept { return samples_; }
    const Matrix& dc() const noexcept { return dc_; }
    const HinfOptions& options() const noexcept { return opts_; }

private:
    OpenLinearSystem full_;
    FrequencyResponse response_;
    HinfOptions opts_;
    std::vector<double> grid_;
    std::vector<ComplexMatrix> samples_;
    Matrix dc_;
};

ErrorNormReport hinf_error(const FullResponseCache& cache, const OpenLinearSystem& reduced);

}  // namespace kronred
