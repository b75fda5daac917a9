#pragma once

#include <complex>

#include "kronred/crn_model.hpp"

namespace kronred {

using ComplexMatrix = Eigen::MatrixXcd;

/// G(jw) = C (jw I - A)^{-1} B evaluated through an orthogonal Hessenberg
/// reduction of A computed once, so each frequency costs O(n^2 p).
class FrequencyResponse {
public:
    explicit FrequencyResponse(const OpenLinearSystem& sys);

    ComplexMatrix operator()(double omega) const;
    /// G(0) = -C A^{-1} B
    Matrix dc() const;
    Index order() const noexcept { return static_cast<Index>(H_.rows()); }
    Index num_inputs() const noexcept { return static_cast<Index>(B_.cols()); }
    Index num_outputs() const noexcept { return static_cast<Index>(C_.rows()); }

private:
    Matrix H_;
    Matrix B_;
    Matrix C_;
};

double sigma_max(const ComplexMatrix& G);

/// n log-spaced frequencies on [w_min, w_max]
std::vector<double> log_grid(double w_min, double w_max, Index n);

}  // namespace kronred
