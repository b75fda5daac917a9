#include "kronred/frequency.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace kronred {

FrequencyResponse::FrequencyResponse(const OpenLinearSystem& sys)
{
    const Eigen::Index n = sys.A.rows();
    if (n == 0) {
        H_ = Matrix(0, 0);
        B_ = Matrix(0, sys.B.cols());
        C_ = Matrix(sys.C.rows(), 0);
        return;
    }
    Eigen::HessenbergDecomposition<Matrix> hd(sys.A);
    const Matrix Q = hd.matrixQ();
    H_ = hd.matrixH();
    B_ = Q.transpose() * sys.B;
    C_ = sys.C * Q;
}

ComplexMatrix FrequencyResponse::operator()(double omega) const
{
    using cd = std::complex<double>;
    const Eigen::Index n = H_.rows();
    const Eigen::Index p = B_.cols();
    if (n == 0) {
        return ComplexMatrix::Zero(C_.rows(), p);
    }
    // (jw I - H) X = B by Gaussian elimination on the upper Hessenberg
    // matrix with row pivoting between neighbouring rows.
    ComplexMatrix T = (-H_).cast<cd>();
    T.diagonal().array() += cd(0.0, omega);
    ComplexMatrix X = B_.cast<cd>();
    for (Eigen::Index k = 0; k + 1 < n; ++k) {
        if (std::abs(T(k + 1, k)) > std::abs(T(k, k))) {
            T.row(k).segment(k, n - k).swap(T.row(k + 1).segment(k, n - k));
            X.row(k).swap(X.row(k + 1));
        }
        if (T(k + 1, k) == cd(0.0)) {
            continue;
        }
        const cd f = T(k + 1, k) / T(k, k);
        T.row(k + 1).segment(k, n - k) -= f * T.row(k).segment(k, n - k);
        X.row(k + 1) -= f * X.row(k);
    }
    for (Eigen::Index k = n - 1; k >= 0; --k) {
        for (Eigen::Index j = k + 1; j < n; ++j) {
            X.row(k) -= T(k, j) * X.row(j);
        }
        X.row(k) /= T(k, k);
    }
    return C_.cast<cd>() * X;
}

Matrix FrequencyResponse::dc() const
{
    if (H_.rows() == 0) {
        return Matrix::Zero(C_.rows(), B_.cols());
    }
    return -C_ * H_.partialPivLu().solve(B_);
}

double sigma_max(const ComplexMatrix& G)
{
    if (G.size() == 0) {
        return 0.0;
    }
    if (G.size() == 1) {
        return std::abs(G(0, 0));
    }
    if (G.rows() == 1 || G.cols() == 1) {
        return G.norm();
    }
    return Eigen::JacobiSVD<ComplexMatrix>(G).singularValues()(0);
}

std::vector<double> log_grid(double w_min, double w_max, Index n)
{
    std::vector<double> w(n);
    const double a = std::log10(w_min);
    const double b = std::log10(w_max);
    for (Index k = 0; k < n; ++k) {
        const double frac = n > 1 ? static_cast<double>(k) / static_cast<double>(n - 1) : 0.0;
        w[k] = std::pow(10.0, a + frac * (b - a));
    }
    return w;
}

}  // namespace kronred
