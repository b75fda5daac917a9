#include "kronred/lmi.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace kronred {

namespace {

Matrix lyapunov_form(const Matrix& A, const Matrix& W, const Vector& x)
{
    Matrix F = A * x.asDiagonal();
    F += F.transpose().eval();
    F += W;
    return F;
}

double lambda_max_sym(const Matrix& S)
{
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues()(es.eigenvalues().size() - 1);
}

/// Barrier value t w^T x - log det(-F) - sum log x, or +inf outside the domain.
double barrier(const Matrix& A, const Matrix& W, const Vector& w, const Vector& x, double t)
{
    if ((x.array() <= 0.0).any()) {
        return std::numeric_limits<double>::infinity();
    }
    const Matrix G = -lyapunov_form(A, W, x);
    Eigen::LLT<Matrix> llt(G);
    if (llt.info() != Eigen::Success) {
        return std::numeric_limits<double>::infinity();
    }
    const Matrix& Lc = llt.matrixLLT();
    double logdet = 0.0;
    for (Eigen::Index i = 0; i < Lc.rows(); ++i) {
        if (!(Lc(i, i) > 0.0)) {
            return std::numeric_limits<double>::infinity();
        }
        logdet += 2.0 * std::log(Lc(i, i));
    }
    return t * w.dot(x) - logdet - x.array().log().sum();
}

Vector feasible_start(const Matrix& A, const Matrix& W)
{
    const Eigen::Index n = A.rows();
    const double wnorm = W.size() == 0 ? 0.0 : std::max(lambda_max_sym(W), 0.0);
    Vector dir;
    const double sym_top = lambda_max_sym(A + A.transpose());
    if (sym_top < 0.0) {
        dir = Vector::Ones(n);
    } else {
        const auto lu = A.partialPivLu();
        const Vector right = -lu.solve(Vector::Ones(n));
        const Vector left = -Matrix(A.transpose()).partialPivLu().solve(Vector::Ones(n));
        if ((right.array() <= 0.0).any() || (left.array() <= 0.0).any()) {
            throw NumericalError("diagonal Lyapunov LMI: no strictly feasible diagonal start "
                                 "(A is not a Metzler Hurwitz matrix)");
        }
        dir = right.cwiseQuotient(left);
    }
    const double top = lambda_max_sym(lyapunov_form(A, Matrix::Zero(n, n), dir));
    if (!(top < 0.0)) {
        throw NumericalError("diagonal Lyapunov LMI: start direction is not stabilizing");
    }
    const double alpha = wnorm > 0.0 ? 2.0 * wnorm / -top : 1.0;
    return alpha * dir;
}

}  // namespace

double lyapunov_residual(const Matrix& A, const Matrix& W, const Vector& x)
{
    return lambda_max_sym(lyapunov_form(A, W, x));
}

DiagLmiResult solve_diag_lyapunov_lmi(const Matrix& A, const Matrix& W, const Vector& weights,
                                      const LmiOptions& opts)
{
    const Eigen::Index n = A.rows();
    if (A.cols() != n || W.rows() != n || W.cols() != n || weights.size() != n) {
        throw InputError("diagonal Lyapunov LMI: dimension mismatch");
    }
    if ((weights.array() <= 0.0).any()) {
        throw InputError("diagonal Lyapunov LMI: objective weights must be positive");
    }
    DiagLmiResult res;
    if (n == 0) {
        res.converged = true;
        return res;
    }
    Vector x = feasible_start(A, W);
    const double m = 2.0 * static_cast<double>(n);
    double t = m / std::max(weights.dot(x), 1e-300);

    for (int stage = 0; stage < opts.max_stages; ++stage) {
        for (int it = 0; it < opts.max_newton_per_stage; ++it) {
            const Matrix G = -lyapunov_form(A, W, x);
            Eigen::LLT<Matrix> llt(G);
            if (llt.info() != Eigen::Success) {
                throw NumericalError("diagonal Lyapunov LMI: iterate left the feasible set");
            }
            const Matrix S = llt.solve(Matrix::Identity(n, n));
            const Matrix SA = S * A;
            const Matrix T = A.transpose() * SA;
            Vector g = t * weights + 2.0 * SA.diagonal() - x.cwiseInverse();
            Matrix H(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j < n; ++j) {
                    H(i, j) = 2.0 * (SA(i, j) * SA(j, i) + S(i, j) * T(i, j));
                }
                H(i, i) += 1.0 / (x(i) * x(i));
            }
            const Vector dx = -H.ldlt().solve(g);
            const double decrement = -g.dot(dx);
            ++res.newton_steps;
            if (!(decrement > 0.0) || decrement < 1e-12) {
                break;
            }
            const double f0 = barrier(A, W, weights, x, t);
            double step = 1.0;
            Vector trial = x + dx;
            double f1 = barrier(A, W, weights, trial, t);
            while (!(f1 <= f0 - 0.25 * step * decrement) && step > 1e-12) {
                step *= 0.5;
                trial = x + step * dx;
                f1 = barrier(A, W, weights, trial, t);
            }
            if (step <= 1e-12) {
                break;
            }
            x = trial;
            if (decrement < 1e-10) {
                break;
            }
        }
        if (m / t < opts.gap_tol * weights.dot(x)) {
            res.converged = true;
            break;
        }
        t *= opts.barrier_growth;
    }
    res.x = x;
    res.objective = weights.dot(x);
    res.residual_eig = lyapunov_residual(A, W, x);
    return res;
}

}  // namespace kronred
