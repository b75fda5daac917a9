#pragma once

#include "kronred/types.hpp"

namespace kronred {

struct LmiOptions {
    /// stop when the barrier duality gap 2n/t falls below gap_tol * objective
    double gap_tol = 1e-9;
    double barrier_growth = 10.0;
    int max_newton_per_stage = 100;
    int max_stages = 60;
};

struct DiagLmiResult {
    Vector x;
    /// largest eigenvalue of A X + X A^T + W at the returned point
    double residual_eig = 0.0;
    double objective = 0.0;
    int newton_steps = 0;
    bool converged = false;
};

/// min w^T x  s.t.  A diag(x) + diag(x) A^T + W <= 0,  x > 0.
///
/// Log-determinant barrier with damped Newton steps on the n diagonal
/// entries. The start point is x0 = alpha * (M 1) / (M^T 1) with
/// M = -A^{-1}, which is strictly feasible for Metzler Hurwitz A; when
/// A + A^T is negative definite the scaled identity is used instead.
/// Throws NumericalError when no strictly feasible start is found.
DiagLmiResult solve_diag_lyapunov_lmi(const Matrix& A, const Matrix& W, const Vector& weights,
                                      const LmiOptions& opts = {});

/// lambda_max(A diag(x) + diag(x) A^T + W)
double lyapunov_residual(const Matrix& A, const Matrix& W, const Vector& x);

}  // namespace kronred
