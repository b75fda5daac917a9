#pragma once

#include <complex>
#include <vector>

#include <kronred/crn_model.hpp>
#include <kronred/kron.hpp>

namespace kronred::testing {

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
Vector jacobi_eigenvalues(Matrix S, double tol = 1e-14);

/// Coefficients c_0..c_n of det(lambda I - M) = sum c_k lambda^k (c_n = 1),
/// by the Faddeev-LeVerrier recursion.
std::vector<double> characteristic_polynomial(const Matrix& M);

/// Roots of a monic polynomial (coefficients low to high) by Durand-Kerner
/// iteration, sorted by real part.
std::vector<std::complex<double>> polynomial_roots(const std::vector<double>& coeffs);

/// y(t) = C A^{-1} (e^{At} - I) B u + C e^{At} x0 via the matrix exponential.
Vector step_response_expm(const OpenLinearSystem& sys, const Vector& u, const Vector& x0, double t);

/// max over a dense log grid (plus omega = 0) of sigma_max(G(jw) - G_hat(jw)),
/// each sample by a direct complex LU solve.
double hinf_dense_grid(const OpenLinearSystem& full, const OpenLinearSystem& reduced, int points = 20000,
                       double w_min = 1e-5, double w_max = 1e5);

/// Schur complement through an explicit inverse of the removed block.
OpenLinearSystem kron_by_inverse(const OpenLinearSystem& sys, const IndexList& removed);

/// Coordinate-wise bisection on min w^T x s.t. A X + X A^T + W <= 0 from a
/// feasible start: repeatedly lowers each x_i to its smallest feasible value.
Vector lmi_coordinate_bisection(const Matrix& A, const Matrix& W, Vector x, int sweeps = 60);

/// Projection of l0 onto {l : g^T l = 0} by scanning the Lagrange
/// multiplier of l = l0 - lambda g on a dense grid and refining.
Vector lagrange_grid_projection(const Vector& l0, const Vector& g);

}  // namespace kronred::testing
