#pragma once

#include <optional>
#include <string>

#include "kronred/crn_model.hpp"
#include "kronred/kron.hpp"

namespace kronred {

/// Eigenvalues sorted ascending by real part (ties by imaginary part). With
/// `symmetric_hint` the symmetric part (M + M^T)/2 is decomposed and the
/// result is real. Throws NumericalError if the QR iteration fails.
Eigen::VectorXcd eig_spectrum(const Matrix& M, bool symmetric_hint = false);

/// Real parts of eig_spectrum(M, symmetric_hint).
Vector eig_real(const Matrix& M, bool symmetric_hint = false);

/// Positive xi with Xi^{-1/2} M Xi^{1/2} symmetric (Xi = diag(xi)), found by
/// propagating xi_j = xi_i M_ji / M_ij along a spanning forest of the
/// sparsity graph and verifying every remaining edge. Returns nullopt when no
/// such scaling exists (one-directional edges, sign mismatch, or an
/// inconsistent cycle).
std::optional<Vector> symmetrizing_scaling(const Matrix& M, double rel_tol = 1e-9);

/// Xi^{-1/2} M Xi^{1/2}, symmetrized exactly by averaging with its transpose.
Matrix symmetrize(const Matrix& M, const Vector& xi);

struct InterlacingViolation {
    Index index = 0;  // 1-based i
    double lhs = 0.0;
    double rhs = 0.0;
    std::string relation;
};

struct SpectrumReport {
    Vector full_eigs;
    Vector reduced_eigs;
    bool interlaced = false;
    std::vector<InterlacingViolation> violations;
    bool first_positive = false;
    /// Both matrices admit a symmetrizing diagonal similarity, so the
    /// interlacing theorem applies. Otherwise the verdict is advisory only.
    bool hypothesis_met = false;
    bool advisory = true;
};

/// Checks lambda_i(L+R) <= lambda_i(L_hat) <= lambda_{i+c-c_hat}(L+R) for
/// i = 1..c_hat, with absolute slack, plus lambda_1(L+R) > 0.
SpectrumReport check_interlacing(const Matrix& LR, const Matrix& L_hat, double slack = 1e-9);
SpectrumReport check_interlacing(const OpenLinearSystem& full, const OpenLinearSystem& reduced,
                                 double slack = 1e-9);

/// C A^{-1} B (the signed moment; the physical steady-state gain is its
/// negative). Throws NumericalError when A is singular.
Matrix zero_moment(const OpenLinearSystem& sys, double rel_tol = 1e-10);

/// Steady-state map v_in -> y = C xi of xi' = -(LR) xi + Din v_in, i.e.
/// C (LR)^{-1} Din evaluated per connected component of the complex graph.
/// Components without outflow are admissible only when they carry neither
/// inflow nor measured complexes; otherwise NumericalError.
Matrix steady_state_gain(const Matrix& LR, const Matrix& Din, const Matrix& C, double rel_tol = 1e-10);

/// General-Z zero moment of a network: steady_state_gain(L + R, D_in, C_raw).
Matrix zero_moment(const CrnNetwork& net, double rel_tol = 1e-10);
/// Same for a reduced network: steady_state_gain(L_hat, D_in_hat, C_hat).
Matrix zero_moment(const ReducedOpenCrn& red, double rel_tol = 1e-10);

struct ZeroMomentReport {
    Matrix full_moment;
    Matrix reduced_moment;
    double max_abs_diff = 0.0;
    double threshold = 0.0;
    bool matched = false;
    /// Z does not have full column rank; the matching hypothesis fails and
    /// the comparison is informational.
    bool advisory = false;
    std::string convention;
};

ZeroMomentReport verify_moment_matching(const OpenLinearSystem& full, const OpenLinearSystem& reduced,
                                        const Tolerances& tol = {});
ZeroMomentReport verify_moment_matching(const CrnNetwork& full, const ReducedOpenCrn& reduced,
                                        const Tolerances& tol = {});

/// C A^{-1} B assembled from the partitioned blocks without forming A^{-1}:
/// (C1 S1^{-1} - C2 S2^{-1} A21 A11^{-1}) B1 - (C1 A11^{-1} A12 S2^{-1} - C2 S2^{-1}) B2
/// with S1 = A11 - A12 A22^{-1} A21 and S2 = A22 - A21 A11^{-1} A12.
/// Requires A11 and A22 invertible.
Matrix block_moment_expression(const OpenLinearSystem& sys, const Partition& part);

}  // namespace kronred
