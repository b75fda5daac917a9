#pragma once

#include <optional>
#include <string>

#include "kronred/crn_model.hpp"
#include "kronred/kron.hpp"
#include "kronred/lmi.hpp"

namespace kronred {

enum class GramianObjective {
    /// min trace(P), min trace(Q)
    Trace,
    /// min sum_i (L+R)_ii pi_i, i.e. weights -A_ii
    LeakWeighted,
};

std::string to_string(GramianObjective o);
GramianObjective gramian_objective_from_string(const std::string& s);

struct GramianOptions {
    GramianObjective objective = GramianObjective::Trace;
    LmiOptions lmi;
};

/// Diagonal generalized Gramians P = diag(pi_c), Q = diag(pi_o) with
/// A P + P A^T + B B^T <= 0 and A^T Q + Q A + A^T C^T C A <= 0.
struct DiagonalGramians {
    Vector pi_c;
    Vector pi_o;
    double ctrl_residual_eig = 0.0;
    double obs_residual_eig = 0.0;
    double trace_p = 0.0;
    double trace_q = 0.0;
    GramianObjective objective = GramianObjective::Trace;
    bool converged = false;
};

Vector solve_diag_ctrl_gramian(const Matrix& A, const Matrix& B, const GramianOptions& opts = {});
Vector solve_diag_obs_gramian(const Matrix& A, const Matrix& C, const GramianOptions& opts = {});

/// Solves both LMIs and certifies the residuals against tol.lmi_residual
/// (NumericalError on failure). Requires A Hurwitz.
DiagonalGramians compute_gramians(const OpenLinearSystem& sys, const GramianOptions& opts = {},
                                  const Tolerances& tol = {});

double ctrl_residual(const Matrix& A, const Matrix& B, const Vector& pi_c);
double obs_residual(const Matrix& A, const Matrix& C, const Vector& pi_o);

/// 2 M_ii sqrt(pi_c pi_o)
double one_step_bound(double M_ii, double pi_c, double pi_o);

/// diag((-A)^{-1})
Vector m_diagonal(const OpenLinearSystem& sys);

struct SupCondition {
    double sup_delta = 0.0;
    double limit = 0.0;  // 4 M_ii^2
    double argmax_omega = 0.0;
    bool verified = false;
};

/// Frequency-domain sufficient condition for the one-step bound on
/// non-detailed-balanced systems, evaluated on a log grid
/// [w_min, w_max] (plus omega = 0) for removal of complex `node`.
SupCondition check_sup_condition(const OpenLinearSystem& sys, Index node, Index grid_points = 2000,
                                 double w_min = 1e-4, double w_max = 1e4);

struct BoundRecord {
    Index complex_index = 0;
    double M_ii = 0.0;
    double pi_c = 0.0;
    double pi_o = 0.0;
    double bound = 0.0;
    bool measured = false;
    std::optional<double> hinf_error;
    /// detailed-balanced system, or sup condition verified
    std::optional<bool> bound_verified;
};

std::vector<BoundRecord> bound_table(const OpenLinearSystem& sys, const DiagonalGramians& g,
                                     const IndexList& nodes);

/// Nodes sorted ascending by M_ii^2 pi_c pi_o; ties by lower index.
std::vector<BoundRecord> rank_nodes(const OpenLinearSystem& sys, const DiagonalGramians& g,
                                    const IndexList& removable);

/// Indices whose column of C is zero.
IndexList unmeasured_nodes(const OpenLinearSystem& sys);

enum class MSource {
    /// M_ii from the original M = (L+R)^{-1}
    Original,
    /// M_ii of the node in the intermediate system it is removed from,
    /// removing nodes one at a time in the given order
    PerStage,
};

struct MultiNodeBound {
    double total = 0.0;
    std::vector<double> terms;
    std::vector<double> M_used;
};

MultiNodeBound multi_node_bound(const OpenLinearSystem& sys, const DiagonalGramians& g,
                                const IndexList& removed_ordered, MSource source = MSource::Original);

struct TruncationCertificate {
    double ctrl_residual = 0.0;
    double obs_residual = 0.0;
    bool passed = false;
};

/// Checks that the kept entries of pi_c, pi_o remain feasible for the LMIs of
/// the one-step reduced system.
TruncationCertificate verify_gramian_truncation(const OpenLinearSystem& sys, const DiagonalGramians& g,
                                                Index removed, OutputMode mode = OutputMode::MeasuredPreserving,
                                                const Tolerances& tol = {});

}  // namespace kronred
