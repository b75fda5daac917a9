#include "kronred/gramian.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace kronred {

namespace {

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

Vector objective_weights(const Matrix& A, GramianObjective obj)
{
    switch (obj) {
    case GramianObjective::Trace:
        return Vector::Ones(A.rows());
    case GramianObjective::LeakWeighted: {
        Vector w = -A.diagonal();
        if ((w.array() <= 0.0).any()) {
            throw InputError("leak-weighted objective needs a strictly negative diagonal of A");
        }
        return w;
    }
    }
    return Vector::Ones(A.rows());
}

IndexList without(Index n, Index node)
{
    IndexList keep;
    for (Index i = 0; i < n; ++i) {
        if (i != node) {
            keep.push_back(i);
        }
    }
    return keep;
}

}  // namespace

std::string to_string(GramianObjective o)
{
    return o == GramianObjective::Trace ? "trace" : "leak-weighted";
}

GramianObjective gramian_objective_from_string(const std::string& s)
{
    if (s == "trace") {
        return GramianObjective::Trace;
    }
    if (s == "leak-weighted" || s == "leak") {
        return GramianObjective::LeakWeighted;
    }
    throw InputError("unknown Gramian objective '" + s + "' (expected trace or leak-weighted)");
}

Vector solve_diag_ctrl_gramian(const Matrix& A, const Matrix& B, const GramianOptions& opts)
{
    if (B.rows() != A.rows()) {
        throw InputError("controllability Gramian: B has the wrong number of rows");
    }
    const DiagLmiResult r = solve_diag_lyapunov_lmi(A, B * B.transpose(), objective_weights(A, opts.objective),
                                                    opts.lmi);
    return r.x;
}

Vector solve_diag_obs_gramian(const Matrix& A, const Matrix& C, const GramianOptions& opts)
{
    if (C.cols() != A.cols()) {
        throw InputError("observability Gramian: C has the wrong number of columns");
    }
    const Matrix CA = C * A;
    const Matrix At = A.transpose();
    const DiagLmiResult r = solve_diag_lyapunov_lmi(At, CA.transpose() * CA, objective_weights(A, opts.objective),
                                                    opts.lmi);
    return r.x;
}

double ctrl_residual(const Matrix& A, const Matrix& B, const Vector& pi_c)
{
    return lyapunov_residual(A, B * B.transpose(), pi_c);
}

double obs_residual(const Matrix& A, const Matrix& C, const Vector& pi_o)
{
    const Matrix CA = C * A;
    return lyapunov_residual(A.transpose(), CA.transpose() * CA, pi_o);
}

DiagonalGramians compute_gramians(const OpenLinearSystem& sys, const GramianOptions& opts, const Tolerances& tol)
{
    if (!is_hurwitz(sys.A, tol.eigen_margin)) {
        throw NumericalError("Gramians: A is not Hurwitz");
    }
    DiagonalGramians g;
    g.objective = opts.objective;
    const Vector w = objective_weights(sys.A, opts.objective);
    const DiagLmiResult rc = solve_diag_lyapunov_lmi(sys.A, sys.B * sys.B.transpose(), w, opts.lmi);
    const Matrix CA = sys.C * sys.A;
    const DiagLmiResult ro
        = solve_diag_lyapunov_lmi(sys.A.transpose(), CA.transpose() * CA, w, opts.lmi);
    g.pi_c = rc.x;
    g.pi_o = ro.x;
    g.ctrl_residual_eig = rc.residual_eig;
    g.obs_residual_eig = ro.residual_eig;
    g.trace_p = g.pi_c.sum();
    g.trace_q = g.pi_o.sum();
    g.converged = rc.converged && ro.converged;
    if (g.ctrl_residual_eig > tol.lmi_residual || g.obs_residual_eig > tol.lmi_residual) {
        std::ostringstream os;
        os << "Gramian LMI certificate failed (residual eigenvalues " << g.ctrl_residual_eig << ", "
           << g.obs_residual_eig << " > " << tol.lmi_residual << ")";
        throw NumericalError(os.str());
    }
    return g;
}

double one_step_bound(double M_ii, double pi_c, double pi_o)
{
    return 2.0 * M_ii * std::sqrt(pi_c * pi_o);
}

Vector m_diagonal(const OpenLinearSystem& sys)
{
    const Eigen::Index n = sys.A.rows();
    return (-sys.A).partialPivLu().solve(Matrix::Identity(n, n)).diagonal();
}

SupCondition check_sup_condition(const OpenLinearSystem& sys, Index node, Index grid_points, double w_min,
                                 double w_max)
{
    using cd = std::complex<double>;
    const Index n = sys.order();
    if (node >= n) {
        throw InputError("sup condition: node index out of range");
    }
    const Matrix M = (-sys.A).partialPivLu().solve(Matrix::Identity(ei(n), ei(n)));
    const IndexList keep = without(n, node);
    const IndexList rem{node};
    const Eigen::MatrixXcd M11 = select(M, keep, keep).cast<cd>();
    const Eigen::VectorXcd M12 = select(M, keep, rem).col(0).cast<cd>();
    const Eigen::RowVectorXcd M21 = select(M, rem, keep).row(0).cast<cd>();
    const double M22 = M(ei(node), ei(node));

    SupCondition sc;
    sc.limit = 4.0 * M22 * M22;
    auto delta = [&](double w) {
        const cd jw(0.0, w);
        if (keep.empty()) {
            const cd N = M22;
            const cd D = 1.0 + jw * M22;
            return std::pow(2.0 * N.real(), 2) / std::norm(D);
        }
        Eigen::MatrixXcd K = jw * M11;
        K.diagonal().array() += 1.0;
        const Eigen::VectorXcd phiM12 = K.partialPivLu().solve(M12);
        const cd q = M21 * phiM12;
        const cd N = M22 - jw * q;
        const cd D = 1.0 + jw * M22 + w * w * q;
        return std::pow(2.0 * N.real(), 2) / std::norm(D);
    };
    sc.sup_delta = delta(0.0);
    sc.argmax_omega = 0.0;
    const double lmin = std::log10(w_min);
    const double lmax = std::log10(w_max);
    for (Index k = 0; k < grid_points; ++k) {
        const double frac = grid_points > 1 ? static_cast<double>(k) / static_cast<double>(grid_points - 1) : 0.0;
        const double w = std::pow(10.0, lmin + frac * (lmax - lmin));
        const double d = delta(w);
        if (d > sc.sup_delta) {
            sc.sup_delta = d;
            sc.argmax_omega = w;
        }
    }
    sc.verified = sc.sup_delta <= sc.limit * (1.0 + 1e-9);
    return sc;
}

std::vector<BoundRecord> bound_table(const OpenLinearSystem& sys, const DiagonalGramians& g, const IndexList& nodes)
{
    const Vector Md = m_diagonal(sys);
    std::vector<BoundRecord> out;
    for (Index i : nodes) {
        if (i >= sys.order()) {
            throw InputError("bound_table: node index out of range");
        }
        BoundRecord r;
        r.complex_index = i;
        r.M_ii = Md(ei(i));
        r.pi_c = g.pi_c(ei(i));
        r.pi_o = g.pi_o(ei(i));
        r.bound = one_step_bound(r.M_ii, r.pi_c, r.pi_o);
        r.measured = sys.C.col(ei(i)).cwiseAbs().maxCoeff() != 0.0;
        out.push_back(r);
    }
    return out;
}

std::vector<BoundRecord> rank_nodes(const OpenLinearSystem& sys, const DiagonalGramians& g, const IndexList& removable)
{
    auto rows = bound_table(sys, g, removable);
    std::stable_sort(rows.begin(), rows.end(), [](const BoundRecord& a, const BoundRecord& b) {
        const double ka = a.M_ii * a.M_ii * a.pi_c * a.pi_o;
        const double kb = b.M_ii * b.M_ii * b.pi_c * b.pi_o;
        return ka != kb ? ka < kb : a.complex_index < b.complex_index;
    });
    return rows;
}

IndexList unmeasured_nodes(const OpenLinearSystem& sys)
{
    IndexList out;
    for (Index i = 0; i < sys.order(); ++i) {
        if (sys.C.col(ei(i)).cwiseAbs().maxCoeff() == 0.0) {
            out.push_back(i);
        }
    }
    return out;
}

MultiNodeBound multi_node_bound(const OpenLinearSystem& sys, const DiagonalGramians& g,
                                const IndexList& removed_ordered, MSource source)
{
    MultiNodeBound mb;
    const Vector Md = m_diagonal(sys);
    OpenLinearSystem stage = sys;
    IndexList alive(sys.order());
    for (Index i = 0; i < alive.size(); ++i) {
        alive[i] = i;
    }
    for (Index node : removed_ordered) {
        auto pos = std::find(alive.begin(), alive.end(), node);
        if (node >= sys.order() || pos == alive.end()) {
            throw InputError("multi_node_bound: invalid or repeated node index");
        }
        double m = Md(ei(node));
        if (source == MSource::PerStage) {
            const Index local = static_cast<Index>(pos - alive.begin());
            m = m_diagonal(stage)(ei(local));
            stage = kron_reduce_linear(stage, Partition::from_removed(stage.order(), {local}), OutputMode::Permissive);
            alive.erase(pos);
        } else {
            alive.erase(pos);
        }
        const double term = one_step_bound(m, g.pi_c(ei(node)), g.pi_o(ei(node)));
        mb.M_used.push_back(m);
        mb.terms.push_back(term);
        mb.total += term;
    }
    return mb;
}

TruncationCertificate verify_gramian_truncation(const OpenLinearSystem& sys, const DiagonalGramians& g,
                                                Index removed, OutputMode mode, const Tolerances& tol)
{
    TruncationCertificate cert;
    const Index n = sys.order();
    if (n <= 1) {
        cert.passed = true;
        return cert;
    }
    if (removed >= n) {
        throw InputError("verify_gramian_truncation: node index out of range");
    }
    const OpenLinearSystem red = kron_reduce_linear(sys, Partition::from_removed(n, {removed}), mode, tol);
    const IndexList keep = without(n, removed);
    Vector pc(ei(keep.size()));
    Vector po(ei(keep.size()));
    for (Index i = 0; i < keep.size(); ++i) {
        pc(ei(i)) = g.pi_c(ei(keep[i]));
        po(ei(i)) = g.pi_o(ei(keep[i]));
    }
    cert.ctrl_residual = ctrl_residual(red.A, red.B, pc);
    cert.obs_residual = obs_residual(red.A, red.C, po);
    cert.passed = cert.ctrl_residual <= tol.lmi_residual && cert.obs_residual <= tol.lmi_residual;
    return cert;
}

}  // namespace kronred
