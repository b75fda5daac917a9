#include "kronred/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <queue>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace kronred {

namespace {

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

std::vector<IndexList> components(const Matrix& M)
{
    const Index n = static_cast<Index>(M.rows());
    std::vector<Index> comp(n, n);
    std::vector<IndexList> out;
    for (Index s = 0; s < n; ++s) {
        if (comp[s] != n) {
            continue;
        }
        IndexList members;
        std::queue<Index> q;
        q.push(s);
        comp[s] = out.size();
        while (!q.empty()) {
            const Index v = q.front();
            q.pop();
            members.push_back(v);
            for (Index w = 0; w < n; ++w) {
                if (comp[w] == n && (M(ei(v), ei(w)) != 0.0 || M(ei(w), ei(v)) != 0.0)) {
                    comp[w] = out.size();
                    q.push(w);
                }
            }
        }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    return out;
}

bool numerically_invertible(const Matrix& M, double rel_tol)
{
    if (M.size() == 0) {
        return true;
    }
    const Vector s = M.jacobiSvd().singularValues();
    return s(0) > 0.0 && s(s.size() - 1) > rel_tol * s(0);
}

}  // namespace

Eigen::VectorXcd eig_spectrum(const Matrix& M, bool symmetric_hint)
{
    if (M.rows() != M.cols()) {
        throw InputError("eig_spectrum: matrix is not square");
    }
    if (!M.allFinite()) {
        throw InputError("eig_spectrum: matrix has non-finite entries");
    }
    Eigen::VectorXcd ev;
    if (symmetric_hint) {
        const Matrix S = 0.5 * (M + M.transpose());
        Eigen::SelfAdjointEigenSolver<Matrix> es(S, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            throw NumericalError("eig_spectrum: symmetric tridiagonal QR iteration did not converge");
        }
        ev = es.eigenvalues().cast<std::complex<double>>();
    } else {
        Eigen::EigenSolver<Matrix> es(M, false);
        if (es.info() != Eigen::Success) {
            std::ostringstream os;
            os << "eig_spectrum: Hessenberg QR iteration did not converge for a " << M.rows() << "x"
               << M.cols() << " matrix";
            throw NumericalError(os.str());
        }
        ev = es.eigenvalues();
    }
    std::vector<std::complex<double>> v(ev.data(), ev.data() + ev.size());
    std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (Index i = 0; i < v.size(); ++i) {
        ev(ei(i)) = v[i];
    }
    return ev;
}

Vector eig_real(const Matrix& M, bool symmetric_hint)
{
    return eig_spectrum(M, symmetric_hint).real();
}

std::optional<Vector> symmetrizing_scaling(const Matrix& M, double rel_tol)
{
    const Index n = static_cast<Index>(M.rows());
    if (M.rows() != M.cols()) {
        return std::nullopt;
    }
    Vector xi = Vector::Zero(ei(n));
    for (Index s = 0; s < n; ++s) {
        if (xi(ei(s)) != 0.0) {
            continue;
        }
        xi(ei(s)) = 1.0;
        std::queue<Index> q;
        q.push(s);
        while (!q.empty()) {
            const Index i = q.front();
            q.pop();
            for (Index j = 0; j < n; ++j) {
                if (j == i || xi(ei(j)) != 0.0) {
                    continue;
                }
                const double mij = M(ei(i), ei(j));
                const double mji = M(ei(j), ei(i));
                if (mij == 0.0 && mji == 0.0) {
                    continue;
                }
                if (mij == 0.0 || mji == 0.0 || (mij > 0.0) != (mji > 0.0)) {
                    return std::nullopt;
                }
                xi(ei(j)) = xi(ei(i)) * mji / mij;
                q.push(j);
            }
        }
    }
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double mij = M(ei(i), ei(j));
            const double mji = M(ei(j), ei(i));
            if (mij == 0.0 && mji == 0.0) {
                continue;
            }
            if (mij == 0.0 || mji == 0.0) {
                return std::nullopt;
            }
            const double sij = mij * std::sqrt(xi(ei(j)) / xi(ei(i)));
            const double sji = mji * std::sqrt(xi(ei(i)) / xi(ei(j)));
            if (std::abs(sij - sji) > rel_tol * std::max(std::abs(sij), std::abs(sji))) {
                return std::nullopt;
            }
        }
    }
    return xi;
}

Matrix symmetrize(const Matrix& M, const Vector& xi)
{
    const Vector d = xi.array().sqrt().matrix();
    const Matrix S = d.cwiseInverse().asDiagonal() * M * d.asDiagonal();
    return 0.5 * (S + S.transpose());
}

SpectrumReport check_interlacing(const Matrix& LR, const Matrix& L_hat, double slack)
{
    if (LR.rows() != LR.cols() || L_hat.rows() != L_hat.cols() || L_hat.rows() > LR.rows()) {
        throw InputError("check_interlacing: dimension mismatch (need square L+R and L_hat, c_hat <= c)");
    }
    SpectrumReport rep;
    const auto xi_full = symmetrizing_scaling(LR);
    const auto xi_red = symmetrizing_scaling(L_hat);
    rep.hypothesis_met = xi_full.has_value() && xi_red.has_value();
    rep.advisory = !rep.hypothesis_met;
    rep.full_eigs = xi_full ? eig_real(symmetrize(LR, *xi_full), true) : eig_real(LR);
    rep.reduced_eigs = xi_red ? eig_real(symmetrize(L_hat, *xi_red), true) : eig_real(L_hat);

    const auto c = rep.full_eigs.size();
    const auto ch = rep.reduced_eigs.size();
    rep.first_positive = c > 0 && rep.full_eigs(0) > 0.0;
    for (Eigen::Index i = 0; i < ch; ++i) {
        const double lo = rep.full_eigs(i);
        const double mid = rep.reduced_eigs(i);
        const double hi = rep.full_eigs(i + c - ch);
        if (lo > mid + slack) {
            rep.violations.push_back({static_cast<Index>(i + 1), lo, mid, "lambda_i(L+R) <= lambda_i(L_hat)"});
        }
        if (mid > hi + slack) {
            rep.violations.push_back(
                {static_cast<Index>(i + 1), mid, hi, "lambda_i(L_hat) <= lambda_{i+c-c_hat}(L+R)"});
        }
    }
    rep.interlaced = rep.violations.empty();
    return rep;
}

SpectrumReport check_interlacing(const OpenLinearSystem& full, const OpenLinearSystem& reduced, double slack)
{
    return check_interlacing(Matrix(-full.A), Matrix(-reduced.A), slack);
}

Matrix zero_moment(const OpenLinearSystem& sys, double rel_tol)
{
    if (!numerically_invertible(sys.A, rel_tol)) {
        throw NumericalError("zero_moment: A is singular; the network graph is disconnected or some "
                             "component has no outflow");
    }
    return sys.C * sys.A.partialPivLu().solve(sys.B);
}

Matrix steady_state_gain(const Matrix& LR, const Matrix& Din, const Matrix& C, double rel_tol)
{
    Matrix G = Matrix::Zero(C.rows(), Din.cols());
    for (const auto& comp : components(LR)) {
        const Matrix blk = select(LR, comp, comp);
        const Matrix Dk = select_rows(Din, comp);
        const Matrix Ck = select_cols(C, comp);
        if (numerically_invertible(blk, rel_tol)) {
            G += Ck * blk.partialPivLu().solve(Dk);
            continue;
        }
        const bool fed = Dk.size() > 0 && Dk.cwiseAbs().maxCoeff() != 0.0;
        const bool seen = Ck.size() > 0 && Ck.cwiseAbs().maxCoeff() != 0.0;
        if (fed || seen) {
            std::ostringstream os;
            os << "zero moment undefined: component {";
            for (Index i = 0; i < comp.size(); ++i) {
                os << (i ? "," : "") << comp[i];
            }
            os << "} has no outflow but " << (fed ? "receives inflow" : "is measured");
            throw NumericalError(os.str());
        }
    }
    return G;
}

Matrix zero_moment(const CrnNetwork& net, double rel_tol)
{
    return steady_state_gain(build_laplacian(net) + net.outflow_matrix(), net.inflow_matrix(),
                             net.output_selection(), rel_tol);
}

Matrix zero_moment(const ReducedOpenCrn& red, double rel_tol)
{
    return steady_state_gain(red.L_hat, red.D_in_hat, red.C_hat, rel_tol);
}

namespace {

void finish(ZeroMomentReport& rep, const Tolerances& tol)
{
    if (rep.full_moment.rows() != rep.reduced_moment.rows()
        || rep.full_moment.cols() != rep.reduced_moment.cols()) {
        throw InputError("verify_moment_matching: moment shapes differ");
    }
    rep.max_abs_diff = rep.full_moment.size() == 0
        ? 0.0
        : (rep.full_moment - rep.reduced_moment).cwiseAbs().maxCoeff();
    const double scale = rep.full_moment.size() == 0 ? 0.0 : rep.full_moment.cwiseAbs().maxCoeff();
    rep.threshold = tol.moment_match * std::max(scale, tol.moment_floor);
    rep.matched = rep.max_abs_diff <= rep.threshold;
}

}  // namespace

ZeroMomentReport verify_moment_matching(const OpenLinearSystem& full, const OpenLinearSystem& reduced,
                                        const Tolerances& tol)
{
    ZeroMomentReport rep;
    rep.convention = "C A^-1 B (signed; physical gain = -C A^-1 B)";
    rep.full_moment = zero_moment(full, tol.invertibility);
    rep.reduced_moment = zero_moment(reduced, tol.invertibility);
    finish(rep, tol);
    return rep;
}

ZeroMomentReport verify_moment_matching(const CrnNetwork& full, const ReducedOpenCrn& reduced,
                                        const Tolerances& tol)
{
    ZeroMomentReport rep;
    rep.convention = "C (L+R)^-1 D_in (steady-state gain on complexes)";
    const Matrix& Z = full.complex_matrix();
    Eigen::FullPivLU<Matrix> lu(Z);
    rep.advisory = lu.rank() < Z.cols();
    rep.full_moment = zero_moment(full, tol.invertibility);
    rep.reduced_moment = zero_moment(reduced, tol.invertibility);
    finish(rep, tol);
    return rep;
}

Matrix block_moment_expression(const OpenLinearSystem& sys, const Partition& part)
{
    const auto& k = part.kept();
    const auto& r = part.removed();
    const Matrix A11 = select(sys.A, k, k);
    const Matrix A12 = select(sys.A, k, r);
    const Matrix A21 = select(sys.A, r, k);
    const Matrix A22 = select(sys.A, r, r);
    const Matrix B1 = select_rows(sys.B, k);
    const Matrix B2 = select_rows(sys.B, r);
    const Matrix C1 = select_cols(sys.C, k);
    const Matrix C2 = select_cols(sys.C, r);
    require_invertible(A11, "A11");
    require_invertible(A22, "A22");
    const auto lu11 = A11.partialPivLu();
    const Matrix S1 = schur_complement(A11, A12, A21, A22);
    const Matrix S2 = schur_complement(A22, A21, A12, A11);
    const auto lu_s2 = S2.partialPivLu();
    // row-vector solves: X S^{-1} = (S^{-T} X^T)^T
    const Matrix C1_S1inv = Matrix(S1.transpose()).partialPivLu().solve(C1.transpose()).transpose();
    const Matrix C2_S2inv = Matrix(S2.transpose()).partialPivLu().solve(C2.transpose()).transpose();
    const Matrix A11inv_A12 = lu11.solve(A12);
    const Matrix A21_A11inv_B1 = A21 * lu11.solve(B1);
    const Matrix term1 = C1_S1inv * B1 - C2_S2inv * A21_A11inv_B1;
    const Matrix term2 = C1 * A11inv_A12 * lu_s2.solve(B2) - C2_S2inv * B2;
    return term1 - term2;
}

}  // namespace kronred
