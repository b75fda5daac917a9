#include "kronred/kron.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/SVD>

namespace kronred {

namespace {

IndexList complement(Index c, const IndexList& subset, const char* what)
{
    std::vector<bool> in(c, false);
    for (Index i : subset) {
        if (i >= c) {
            std::ostringstream os;
            os << what << ": complex index " << i << " out of range [0," << c << ")";
            throw InputError(os.str());
        }
        if (in[i]) {
            std::ostringstream os;
            os << what << ": complex index " << i << " listed twice";
            throw InputError(os.str());
        }
        in[i] = true;
    }
    IndexList rest;
    for (Index i = 0; i < c; ++i) {
        if (!in[i]) {
            rest.push_back(i);
        }
    }
    return rest;
}

Eigen::Index ei(Index i) { return static_cast<Eigen::Index>(i); }

void check_outputs(const Matrix& C2, OutputMode mode, const IndexList& removed)
{
    if (mode != OutputMode::MeasuredPreserving) {
        return;
    }
    for (Eigen::Index j = 0; j < C2.cols(); ++j) {
        if (C2.col(j).cwiseAbs().maxCoeff() != 0.0) {
            std::ostringstream os;
            os << "partition: complex " << removed[static_cast<Index>(j)]
               << " is measured and cannot be removed in measured-output-preserving mode";
            throw InputError(os.str());
        }
    }
}

}  // namespace

Partition Partition::from_removed(Index c, IndexList removed)
{
    IndexList kept = complement(c, removed, "partition.removed");
    std::sort(removed.begin(), removed.end());
    return Partition(std::move(kept), std::move(removed));
}

Partition Partition::from_kept(Index c, IndexList kept)
{
    IndexList removed = complement(c, kept, "partition.kept");
    std::sort(kept.begin(), kept.end());
    return Partition(std::move(kept), std::move(removed));
}

IndexList Partition::order() const
{
    IndexList o = kept_;
    o.insert(o.end(), removed_.begin(), removed_.end());
    return o;
}

Matrix select(const Matrix& M, const IndexList& rows, const IndexList& cols)
{
    Matrix S(ei(rows.size()), ei(cols.size()));
    for (Index i = 0; i < rows.size(); ++i) {
        for (Index j = 0; j < cols.size(); ++j) {
            S(ei(i), ei(j)) = M(ei(rows[i]), ei(cols[j]));
        }
    }
    return S;
}

Matrix select_rows(const Matrix& M, const IndexList& rows)
{
    Matrix S(ei(rows.size()), M.cols());
    for (Index i = 0; i < rows.size(); ++i) {
        S.row(ei(i)) = M.row(ei(rows[i]));
    }
    return S;
}

Matrix select_cols(const Matrix& M, const IndexList& cols)
{
    Matrix S(M.rows(), ei(cols.size()));
    for (Index j = 0; j < cols.size(); ++j) {
        S.col(ei(j)) = M.col(ei(cols[j]));
    }
    return S;
}

BlockSet partition_matrices(const Matrix& L, const Matrix& R, const Matrix& Din, const Matrix& C,
                            const Partition& part)
{
    const Index c = part.size();
    if (static_cast<Index>(L.rows()) != c || static_cast<Index>(L.cols()) != c
        || static_cast<Index>(R.rows()) != c || static_cast<Index>(R.cols()) != c
        || static_cast<Index>(Din.rows()) != c || static_cast<Index>(C.cols()) != c) {
        throw InputError("partition_matrices: matrix dimensions do not match the partition size");
    }
    const auto& k = part.kept();
    const auto& r = part.removed();
    BlockSet b;
    b.L11 = select(L, k, k);
    b.L12 = select(L, k, r);
    b.L21 = select(L, r, k);
    b.L22 = select(L, r, r);
    b.R11 = select(R, k, k);
    b.R22 = select(R, r, r);
    b.Din1 = select_rows(Din, k);
    b.Din2 = select_rows(Din, r);
    b.C1 = select_cols(C, k);
    b.C2 = select_cols(C, r);
    return b;
}

void assemble_blocks(const BlockSet& b, const Partition& part, Matrix& L, Matrix& R, Matrix& Din, Matrix& C)
{
    const auto c = ei(part.size());
    const auto& k = part.kept();
    const auto& r = part.removed();
    L = Matrix::Zero(c, c);
    R = Matrix::Zero(c, c);
    Din = Matrix::Zero(c, b.Din1.cols());
    C = Matrix::Zero(b.C1.rows(), c);
    auto put = [](Matrix& M, const Matrix& blk, const IndexList& rows, const IndexList& cols) {
        for (Index i = 0; i < rows.size(); ++i) {
            for (Index j = 0; j < cols.size(); ++j) {
                M(ei(rows[i]), ei(cols[j])) = blk(ei(i), ei(j));
            }
        }
    };
    put(L, b.L11, k, k);
    put(L, b.L12, k, r);
    put(L, b.L21, r, k);
    put(L, b.L22, r, r);
    put(R, b.R11, k, k);
    put(R, b.R22, r, r);
    for (Index i = 0; i < k.size(); ++i) {
        Din.row(ei(k[i])) = b.Din1.row(ei(i));
        C.col(ei(k[i])) = b.C1.col(ei(i));
    }
    for (Index i = 0; i < r.size(); ++i) {
        Din.row(ei(r[i])) = b.Din2.row(ei(i));
        C.col(ei(r[i])) = b.C2.col(ei(i));
    }
}

void require_invertible(const Matrix& M, const std::string& block, double rel_tol)
{
    if (M.size() == 0) {
        return;
    }
    const Vector s = M.jacobiSvd().singularValues();
    const double smax = s(0);
    const double smin = s(s.size() - 1);
    if (!(smax > 0.0) || !(smin > rel_tol * smax)) {
        std::ostringstream os;
        os << block << " is numerically singular (sigma_min = " << smin << ", sigma_max = " << smax
           << "); the removed complexes may form a closed component without outflow";
        throw ReductionInfeasible(os.str());
    }
}

Matrix schur_complement(const Matrix& M11, const Matrix& M12, const Matrix& M21, const Matrix& M22)
{
    if (M22.size() == 0) {
        return M11;
    }
    return M11 - M12 * M22.partialPivLu().solve(M21);
}

ReducedOpenCrn kron_reduce_open(const CrnNetwork& net, const Partition& part, OutputMode mode,
                                const Tolerances& tol)
{
    if (part.size() != net.num_complexes()) {
        throw InputError("partition does not cover the network's complexes");
    }
    const BlockSet b = partition_matrices(build_laplacian(net), net.outflow_matrix(), net.inflow_matrix(),
                                          net.output_selection(), part);
    check_outputs(b.C2, mode, part.removed());

    ReducedOpenCrn red;
    red.kept = part.kept();
    red.removed = part.removed();
    red.Z_hat = select_cols(net.complex_matrix(), part.kept());
    if (part.removed().empty()) {
        red.L_hat = b.L11 + b.R11;
        red.D_in_hat = b.Din1;
        red.C_hat = b.C1;
    } else {
        const Matrix S22 = b.L22 + b.R22;
        require_invertible(S22, "L22 + R22", tol.invertibility);
        const auto lu = S22.partialPivLu();
        const Matrix X = lu.solve(b.L21);
        red.L_hat = (b.L11 + b.R11) - b.L12 * X;
        red.D_in_hat = b.Din1 - b.L12 * lu.solve(b.Din2);
        red.C_hat = b.C1 - b.C2 * X;
    }
    for (Eigen::Index i = 0; i < red.Z_hat.rows(); ++i) {
        if (red.Z_hat.cols() == 0 || red.Z_hat.row(i).cwiseAbs().maxCoeff() == 0.0) {
            red.removed_species.push_back(static_cast<Index>(i));
        }
    }
    return red;
}

OpenLinearSystem kron_reduce_linear(const OpenLinearSystem& sys, const Partition& part, OutputMode mode,
                                    const Tolerances& tol)
{
    const auto& k = part.kept();
    const auto& r = part.removed();
    if (part.size() != sys.order()) {
        throw InputError("partition does not match the system order");
    }
    const Matrix C2 = select_cols(sys.C, r);
    check_outputs(C2, mode, r);
    OpenLinearSystem red;
    const Matrix A11 = select(sys.A, k, k);
    const Matrix B1 = select_rows(sys.B, k);
    const Matrix C1 = select_cols(sys.C, k);
    if (r.empty()) {
        return {A11, B1, C1};
    }
    const Matrix A12 = select(sys.A, k, r);
    const Matrix A21 = select(sys.A, r, k);
    const Matrix A22 = select(sys.A, r, r);
    require_invertible(A22, "A22", tol.invertibility);
    const auto lu = A22.partialPivLu();
    const Matrix X = lu.solve(A21);
    red.A = A11 - A12 * X;
    red.B = B1 - A12 * lu.solve(select_rows(sys.B, r));
    red.C = C1 - C2 * X;
    return red;
}

OpenLinearSystem as_linear(const ReducedOpenCrn& red)
{
    return {-red.L_hat, red.D_in_hat, red.C_hat};
}

}  // namespace kronred
