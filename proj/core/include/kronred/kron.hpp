#pragma once

#include <string>

#include "kronred/crn_model.hpp"

namespace kronred {

/// Ordered split of complex indices into kept (V1) and removed (V2) sets.
/// Both lists are sorted ascending and together cover 0..c-1 exactly once.
class Partition {
public:
    static Partition from_removed(Index c, IndexList removed);
    static Partition from_kept(Index c, IndexList kept);

    const IndexList& kept() const noexcept { return kept_; }
    const IndexList& removed() const noexcept { return removed_; }
    Index size() const noexcept { return kept_.size() + removed_.size(); }

    /// Permutation order [kept..., removed...].
    IndexList order() const;

private:
    Partition(IndexList kept, IndexList removed) : kept_(std::move(kept)), removed_(std::move(removed)) {}
    IndexList kept_;
    IndexList removed_;
};

enum class OutputMode {
    /// Removed complexes must not be measured (C2 = 0); violations throw.
    MeasuredPreserving,
    /// C2 != 0 allowed; the output map is corrected by the Schur term.
    Permissive,
};

struct BlockSet {
    Matrix L11, L12, L21, L22;
    Matrix R11, R22;
    Matrix Din1, Din2;
    Matrix C1, C2;
};

/// Permuted sub-blocks of L, R, D_in and C_raw for the partition.
BlockSet partition_matrices(const Matrix& L, const Matrix& R, const Matrix& Din, const Matrix& C,
                            const Partition& part);

/// Reassembles the full matrices from blocks (inverse of partition_matrices).
void assemble_blocks(const BlockSet& blocks, const Partition& part, Matrix& L, Matrix& R, Matrix& Din,
                     Matrix& C);

/// Reduced open network in the leaky-Laplacian convention: the reduced
/// dynamics on kept complexes are xi' = -L_hat xi + D_in_hat u, y = C_hat xi,
/// and A_hat = -L_hat for SS networks.
struct ReducedOpenCrn {
    Matrix Z_hat;
    Matrix L_hat;
    Matrix D_in_hat;
    Matrix C_hat;
    IndexList kept;
    IndexList removed;
    /// Species with zero rows in Z restricted to the kept complexes.
    IndexList removed_species;
    static constexpr const char* convention = "leaky-laplacian (A_hat = -L_hat)";
};

/// Throws ReductionInfeasible naming `block` when sigma_min(M) <= rel_tol * sigma_max(M).
void require_invertible(const Matrix& M, const std::string& block, double rel_tol = 1e-10);

/// S = M11 - M12 M22^{-1} M21 using an LU solve on M22.
Matrix schur_complement(const Matrix& M11, const Matrix& M12, const Matrix& M21, const Matrix& M22);

ReducedOpenCrn kron_reduce_open(const CrnNetwork& net, const Partition& part,
                                OutputMode mode = OutputMode::MeasuredPreserving,
                                const Tolerances& tol = {});

/// Linear SS reduction: A_hat = A11 - A12 A22^{-1} A21,
/// B_hat = B1 - A12 A22^{-1} B2, C_hat = C1 - C2 A22^{-1} A21.
OpenLinearSystem kron_reduce_linear(const OpenLinearSystem& sys, const Partition& part,
                                    OutputMode mode = OutputMode::MeasuredPreserving,
                                    const Tolerances& tol = {});

/// The SS linear system of a reduced network: (-L_hat, D_in_hat, C_hat).
OpenLinearSystem as_linear(const ReducedOpenCrn& red);

/// Rows/columns of M selected by idx.
Matrix select(const Matrix& M, const IndexList& rows, const IndexList& cols);
Matrix select_rows(const Matrix& M, const IndexList& rows);
Matrix select_cols(const Matrix& M, const IndexList& cols);

}  // namespace kronred
