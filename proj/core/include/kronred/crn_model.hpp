#pragma once

#include <string>
#include <vector>

#include "kronred/types.hpp"

namespace kronred {

struct Reaction {
    Index substrate = 0;
    Index product = 0;
    double rate = 0.0;
};

/// Constant inflow of channel `channel` into complex `complex`, scaled by
/// `gain` (the entry of D_in).
struct Inflow {
    Index complex = 0;
    Index channel = 0;
    double gain = 1.0;
};

/// Mass-action outflow from complex `complex` to the environment.
struct Outflow {
    Index complex = 0;
    double rate = 0.0;
};

/// Open mass-action chemical reaction network.
///
/// Holds the structural description (species, complexes, reactions, in- and
/// outflows, measured outputs) and derives the matrices used throughout:
/// Z (n x c), D (c x r), K (r x c), D_in (c x p), R = diag(k_out) and the
/// output selection C_raw (q x c). The zero complex used by in/outflow edges
/// is not stored as a column of Z; in/outflow live in D_in and R directly.
///
/// Construction validates every structural invariant and throws InputError
/// with the offending field on violation. Instances are immutable.
class CrnNetwork {
public:
    CrnNetwork(std::vector<std::string> species_names,
               Matrix complex_matrix,
               std::vector<Reaction> reactions,
               std::vector<Inflow> inflows,
               std::vector<Outflow> outflows,
               std::vector<IndexList> outputs);

    /// Single-species single-substrate network on `names`: complex i is the
    /// species i with coefficient 1.
    static CrnNetwork single_species(std::vector<std::string> names,
                                     std::vector<Reaction> reactions,
                                     std::vector<Inflow> inflows,
                                     std::vector<Outflow> outflows,
                                     std::vector<IndexList> outputs);

    Index num_species() const noexcept { return species_names_.size(); }
    Index num_complexes() const noexcept { return static_cast<Index>(complex_matrix_.cols()); }
    Index num_reactions() const noexcept { return reactions_.size(); }
    Index num_inputs() const noexcept { return num_inputs_; }
    Index num_outputs() const noexcept { return outputs_.size(); }

    const std::vector<std::string>& species_names() const noexcept { return species_names_; }
    const std::vector<Reaction>& reactions() const noexcept { return reactions_; }
    const std::vector<Inflow>& inflows() const noexcept { return inflows_; }
    const std::vector<Outflow>& outflows() const noexcept { return outflows_; }
    const std::vector<IndexList>& outputs() const noexcept { return outputs_; }

    const Matrix& complex_matrix() const noexcept { return complex_matrix_; }
    Matrix incidence() const;
    Vector rate_constants() const;
    Matrix outgoing_coincidence() const;
    Matrix inflow_matrix() const;
    Vector outflow_rates() const;
    Matrix outflow_matrix() const { return outflow_rates().asDiagonal(); }
    Matrix output_selection() const;

    /// Z is the identity (each complex is exactly one distinct species).
    bool is_single_species() const;
    bool is_open() const;

private:
    std::vector<std::string> species_names_;
    Matrix complex_matrix_;
    std::vector<Reaction> reactions_;
    std::vector<Inflow> inflows_;
    std::vector<Outflow> outflows_;
    std::vector<IndexList> outputs_;
    Index num_inputs_ = 0;
};

/// State-space triple of an open SS network: x' = A x + B u, y = C x with
/// A = -(L + R).
struct OpenLinearSystem {
    Matrix A;
    Matrix B;
    Matrix C;

    Index order() const noexcept { return static_cast<Index>(A.rows()); }
    Index num_inputs() const noexcept { return static_cast<Index>(B.cols()); }
    Index num_outputs() const noexcept { return static_cast<Index>(C.rows()); }
};

struct EquilibriumPoint {
    Vector x_star;
    /// Exp(Z^T Ln x*)
    Vector xi_star;
    /// || -Z(L+R) xi* + Z D_in v_in ||_inf
    double residual = 0.0;
    bool certified = false;
};

/// Sign pattern of a leaky Laplacian: diag >= 0, off-diagonal <= 0, column
/// sums >= 0, all up to `tol`.
bool is_leaky_laplacian(const Matrix& M, double tol = 1e-12);

/// L = -D K. Diagonal >= 0, off-diagonal <= 0, zero column sums.
Matrix build_laplacian(const CrnNetwork& net);

/// A = -(L + R), B = D_in, C = C_raw. Throws InputError when the network is
/// not single-species single-substrate.
OpenLinearSystem build_open_linear(const CrnNetwork& net);

/// Exp(Z^T Ln x) for strictly positive x.
Vector complex_monomials(const Matrix& Z, const Vector& x);

/// -Z (L+R) Exp(Z^T Ln x) + Z D_in v_in. Throws DomainError on x_i <= 0.
Vector mass_action_rhs(const CrnNetwork& net, const Vector& x, const Vector& v_in);

/// Evaluates the steady-state residual at x and marks the point certified
/// when it is below `tol`.
EquilibriumPoint certify_equilibrium(const CrnNetwork& net, const Vector& x,
                                     const Vector& v_in, double tol = 1e-8);

/// Min real part of eig(-A) > margin.
bool is_hurwitz(const Matrix& A, double margin = 1e-10);

}  // namespace kronred
