#include "kronred/crn_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace kronred {

namespace {

template <typename... Args>
[[noreturn]] void reject(Args&&... args)
{
    std::ostringstream os;
    (os << ... << args);
    throw InputError(os.str());
}

}  // namespace

CrnNetwork::CrnNetwork(std::vector<std::string> species_names,
                       Matrix complex_matrix,
                       std::vector<Reaction> reactions,
                       std::vector<Inflow> inflows,
                       std::vector<Outflow> outflows,
                       std::vector<IndexList> outputs)
    : species_names_(std::move(species_names)),
      complex_matrix_(std::move(complex_matrix)),
      reactions_(std::move(reactions)),
      inflows_(std::move(inflows)),
      outflows_(std::move(outflows)),
      outputs_(std::move(outputs))
{
    const auto n = species_names_.size();
    if (n == 0) {
        reject("species: at least one species is required");
    }
    if (static_cast<Index>(complex_matrix_.rows()) != n) {
        reject("complexes: stoichiometric matrix has ", complex_matrix_.rows(),
               " rows, expected one per species (", n, ")");
    }
    const Index c = num_complexes();
    if (c == 0) {
        reject("complexes: at least one complex is required");
    }
    for (Index j = 0; j < c; ++j) {
        bool nonzero = false;
        for (Index i = 0; i < n; ++i) {
            const double z = complex_matrix_(i, j);
            if (z < 0.0 || z != std::floor(z)) {
                reject("complexes[", j, "]: coefficient of species '", species_names_[i],
                       "' must be a nonnegative integer, got ", z);
            }
            nonzero = nonzero || z > 0.0;
        }
        if (!nonzero) {
            reject("complexes[", j, "]: empty complex (the zero complex is implicit in inflow/outflow)");
        }
    }
    for (Index a = 0; a < c; ++a) {
        for (Index b = a + 1; b < c; ++b) {
            if (complex_matrix_.col(a) == complex_matrix_.col(b)) {
                reject("complexes[", b, "]: duplicate of complexes[", a, "]");
            }
        }
    }
    for (Index j = 0; j < reactions_.size(); ++j) {
        const auto& r = reactions_[j];
        if (r.substrate >= c) {
            reject("reactions[", j, "].substrate: index ", r.substrate, " out of range [0,", c, ")");
        }
        if (r.product >= c) {
            reject("reactions[", j, "].product: index ", r.product, " out of range [0,", c, ")");
        }
        if (r.substrate == r.product) {
            reject("reactions[", j, "]: substrate and product are the same complex");
        }
        if (!(r.rate > 0.0) || !std::isfinite(r.rate)) {
            reject("reactions[", j, "].rate: must be a positive finite number, got ", r.rate);
        }
    }
    for (Index a = 0; a < reactions_.size(); ++a) {
        for (Index b = a + 1; b < reactions_.size(); ++b) {
            if (reactions_[a].substrate == reactions_[b].substrate
                && reactions_[a].product == reactions_[b].product) {
                reject("reactions[", b, "]: duplicates reactions[", a, "] (same substrate and product)");
            }
        }
    }
    for (Index j = 0; j < inflows_.size(); ++j) {
        const auto& f = inflows_[j];
        if (f.complex >= c) {
            reject("inflow[", j, "].complex: index ", f.complex, " out of range [0,", c, ")");
        }
        if (!std::isfinite(f.gain)) {
            reject("inflow[", j, "].gain: must be finite");
        }
        num_inputs_ = std::max(num_inputs_, f.channel + 1);
    }
    std::vector<bool> has_outflow(c, false);
    for (Index j = 0; j < outflows_.size(); ++j) {
        const auto& f = outflows_[j];
        if (f.complex >= c) {
            reject("outflow[", j, "].complex: index ", f.complex, " out of range [0,", c, ")");
        }
        if (!(f.rate >= 0.0) || !std::isfinite(f.rate)) {
            reject("outflow[", j, "].rate: must be a nonnegative finite number, got ", f.rate);
        }
        if (has_outflow[f.complex]) {
            reject("outflow[", j, "].complex: complex ", f.complex, " already has an outflow");
        }
        has_outflow[f.complex] = true;
    }
    for (Index j = 0; j < outputs_.size(); ++j) {
        if (outputs_[j].empty()) {
            reject("outputs[", j, "]: empty output selection");
        }
        for (Index k = 0; k < outputs_[j].size(); ++k) {
            if (outputs_[j][k] >= c) {
                reject("outputs[", j, "][", k, "]: index ", outputs_[j][k], " out of range [0,", c, ")");
            }
        }
    }
}

CrnNetwork CrnNetwork::single_species(std::vector<std::string> names,
                                      std::vector<Reaction> reactions,
                                      std::vector<Inflow> inflows,
                                      std::vector<Outflow> outflows,
                                      std::vector<IndexList> outputs)
{
    const auto n = static_cast<Eigen::Index>(names.size());
    return CrnNetwork(std::move(names), Matrix::Identity(n, n), std::move(reactions),
                      std::move(inflows), std::move(outflows), std::move(outputs));
}

Matrix CrnNetwork::incidence() const
{
    Matrix D = Matrix::Zero(num_complexes(), num_reactions());
    for (Index j = 0; j < reactions_.size(); ++j) {
        D(reactions_[j].substrate, j) = -1.0;
        D(reactions_[j].product, j) = 1.0;
    }
    return D;
}

Vector CrnNetwork::rate_constants() const
{
    Vector k(num_reactions());
    for (Index j = 0; j < reactions_.size(); ++j) {
        k(j) = reactions_[j].rate;
    }
    return k;
}

Matrix CrnNetwork::outgoing_coincidence() const
{
    Matrix K = Matrix::Zero(num_reactions(), num_complexes());
    for (Index j = 0; j < reactions_.size(); ++j) {
        K(j, reactions_[j].substrate) = reactions_[j].rate;
    }
    return K;
}

Matrix CrnNetwork::inflow_matrix() const
{
    Matrix Din = Matrix::Zero(num_complexes(), num_inputs_);
    for (const auto& f : inflows_) {
        Din(f.complex, f.channel) += f.gain;
    }
    return Din;
}

Vector CrnNetwork::outflow_rates() const
{
    Vector k = Vector::Zero(num_complexes());
    for (const auto& f : outflows_) {
        k(f.complex) = f.rate;
    }
    return k;
}

Matrix CrnNetwork::output_selection() const
{
    Matrix C = Matrix::Zero(num_outputs(), num_complexes());
    for (Index j = 0; j < outputs_.size(); ++j) {
        for (Index idx : outputs_[j]) {
            C(j, idx) = 1.0;
        }
    }
    return C;
}

bool CrnNetwork::is_single_species() const
{
    return complex_matrix_.rows() == complex_matrix_.cols()
        && complex_matrix_.isIdentity(0.0);
}

bool CrnNetwork::is_open() const
{
    return std::any_of(outflows_.begin(), outflows_.end(),
                       [](const Outflow& f) { return f.rate > 0.0; });
}

bool is_leaky_laplacian(const Matrix& M, double tol)
{
    if (M.rows() != M.cols()) {
        return false;
    }
    for (Eigen::Index j = 0; j < M.cols(); ++j) {
        if (M(j, j) < -tol) {
            return false;
        }
        for (Eigen::Index i = 0; i < M.rows(); ++i) {
            if (i != j && M(i, j) > tol) {
                return false;
            }
        }
        if (M.col(j).sum() < -tol * std::max(1.0, M.col(j).cwiseAbs().sum())) {
            return false;
        }
    }
    return true;
}

Matrix build_laplacian(const CrnNetwork& net)
{
    // Assembled edge by edge rather than as -D*K so column sums are exact.
    const Index c = net.num_complexes();
    Matrix L = Matrix::Zero(c, c);
    for (const auto& r : net.reactions()) {
        L(r.substrate, r.substrate) += r.rate;
        L(r.product, r.substrate) -= r.rate;
    }
    return L;
}

OpenLinearSystem build_open_linear(const CrnNetwork& net)
{
    if (!net.is_single_species()) {
        throw InputError("network is not single-species single-substrate (Z != I); "
                         "use the general Kron reduction path");
    }
    OpenLinearSystem sys;
    sys.A = -(build_laplacian(net) + net.outflow_matrix());
    sys.B = net.inflow_matrix();
    sys.C = net.output_selection();
    return sys;
}

Vector complex_monomials(const Matrix& Z, const Vector& x)
{
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x(i) > 0.0)) {
            std::ostringstream os;
            os << "concentration x[" << i << "] = " << x(i) << " is not strictly positive";
            throw DomainError(os.str());
        }
    }
    const Vector logx = x.array().log().matrix();
    return (Z.transpose() * logx).array().exp().matrix();
}

Vector mass_action_rhs(const CrnNetwork& net, const Vector& x, const Vector& v_in)
{
    if (static_cast<Index>(x.size()) != net.num_species()) {
        throw InputError("state dimension does not match the number of species");
    }
    if (static_cast<Index>(v_in.size()) != net.num_inputs()) {
        throw InputError("inflow vector dimension does not match the number of inflow channels");
    }
    const Matrix& Z = net.complex_matrix();
    const Vector w = complex_monomials(Z, x);
    const Matrix LR = build_laplacian(net) + net.outflow_matrix();
    Vector flux = -(LR * w);
    if (v_in.size() > 0) {
        flux += net.inflow_matrix() * v_in;
    }
    return Z * flux;
}

EquilibriumPoint certify_equilibrium(const CrnNetwork& net, const Vector& x,
                                     const Vector& v_in, double tol)
{
    EquilibriumPoint eq;
    eq.x_star = x;
    eq.xi_star = complex_monomials(net.complex_matrix(), x);
    eq.residual = mass_action_rhs(net, x, v_in).cwiseAbs().maxCoeff();
    eq.certified = eq.residual < tol;
    return eq;
}

bool is_hurwitz(const Matrix& A, double margin)
{
    if (A.rows() == 0) {
        return true;
    }
    const Eigen::VectorXcd ev = A.eigenvalues();
    return ev.real().maxCoeff() < -margin;
}

}  // namespace kronred
