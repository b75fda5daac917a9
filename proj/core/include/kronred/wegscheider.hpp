#pragma once

#include <utility>
#include <vector>

#include "kronred/crn_model.hpp"

namespace kronred {

/// A linear constraint on log rate constants: sum_j sign_j * ln k_j = 0.
/// For a reaction cycle the terms are the forward reactions with +1 and the
/// matching reverse reactions with -1.
struct CycleConstraint {
    std::vector<std::pair<Index, int>> terms;
    /// Set when a cycle edge has no reverse reaction; the network cannot be
    /// detailed balanced along this cycle regardless of the rates.
    bool has_irreversible = false;
};

struct ReversiblePair {
    Index forward = 0;
    Index reverse = 0;
};

/// Pairs (a->b, b->a) of reactions, forward being the lower reaction index.
std::vector<ReversiblePair> reversible_pairs(const CrnNetwork& net);

/// Fundamental cycles of the undirected complex graph w.r.t. a BFS spanning
/// forest. One constraint per non-tree edge.
std::vector<CycleConstraint> fundamental_cycles(const CrnNetwork& net);

/// Constraint that the product of forward rates along the tree path from
/// complex `from` to complex `to` equals the product of reverse rates. Used to
/// impose thermodynamic closure between two boundary complexes of an open
/// network (e.g. the inflow and outflow complexes of a linear pathway).
/// Throws InputError if no path of reversible reactions connects them.
CycleConstraint path_constraint(const CrnNetwork& net, Index from, Index to);

struct WegscheiderReport {
    /// |sum_j sign_j ln k_j| per constraint; +inf when the cycle contains an
    /// irreversible reaction.
    std::vector<double> residuals;
    bool admissible = true;
};

WegscheiderReport wegscheider_check(const Vector& rates,
                                    const std::vector<CycleConstraint>& constraints,
                                    double tol = 1e-8);
WegscheiderReport wegscheider_check(const CrnNetwork& net, double tol = 1e-8);

/// Orthogonal projection of ln k_prior onto {l : G l = 0}, G the constraint
/// matrix, mapped back through exp. Throws DomainError on a nonpositive prior.
Vector wegscheider_project(const Vector& k_prior, const std::vector<CycleConstraint>& constraints);

}  // namespace kronred
