#include "kronred/wegscheider.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <sstream>

namespace kronred {

namespace {

/// Undirected complex graph; each edge remembers the reaction in each
/// direction (if present).
struct ComplexGraph {
    struct Edge {
        Index a = 0;
        Index b = 0;
        std::optional<Index> a_to_b;
        std::optional<Index> b_to_a;
    };

    std::vector<Edge> edges;
    std::vector<std::vector<Index>> incident;  // vertex -> edge ids

    explicit ComplexGraph(const CrnNetwork& net) : incident(net.num_complexes())
    {
        std::map<std::pair<Index, Index>, Index> lookup;
        const auto& rx = net.reactions();
        for (Index j = 0; j < rx.size(); ++j) {
            const Index lo = std::min(rx[j].substrate, rx[j].product);
            const Index hi = std::max(rx[j].substrate, rx[j].product);
            auto [it, inserted] = lookup.try_emplace({lo, hi}, edges.size());
            if (inserted) {
                edges.push_back(Edge{lo, hi, std::nullopt, std::nullopt});
                incident[lo].push_back(it->second);
                incident[hi].push_back(it->second);
            }
            auto& e = edges[it->second];
            if (rx[j].substrate == lo) {
                e.a_to_b = j;
            } else {
                e.b_to_a = j;
            }
        }
    }

    Index other(Index edge, Index v) const { return edges[edge].a == v ? edges[edge].b : edges[edge].a; }
};

struct SpanningForest {
    std::vector<std::optional<Index>> parent_edge;
    std::vector<Index> depth;
    std::vector<Index> root;
    std::vector<bool> tree_edge;
};

SpanningForest bfs_forest(const ComplexGraph& g)
{
    const Index c = g.incident.size();
    SpanningForest f{std::vector<std::optional<Index>>(c), std::vector<Index>(c, 0),
                     std::vector<Index>(c, c), std::vector<bool>(g.edges.size(), false)};
    for (Index start = 0; start < c; ++start) {
        if (f.root[start] != c) {
            continue;
        }
        f.root[start] = start;
        std::queue<Index> q;
        q.push(start);
        while (!q.empty()) {
            const Index v = q.front();
            q.pop();
            for (Index e : g.incident[v]) {
                const Index w = g.other(e, v);
                if (f.root[w] == c) {
                    f.root[w] = start;
                    f.parent_edge[w] = e;
                    f.depth[w] = f.depth[v] + 1;
                    f.tree_edge[e] = true;
                    q.push(w);
                }
            }
        }
    }
    return f;
}

/// Adds the traversal of edge `e` in direction from -> to.
void traverse(const ComplexGraph& g, Index e, Index from, std::map<Index, int>& terms, bool& irreversible)
{
    const auto& edge = g.edges[e];
    const bool forward = edge.a == from;
    const auto fwd = forward ? edge.a_to_b : edge.b_to_a;
    const auto rev = forward ? edge.b_to_a : edge.a_to_b;
    if (!fwd || !rev) {
        irreversible = true;
    }
    if (fwd) {
        terms[*fwd] += 1;
    }
    if (rev) {
        terms[*rev] -= 1;
    }
}

/// Oriented tree path from `u` to `v` (same tree) as edge traversals.
CycleConstraint tree_path(const ComplexGraph& g, const SpanningForest& f, Index u, Index v)
{
    std::map<Index, int> terms;
    bool irreversible = false;
    std::vector<std::pair<Index, Index>> down;  // (edge, from) on the v side, reversed later
    Index a = u;
    Index b = v;
    while (f.depth[a] > f.depth[b]) {
        const Index e = *f.parent_edge[a];
        traverse(g, e, a, terms, irreversible);
        a = g.other(e, a);
    }
    while (f.depth[b] > f.depth[a]) {
        const Index e = *f.parent_edge[b];
        const Index up = g.other(e, b);
        down.emplace_back(e, up);
        b = up;
    }
    while (a != b) {
        const Index ea = *f.parent_edge[a];
        traverse(g, ea, a, terms, irreversible);
        a = g.other(ea, a);
        const Index eb = *f.parent_edge[b];
        const Index up = g.other(eb, b);
        down.emplace_back(eb, up);
        b = up;
    }
    for (auto it = down.rbegin(); it != down.rend(); ++it) {
        traverse(g, it->first, it->second, terms, irreversible);
    }
    CycleConstraint out;
    out.has_irreversible = irreversible;
    for (auto [j, s] : terms) {
        if (s != 0) {
            out.terms.emplace_back(j, s);
        }
    }
    return out;
}

}  // namespace

std::vector<ReversiblePair> reversible_pairs(const CrnNetwork& net)
{
    const ComplexGraph g(net);
    std::vector<ReversiblePair> out;
    for (const auto& e : g.edges) {
        if (e.a_to_b && e.b_to_a) {
            out.push_back({std::min(*e.a_to_b, *e.b_to_a), std::max(*e.a_to_b, *e.b_to_a)});
        }
    }
    return out;
}

std::vector<CycleConstraint> fundamental_cycles(const CrnNetwork& net)
{
    const ComplexGraph g(net);
    const SpanningForest f = bfs_forest(g);
    std::vector<CycleConstraint> cycles;
    for (Index e = 0; e < g.edges.size(); ++e) {
        if (f.tree_edge[e]) {
            continue;
        }
        const auto& edge = g.edges[e];
        // tree path b -> a, then close the loop with the edge a -> b
        CycleConstraint cyc = tree_path(g, f, edge.b, edge.a);
        std::map<Index, int> terms(cyc.terms.begin(), cyc.terms.end());
        bool irreversible = cyc.has_irreversible;
        traverse(g, e, edge.a, terms, irreversible);
        CycleConstraint closed;
        closed.has_irreversible = irreversible;
        for (auto [j, s] : terms) {
            if (s != 0) {
                closed.terms.emplace_back(j, s);
            }
        }
        cycles.push_back(std::move(closed));
    }
    return cycles;
}

CycleConstraint path_constraint(const CrnNetwork& net, Index from, Index to)
{
    if (from >= net.num_complexes() || to >= net.num_complexes()) {
        throw InputError("path_constraint: complex index out of range");
    }
    const ComplexGraph g(net);
    const SpanningForest f = bfs_forest(g);
    if (f.root[from] != f.root[to]) {
        std::ostringstream os;
        os << "path_constraint: complexes " << from << " and " << to << " are not connected";
        throw InputError(os.str());
    }
    return tree_path(g, f, from, to);
}

WegscheiderReport wegscheider_check(const Vector& rates,
                                    const std::vector<CycleConstraint>& constraints,
                                    double tol)
{
    WegscheiderReport rep;
    for (const auto& c : constraints) {
        if (c.has_irreversible) {
            rep.residuals.push_back(std::numeric_limits<double>::infinity());
            rep.admissible = false;
            continue;
        }
        double s = 0.0;
        for (auto [j, sign] : c.terms) {
            if (j >= static_cast<Index>(rates.size())) {
                throw InputError("wegscheider_check: constraint refers to a reaction out of range");
            }
            s += sign * std::log(rates(j));
        }
        rep.residuals.push_back(std::abs(s));
        rep.admissible = rep.admissible && std::abs(s) <= tol;
    }
    return rep;
}

WegscheiderReport wegscheider_check(const CrnNetwork& net, double tol)
{
    return wegscheider_check(net.rate_constants(), fundamental_cycles(net), tol);
}

Vector wegscheider_project(const Vector& k_prior, const std::vector<CycleConstraint>& constraints)
{
    for (Eigen::Index j = 0; j < k_prior.size(); ++j) {
        if (!(k_prior(j) > 0.0)) {
            std::ostringstream os;
            os << "wegscheider_project: prior rate k[" << j << "] = " << k_prior(j) << " is not positive";
            throw DomainError(os.str());
        }
    }
    const Vector l0 = k_prior.array().log().matrix();
    if (constraints.empty()) {
        return k_prior;
    }
    Matrix G = Matrix::Zero(static_cast<Eigen::Index>(constraints.size()), k_prior.size());
    for (Index i = 0; i < constraints.size(); ++i) {
        if (constraints[i].has_irreversible) {
            throw InputError("wegscheider_project: constraint contains an irreversible reaction");
        }
        for (auto [j, s] : constraints[i].terms) {
            if (j >= static_cast<Index>(k_prior.size())) {
                throw InputError("wegscheider_project: constraint refers to a reaction out of range");
            }
            G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s;
        }
    }
    // l = l0 - G^T (G G^T)^+ G l0; the pseudo-inverse tolerates dependent rows.
    const Matrix GGt = G * G.transpose();
    const Vector mult = GGt.completeOrthogonalDecomposition().solve(G * l0);
    const Vector l = l0 - G.transpose() * mult;
    return l.array().exp().matrix();
}

}  // namespace kronred
