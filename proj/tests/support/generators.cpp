#include "generators.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

namespace kronred::testing {

double uniform(Rng& rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Index uniform_index(Rng& rng, Index lo, Index hi)
{
    return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

namespace {

std::vector<std::string> names(Index n)
{
    std::vector<std::string> v;
    for (Index i = 0; i < n; ++i) {
        v.push_back("x" + std::to_string(i));
    }
    return v;
}

std::vector<Outflow> random_outflows(Rng& rng, Index c)
{
    std::vector<Outflow> out;
    for (Index i : random_subset(rng, c, uniform_index(rng, 1, std::min<Index>(2, c)))) {
        out.push_back({i, uniform(rng, 0.5, 3.0)});
    }
    return out;
}

std::vector<Inflow> random_inflows(Rng& rng, Index c)
{
    std::vector<Inflow> in;
    const Index p = uniform_index(rng, 1, 2);
    for (Index ch = 0; ch < p; ++ch) {
        in.push_back({uniform_index(rng, 0, c - 1), ch, uniform(rng, 0.5, 2.0)});
    }
    return in;
}

std::vector<IndexList> random_outputs(Rng& rng, Index c)
{
    std::vector<IndexList> out;
    const Index q = uniform_index(rng, 1, 2);
    for (Index k = 0; k < q; ++k) {
        out.push_back(random_subset(rng, c, uniform_index(rng, 1, std::min<Index>(2, c))));
    }
    return out;
}

}  // namespace

IndexList random_subset(Rng& rng, Index n, Index k)
{
    IndexList all(n);
    std::iota(all.begin(), all.end(), Index{0});
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
}

CrnNetwork random_open_ss(Rng& rng, Index c)
{
    IndexList perm(c);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::set<std::pair<Index, Index>> edges;
    for (Index i = 0; i < c; ++i) {
        edges.insert({perm[i], perm[(i + 1) % c]});
    }
    for (Index a = 0; a < c; ++a) {
        for (Index b = 0; b < c; ++b) {
            if (a != b && uniform(rng, 0.0, 1.0) < 0.3) {
                edges.insert({a, b});
            }
        }
    }
    std::vector<Reaction> rx;
    for (const auto& [a, b] : edges) {
        rx.push_back({a, b, uniform(rng, 0.2, 5.0)});
    }
    return CrnNetwork::single_species(names(c), rx, random_inflows(rng, c), random_outflows(rng, c),
                                      random_outputs(rng, c));
}

CrnNetwork random_detailed_balanced(Rng& rng, Index c, bool symmetric)
{
    std::vector<double> xi(c, 1.0);
    if (!symmetric) {
        for (auto& x : xi) {
            x = uniform(rng, 0.3, 3.0);
        }
    }
    std::set<std::pair<Index, Index>> pairs;
    for (Index i = 1; i < c; ++i) {
        pairs.insert({uniform_index(rng, 0, i - 1), i});
    }
    for (Index a = 0; a < c; ++a) {
        for (Index b = a + 1; b < c; ++b) {
            if (uniform(rng, 0.0, 1.0) < 0.25) {
                pairs.insert({a, b});
            }
        }
    }
    std::vector<Reaction> rx;
    for (const auto& [i, j] : pairs) {
        const double k = uniform(rng, 0.2, 5.0);
        rx.push_back({i, j, k});
        rx.push_back({j, i, k * xi[i] / xi[j]});
    }
    return CrnNetwork::single_species(names(c), rx, random_inflows(rng, c), random_outflows(rng, c),
                                      random_outputs(rng, c));
}

CrnNetwork random_closed_mass_action(Rng& rng, Index n, Index c)
{
    Matrix Z = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(c));
    for (Index j = 0; j < c; ++j) {
        bool fresh = false;
        while (!fresh) {
            for (Index i = 0; i < n; ++i) {
                Z(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    uniform(rng, 0.0, 1.0) < 0.5 ? static_cast<double>(uniform_index(rng, 1, 2)) : 0.0;
            }
            fresh = Z.col(static_cast<Eigen::Index>(j)).sum() > 0.0;
            for (Index k = 0; fresh && k < j; ++k) {
                fresh = Z.col(static_cast<Eigen::Index>(k)) != Z.col(static_cast<Eigen::Index>(j));
            }
        }
    }
    std::vector<Reaction> rx;
    for (Index i = 0; i < c; ++i) {
        const Index j = (i + 1) % c;
        if (c == 2 && i == 1) {
            break;
        }
        rx.push_back({i, j, uniform(rng, 0.2, 3.0)});
        rx.push_back({j, i, uniform(rng, 0.2, 3.0)});
    }
    return CrnNetwork(names(n), Z, rx, {}, {}, {{0}});
}

IndexList random_unmeasured_subset(Rng& rng, const OpenLinearSystem& sys)
{
    IndexList free;
    for (Index i = 0; i < sys.order(); ++i) {
        if (sys.C.col(static_cast<Eigen::Index>(i)).cwiseAbs().maxCoeff() == 0.0) {
            free.push_back(i);
        }
    }
    IndexList out;
    if (free.empty()) {
        return out;
    }
    for (Index p : random_subset(rng, static_cast<Index>(free.size()), uniform_index(rng, 1, static_cast<Index>(free.size())))) {
        out.push_back(free[p]);
    }
    return out;
}

}  // namespace kronred::testing
