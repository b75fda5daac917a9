#include <algorithm>
#include <cmath>

#include <doctest.h>

#include <kronred/builtin_networks.hpp>
#include <kronred/kron.hpp>

#include "generators.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace kronred;
using namespace kronred::testing;

namespace {

double scale(const Matrix& M)
{
    return std::max(1.0, M.cwiseAbs().maxCoeff());
}

IndexList merge(IndexList a, const IndexList& b)
{
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    return a;
}

}  // namespace

TEST_SUITE("kron")
{
    TEST_CASE("partition blocks of the glycolysis chain")
    {
        const auto net = builtin::glycolysis();
        const auto part = Partition::from_removed(3, {1});
        CHECK(part.kept() == IndexList{0, 2});
        const auto b = partition_matrices(build_laplacian(net), net.outflow_matrix(), net.inflow_matrix(),
                                          net.output_selection(), part);
        CHECK(max_abs_diff(b.L22, mat({{73.64}})) < 1e-12);
        CHECK(max_abs_diff(b.R22, mat({{0}})) == 0.0);
        CHECK(max_abs_diff(b.L12, mat({{-41.11}, {-32.53}})) < 1e-12);
    }

    TEST_CASE("empty removal keeps everything in the first block")
    {
        const auto net = builtin::asm1();
        const Matrix L = build_laplacian(net);
        const auto b = partition_matrices(L, net.outflow_matrix(), net.inflow_matrix(), net.output_selection(),
                                          Partition::from_removed(5, {}));
        CHECK(max_abs_diff(b.L11, L) == 0.0);
        CHECK(b.L22.size() == 0);
        CHECK(b.L12.size() == 0);
        CHECK(b.L21.size() == 0);
        CHECK(b.Din2.size() == 0);
    }

    TEST_CASE("partition round trip against an explicit permutation")
    {
        Rng rng(17);
        for (int trial = 0; trial < 30; ++trial) {
            const Index c = uniform_index(rng, 2, 8);
            const Matrix L = Matrix::Random(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
            const Matrix R = Vector::Random(static_cast<Eigen::Index>(c)).asDiagonal();
            const Matrix Din = Matrix::Random(static_cast<Eigen::Index>(c), 2);
            const Matrix C = Matrix::Random(3, static_cast<Eigen::Index>(c));
            const auto part = Partition::from_removed(c, random_subset(rng, c, uniform_index(rng, 0, c - 1)));
            const auto b = partition_matrices(L, R, Din, C, part);

            const auto order = part.order();
            Matrix P = Matrix::Zero(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c));
            for (Index i = 0; i < c; ++i) {
                P(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(order[i])) = 1.0;
            }
            const Matrix PL = P * L * P.transpose();
            const auto k = static_cast<Eigen::Index>(part.kept().size());
            const auto r = static_cast<Eigen::Index>(part.removed().size());
            CHECK(max_abs_diff(b.L11, PL.topLeftCorner(k, k)) == 0.0);
            CHECK(max_abs_diff(b.L12, PL.topRightCorner(k, r)) == 0.0);
            CHECK(max_abs_diff(b.L21, PL.bottomLeftCorner(r, k)) == 0.0);
            CHECK(max_abs_diff(b.L22, PL.bottomRightCorner(r, r)) == 0.0);
            CHECK(max_abs_diff(b.C2, (C * P.transpose()).rightCols(r)) == 0.0);

            Matrix L2, R2, D2, C2;
            assemble_blocks(b, part, L2, R2, D2, C2);
            CHECK(max_abs_diff(L2, L) == 0.0);
            CHECK(max_abs_diff(R2, R) == 0.0);
            CHECK(max_abs_diff(D2, Din) == 0.0);
            CHECK(max_abs_diff(C2, C) == 0.0);
        }
    }

    TEST_CASE("invalid partitions are rejected")
    {
        CHECK_THROWS_AS(Partition::from_removed(3, {3}), InputError);
        CHECK_THROWS_AS(Partition::from_removed(3, {1, 1}), InputError);
        CHECK_THROWS_AS(Partition::from_kept(3, {0, 5}), InputError);
    }

    TEST_CASE("glycolysis reduction removing the middle complex")
    {
        const auto red = kron_reduce_open(builtin::glycolysis(), Partition::from_removed(3, {1}));
        CHECK(max_abs_diff(red.L_hat, mat({{3.18, -3.18}, {-3.18, 10.82}})) < 0.01);
        CHECK(max_abs_diff(red.D_in_hat, mat({{4.8}, {0}})) < 1e-12);
        CHECK(max_abs_diff(red.C_hat, mat({{0, 1}})) == 0.0);
        const double expected_11 = 7.19 - 41.11 * 7.19 / 73.64;
        CHECK(std::abs(red.L_hat(0, 0) - expected_11) < 1e-12);
    }

    TEST_CASE("glycogen reduction removing the last complex")
    {
        const auto red = kron_reduce_open(builtin::glycogen(), Partition::from_removed(5, {4}));
        CHECK(red.L_hat.rows() == 4);
        CHECK(std::abs(-red.L_hat(2, 2) - (-332.11)) < 0.01);
        CHECK(red.removed_species == IndexList{3});
    }

    TEST_CASE("empty removal returns the full network")
    {
        const auto net = builtin::asm1();
        const auto red = kron_reduce_open(net, Partition::from_removed(5, {}));
        CHECK(max_abs_diff(red.L_hat, build_laplacian(net) + net.outflow_matrix()) == 0.0);
        CHECK(max_abs_diff(red.D_in_hat, net.inflow_matrix()) == 0.0);
        CHECK(max_abs_diff(red.C_hat, net.output_selection()) == 0.0);
    }

    TEST_CASE("ASM1 one-step reduction against block elimination by explicit inverse")
    {
        const auto sys = build_open_linear(builtin::asm1());
        const auto red = kron_reduce_linear(sys, Partition::from_removed(5, {4}));
        const auto oracle = kron_by_inverse(sys, {4});
        CHECK(max_abs_diff(red.A, oracle.A) < 1e-12);
        CHECK(max_abs_diff(red.B, oracle.B) < 1e-12);
        CHECK(max_abs_diff(red.C, oracle.C) < 1e-12);
        CHECK(is_leaky_laplacian(-red.A, 1e-12));
    }

    TEST_CASE("random reductions match the explicit-inverse oracle")
    {
        Rng rng(23);
        for (int trial = 0; trial < 100; ++trial) {
            const auto sys = build_open_linear(random_open_ss(rng, uniform_index(rng, 2, 9)));
            const auto removed = random_subset(rng, sys.order(), uniform_index(rng, 1, sys.order() - 1));
            const auto red = kron_reduce_linear(sys, Partition::from_removed(sys.order(), removed), OutputMode::Permissive);
            const auto oracle = kron_by_inverse(sys, removed);
            CHECK(max_abs_diff(red.A, oracle.A) < 1e-10 * scale(sys.A));
            CHECK(max_abs_diff(red.B, oracle.B) < 1e-10 * scale(sys.B));
            CHECK(max_abs_diff(red.C, oracle.C) < 1e-10 * scale(sys.C));
        }
    }

    TEST_CASE("reduced networks keep the leaky-Laplacian structure")
    {
        Rng rng(29);
        for (int trial = 0; trial < 100; ++trial) {
            const auto net = random_open_ss(rng, uniform_index(rng, 2, 9));
            const Index c = net.num_complexes();
            const auto removed = random_subset(rng, c, uniform_index(rng, 1, c - 1));
            const auto red = kron_reduce_open(net, Partition::from_removed(c, removed), OutputMode::Permissive);
            CHECK(is_leaky_laplacian(red.L_hat, 1e-12 * scale(red.L_hat)));
        }
        for (const auto& name : {"glycolysis", "asm1", "mckeithan"}) {
            const auto net = builtin::by_name(name);
            for (Index i = 0; i < net.num_complexes(); ++i) {
                const auto red = kron_reduce_open(net, Partition::from_removed(net.num_complexes(), {i}),
                                                  OutputMode::Permissive);
                CHECK(is_leaky_laplacian(red.L_hat, 1e-12 * scale(red.L_hat)));
            }
        }
    }

    TEST_CASE("quotient property: sequential equals one-shot reduction")
    {
        Rng rng(31);
        for (int trial = 0; trial < 100; ++trial) {
            const auto sys = build_open_linear(random_open_ss(rng, uniform_index(rng, 3, 9)));
            const Index n = sys.order();
            const auto s1 = random_subset(rng, n, uniform_index(rng, 1, n - 2));
            IndexList rest;
            for (Index i = 0; i < n; ++i) {
                if (!std::binary_search(s1.begin(), s1.end(), i)) {
                    rest.push_back(i);
                }
            }
            const auto pick = random_subset(rng, rest.size(), uniform_index(rng, 1, rest.size() - 1));
            IndexList s2_global, s2_local;
            for (Index p : pick) {
                s2_global.push_back(rest[p]);
                s2_local.push_back(p);
            }
            const auto once = kron_reduce_linear(sys, Partition::from_removed(n, merge(s1, s2_global)), OutputMode::Permissive);
            const auto step1 = kron_reduce_linear(sys, Partition::from_removed(n, s1), OutputMode::Permissive);
            const auto twice =
                kron_reduce_linear(step1, Partition::from_removed(step1.order(), s2_local), OutputMode::Permissive);
            CHECK(max_abs_diff(once.A, twice.A) < 1e-10 * scale(sys.A));
            CHECK(max_abs_diff(once.B, twice.B) < 1e-10 * scale(sys.B));
            CHECK(max_abs_diff(once.C, twice.C) < 1e-10);
        }
    }

    TEST_CASE("symmetric L+R gives a symmetric reduced Laplacian")
    {
        Rng rng(37);
        for (int trial = 0; trial < 50; ++trial) {
            const auto net = random_detailed_balanced(rng, uniform_index(rng, 3, 9), true);
            const Index c = net.num_complexes();
            const auto red = kron_reduce_open(net, Partition::from_removed(c, random_subset(rng, c, uniform_index(rng, 1, c - 1))),
                                              OutputMode::Permissive);
            CHECK(max_abs_diff(red.L_hat, red.L_hat.transpose()) <= 1e-12 * scale(red.L_hat));
        }
    }

    TEST_CASE("without outflow on removed complexes L_hat = L_hat_closed + R11")
    {
        Rng rng(41);
        int tested = 0;
        for (int trial = 0; trial < 200 && tested < 50; ++trial) {
            const auto net = random_open_ss(rng, uniform_index(rng, 3, 9));
            const Index c = net.num_complexes();
            IndexList no_out;
            const Vector r = net.outflow_rates();
            for (Index i = 0; i < c; ++i) {
                if (r(static_cast<Eigen::Index>(i)) == 0.0) {
                    no_out.push_back(i);
                }
            }
            if (no_out.empty()) {
                continue;
            }
            ++tested;
            IndexList removed;
            for (Index p : random_subset(rng, no_out.size(), uniform_index(rng, 1, no_out.size()))) {
                removed.push_back(no_out[p]);
            }
            const auto part = Partition::from_removed(c, removed);
            const auto red = kron_reduce_open(net, part, OutputMode::Permissive);
            const auto b = partition_matrices(build_laplacian(net), net.outflow_matrix(), net.inflow_matrix(),
                                              net.output_selection(), part);
            const Matrix closed = schur_complement(b.L11, b.L12, b.L21, b.L22);
            CHECK(max_abs_diff(red.L_hat, closed + b.R11) <= 1e-12 * scale(red.L_hat));
        }
        CHECK(tested > 0);
    }

    TEST_CASE("decoupled blocks reduce to the kept block")
    {
        OpenLinearSystem sys{mat({{-1, 0, 0}, {0, -2, 0}, {0, 0, -3}}), mat({{1}, {2}, {3}}), mat({{1, 1, 0}})};
        const auto red = kron_reduce_linear(sys, Partition::from_removed(3, {2}));
        CHECK(max_abs_diff(red.A, mat({{-1, 0}, {0, -2}})) == 0.0);
        CHECK(max_abs_diff(red.B, mat({{1}, {2}})) == 0.0);
        CHECK(max_abs_diff(red.C, mat({{1, 1}})) == 0.0);
    }

    TEST_CASE("measured complexes and the output mode")
    {
        const auto net = builtin::glycolysis();
        CHECK_THROWS_AS(kron_reduce_open(net, Partition::from_removed(3, {2}), OutputMode::MeasuredPreserving), InputError);
        const auto red = kron_reduce_open(net, Partition::from_removed(3, {2}), OutputMode::Permissive);
        CHECK(red.C_hat.cwiseAbs().maxCoeff() > 0.0);
    }

    TEST_CASE("singular removed block is reported as infeasible")
    {
        const auto net = builtin::glycogen();
        CHECK_THROWS_AS(kron_reduce_open(net, Partition::from_removed(5, {0, 1, 3})), ReductionInfeasible);
        CHECK_THROWS_AS(require_invertible(mat({{1, 2}, {2, 4}}), "test"), ReductionInfeasible);
        CHECK_NOTHROW(require_invertible(mat({{1, 0}, {0, 1}}), "test"));
    }
}
