#include <algorithm>
#include <cmath>

#include <doctest.h>

#include <kronred/builtin_networks.hpp>
#include <kronred/spectral.hpp>

#include "generators.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace kronred;
using namespace kronred::testing;

namespace {

Matrix leaky(const CrnNetwork& net)
{
    return build_laplacian(net) + net.outflow_matrix();
}

/// Chain lambda_i(full) <= lambda_i(red) <= lambda_{i+c-ch}(full) on oracle eigenvalues.
bool interlaces(const Vector& full, const Vector& red, double slack)
{
    const auto c = full.size();
    const auto ch = red.size();
    for (Eigen::Index i = 0; i < ch; ++i) {
        if (full(i) > red(i) + slack || red(i) > full(i + c - ch) + slack) {
            return false;
        }
    }
    return true;
}

Vector oracle_symmetrized_eigs(const Matrix& M)
{
    const auto xi = symmetrizing_scaling(M);
    REQUIRE(xi.has_value());
    return jacobi_eigenvalues(symmetrize(M, *xi));
}

}  // namespace

TEST_SUITE("spectral")
{
    TEST_CASE("glycolysis spectrum")
    {
        const Vector eig = eig_real(leaky(builtin::glycolysis()));
        const double expected[3] = {1.8745, 11.8516, 80.4339};
        for (int i = 0; i < 3; ++i) {
            CHECK(std::abs(eig(i) - expected[i]) < 1e-3);
        }
        const Vector oracle = oracle_symmetrized_eigs(leaky(builtin::glycolysis()));
        CHECK((eig - oracle).cwiseAbs().maxCoeff() < 1e-10);
    }

    TEST_CASE("identity spectrum")
    {
        const Vector eig = eig_real(Matrix::Identity(3, 3), true);
        CHECK((eig - Vector::Ones(3)).cwiseAbs().maxCoeff() == 0.0);
    }

    TEST_CASE("random symmetric matrices against characteristic-polynomial roots")
    {
        Rng rng(43);
        for (int trial = 0; trial < 50; ++trial) {
            const Eigen::Index n = static_cast<Eigen::Index>(uniform_index(rng, 2, 6));
            Matrix M(n, n);
            for (Eigen::Index i = 0; i < n; ++i) {
                for (Eigen::Index j = 0; j <= i; ++j) {
                    M(i, j) = M(j, i) = uniform(rng, -2.0, 2.0);
                }
            }
            const Eigen::VectorXcd eig = eig_spectrum(M, true);
            const auto roots = polynomial_roots(characteristic_polynomial(M));
            const Vector jac = jacobi_eigenvalues(M);
            for (Eigen::Index i = 0; i < n; ++i) {
                CHECK(eig(i).imag() == 0.0);
                CHECK(std::abs(eig(i).real() - roots[static_cast<std::size_t>(i)].real()) < 1e-8);
                CHECK(std::abs(eig(i).real() - jac(i)) < 1e-10);
            }
            CHECK(std::abs(eig.real().sum() - M.trace()) <= 1e-9 * std::max(1.0, M.cwiseAbs().sum()));
        }
    }

    TEST_CASE("nonsymmetric spectra against characteristic-polynomial roots")
    {
        Rng rng(47);
        for (int trial = 0; trial < 30; ++trial) {
            const auto sys = build_open_linear(random_open_ss(rng, uniform_index(rng, 2, 6)));
            const Eigen::VectorXcd eig = eig_spectrum(-sys.A);
            const auto roots = polynomial_roots(characteristic_polynomial(-sys.A));
            for (Eigen::Index i = 0; i < eig.size(); ++i) {
                const auto& r = roots[static_cast<std::size_t>(i)];
                const bool found = std::any_of(roots.begin(), roots.end(), [&](auto z) {
                    return std::abs(z - eig(i)) < 1e-7 * std::max(1.0, std::abs(z));
                });
                CHECK_MESSAGE(found, r.real());
            }
        }
    }

    TEST_CASE("symmetrizing scaling")
    {
        Rng rng(53);
        for (int trial = 0; trial < 30; ++trial) {
            const Matrix M = leaky(random_detailed_balanced(rng, uniform_index(rng, 2, 8)));
            const auto xi = symmetrizing_scaling(M);
            REQUIRE(xi.has_value());
            CHECK((xi->array() > 0.0).all());
            const Vector sx = xi->array().sqrt();
            const Matrix S = sx.cwiseInverse().asDiagonal() * M * sx.asDiagonal();
            CHECK(max_abs_diff(S, S.transpose()) < 1e-9 * M.cwiseAbs().maxCoeff());
        }
        CHECK_FALSE(symmetrizing_scaling(leaky(builtin::mckeithan())).has_value());
    }

    TEST_CASE("glycolysis interlacing")
    {
        const auto net = builtin::glycolysis();
        const auto red = kron_reduce_open(net, Partition::from_removed(3, {1}));
        const auto rep = check_interlacing(leaky(net), red.L_hat);
        CHECK(rep.interlaced);
        CHECK(rep.hypothesis_met);
        CHECK(rep.first_positive);
        CHECK(std::abs(rep.reduced_eigs(0) - 2.0281) < 1e-3);
        CHECK(std::abs(rep.reduced_eigs(1) - 11.9645) < 1e-3);
    }

    TEST_CASE("empty removal interlaces with equality")
    {
        const Matrix LR = leaky(builtin::glycolysis());
        const auto rep = check_interlacing(LR, LR);
        CHECK(rep.interlaced);
        CHECK((rep.full_eigs - rep.reduced_eigs).cwiseAbs().maxCoeff() < 1e-12);
    }

    TEST_CASE("random symmetric leaky Laplacians interlace under single removals")
    {
        Rng rng(59);
        for (int trial = 0; trial < 100; ++trial) {
            const auto net = random_detailed_balanced(rng, uniform_index(rng, 2, 9), true);
            const Matrix LR = leaky(net);
            const Index c = net.num_complexes();
            const Index i = uniform_index(rng, 0, c - 1);
            const auto red = kron_reduce_open(net, Partition::from_removed(c, {i}), OutputMode::Permissive);
            const auto rep = check_interlacing(LR, red.L_hat);
            CHECK(rep.interlaced);
            CHECK(rep.hypothesis_met);
            const Vector full = jacobi_eigenvalues(LR);
            const Vector reduced = jacobi_eigenvalues(red.L_hat);
            CHECK(interlaces(full, reduced, 1e-9));
            CHECK((full - rep.full_eigs).cwiseAbs().maxCoeff() < 1e-9 * std::max(1.0, full.maxCoeff()));
            CHECK(reduced(0) >= full(0) - 1e-9);
        }
    }

    TEST_CASE("detailed-balanced interlacing under multi-node removals")
    {
        Rng rng(61);
        for (int trial = 0; trial < 50; ++trial) {
            const auto net = random_detailed_balanced(rng, uniform_index(rng, 3, 9));
            const Index c = net.num_complexes();
            const auto red = kron_reduce_open(
                net, Partition::from_removed(c, random_subset(rng, c, uniform_index(rng, 1, c - 1))), OutputMode::Permissive);
            const auto rep = check_interlacing(leaky(net), red.L_hat);
            CHECK(rep.interlaced);
            CHECK(interlaces(oracle_symmetrized_eigs(leaky(net)), oracle_symmetrized_eigs(red.L_hat), 1e-8));
        }
    }

    TEST_CASE("nonsymmetrizable systems are advisory")
    {
        const auto net = builtin::mckeithan();
        const auto red = kron_reduce_open(net, Partition::from_removed(21, {3}));
        const auto rep = check_interlacing(leaky(net), red.L_hat);
        CHECK_FALSE(rep.hypothesis_met);
        CHECK(rep.advisory);
    }

    TEST_CASE("zero moments")
    {
        const auto net = builtin::glycolysis();
        const auto sys = build_open_linear(net);
        const auto red = kron_reduce_linear(sys, Partition::from_removed(3, {1}));
        CHECK(std::abs(zero_moment(sys)(0, 0) - (-0.6283)) < 1e-3);
        CHECK(std::abs(zero_moment(red)(0, 0) - (-0.6283)) < 1e-3);
        const auto rep = verify_moment_matching(sys, red);
        CHECK(rep.matched);
        CHECK(rep.max_abs_diff < 1e-10);

        OpenLinearSystem unit{-Matrix::Identity(2, 2), mat({{1}, {0}}), mat({{1, 0}})};
        CHECK(zero_moment(unit)(0, 0) == -1.0);
        const auto self = verify_moment_matching(unit, unit);
        CHECK(self.max_abs_diff == 0.0);
        CHECK(self.matched);
    }

    TEST_CASE("glycogen moment equals the hand-computed component gain")
    {
        const auto net = builtin::glycogen();
        const auto red = kron_reduce_open(net, Partition::from_removed(5, {4}));
        const double det = 772.67 * (242.62 + 182.9) - 242.62 * 772.67;
        const double oracle = 0.01 * (242.62 + 182.9) / det;
        CHECK(std::abs(zero_moment(net)(0, 0) - oracle) < 1e-12);
        CHECK(std::abs(zero_moment(red)(0, 0) - oracle) < 1e-12);
        const auto rep = verify_moment_matching(net, red);
        CHECK(rep.matched);
        CHECK_FALSE(rep.advisory);
    }

    TEST_CASE("ASM1 one-step reductions keep the DC gain")
    {
        const auto sys = build_open_linear(builtin::asm1());
        const double full = (sys.C * sys.A.fullPivLu().solve(sys.B))(0, 0);
        for (Index i = 0; i < 5; ++i) {
            const auto red = kron_reduce_linear(sys, Partition::from_removed(5, {i}), OutputMode::Permissive);
            const double reduced = (red.C * red.A.fullPivLu().solve(red.B))(0, 0);
            CHECK(std::abs(full - reduced) < 1e-8);
            CHECK(verify_moment_matching(sys, red).max_abs_diff < 1e-8);
        }
    }

    TEST_CASE("moment matching on random open networks")
    {
        Rng rng(67);
        for (int trial = 0; trial < 100; ++trial) {
            const auto sys = build_open_linear(random_open_ss(rng, uniform_index(rng, 5, 10)));
            const auto removed = random_unmeasured_subset(rng, sys);
            REQUIRE_FALSE(removed.empty());
            const auto red = kron_reduce_linear(sys, Partition::from_removed(sys.order(), removed));
            const auto rep = verify_moment_matching(sys, red);
            CHECK(rep.matched);
            CHECK(rep.max_abs_diff < 1e-8 * std::max(1.0, rep.full_moment.cwiseAbs().maxCoeff()));
        }
    }

    TEST_CASE("block expression of the moment equals the direct solve")
    {
        Rng rng(71);
        for (int trial = 0; trial < 100; ++trial) {
            const auto sys = build_open_linear(random_open_ss(rng, uniform_index(rng, 2, 10)));
            const auto part =
                Partition::from_removed(sys.order(), random_subset(rng, sys.order(), uniform_index(rng, 1, sys.order() - 1)));
            const Matrix direct = sys.C * sys.A.fullPivLu().solve(sys.B);
            const Matrix block = block_moment_expression(sys, part);
            CHECK(max_abs_diff(direct, block) < 1e-10 * std::max(1.0, direct.cwiseAbs().maxCoeff()));
        }
    }

    TEST_CASE("column-rank-deficient Z makes the moment comparison advisory")
    {
        const CrnNetwork net({"a", "b"}, mat({{1, 0, 1}, {0, 1, 1}}), {{0, 1, 1.0}, {1, 2, 2.0}, {2, 0, 1.5}},
                             {{0, 0, 1.0}}, {{2, 1.0}}, {{1}});
        const auto red = kron_reduce_open(net, Partition::from_removed(3, {2}), OutputMode::Permissive);
        CHECK(verify_moment_matching(net, red).advisory);
    }

    TEST_CASE("closed component carrying a measured complex is rejected")
    {
        const auto net = CrnNetwork::single_species({"a", "b", "c"}, {{0, 1, 1.0}, {1, 0, 1.0}}, {{2, 0, 1.0}},
                                                    {{2, 1.0}}, {{0}});
        CHECK_THROWS_AS(zero_moment(net), NumericalError);
    }
}
