#include <algorithm>
#include <cmath>

#include <doctest.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <kronred/builtin_networks.hpp>
#include <kronred/frequency.hpp>
#include <kronred/hinf.hpp>
#include <kronred/simulate.hpp>
#include <kronred/spectral.hpp>
#include <kronred/sweep.hpp>

#include "generators.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace kronred;
using namespace kronred::testing;

namespace {

IndexList labels_to_indices(std::initializer_list<int> labels)
{
    IndexList v;
    for (int l : labels) {
        v.push_back(static_cast<Index>(l - 1));
    }
    return v;
}

double dc_gain(const OpenLinearSystem& sys, const Vector& u)
{
    return (-(sys.C * sys.A.fullPivLu().solve(sys.B * u)))(0);
}

}  // namespace

TEST_SUITE("simulate")
{
    TEST_CASE("glycolysis step response settles at the physical gain")
    {
        const auto sys = build_open_linear(builtin::glycolysis());
        const double T = default_horizon(sys.A);
        const auto tr = simulate_linear(sys, InputSignal::step(Vector::Ones(1)), T, Vector::Zero(3));
        const double y = tr.outputs.back()(0);
        CHECK(std::abs(y - 0.6283) < 1e-3);
        CHECK(std::abs(y - dc_gain(sys, Vector::Ones(1))) <= 1e-3 * std::abs(y));
    }

    TEST_CASE("zero input from rest stays at rest")
    {
        const auto sys = build_open_linear(builtin::asm1());
        const auto tr = simulate_linear(sys, InputSignal::zero(1), 10.0, Vector::Zero(5));
        for (const auto& x : tr.states) {
            CHECK(x.cwiseAbs().maxCoeff() == 0.0);
        }
    }

    TEST_CASE("ASM1 one-step reductions reach the full steady state")
    {
        const auto sys = build_open_linear(builtin::asm1());
        const Vector u = Vector::Ones(1);
        const double T = default_horizon(sys.A);
        const double full = simulate_linear(sys, InputSignal::step(u), T, Vector::Zero(5)).outputs.back()(0);
        const double ref = dc_gain(sys, u);
        CHECK(std::abs(full - ref) <= 1e-3 * ref);
        for (Index i = 0; i < 5; ++i) {
            const auto red = kron_reduce_linear(sys, Partition::from_removed(5, {i}), OutputMode::Permissive);
            const double y = simulate_linear(red, InputSignal::step(u), T, Vector::Zero(4)).outputs.back()(0);
            CHECK(std::abs(y - full) <= 1e-3 * std::abs(full));
            CHECK(std::abs(dc_gain(red, u) - ref) <= 1e-8 * ref);
        }
    }

    TEST_CASE("linear simulation against the matrix exponential")
    {
        Rng rng(89);
        for (int trial = 0; trial < 20; ++trial) {
            const auto sys = build_open_linear(random_open_ss(rng, uniform_index(rng, 2, 7)));
            Vector u(sys.num_inputs());
            for (Eigen::Index i = 0; i < u.size(); ++i) {
                u(i) = uniform(rng, 0.0, 2.0);
            }
            Vector x0(sys.order());
            for (Eigen::Index i = 0; i < x0.size(); ++i) {
                x0(i) = uniform(rng, 0.0, 1.0);
            }
            const double T = 3.0;
            OdeOptions o;
            o.output_times = {0.5, 1.0, 2.0, 3.0};
            const auto tr = simulate_linear(sys, InputSignal::step(u), T, x0, o);
            REQUIRE(tr.times.size() == 4);
            for (std::size_t k = 0; k < 4; ++k) {
                const Vector ref = step_response_expm(sys, u, x0, tr.times[k]);
                CHECK((tr.outputs[k] - ref).cwiseAbs().maxCoeff() < 1e-6 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
            }
        }
    }

    TEST_CASE("tightening the tolerance shrinks the error against the exact solution")
    {
        const auto sys = build_open_linear(builtin::glycolysis());
        const Vector u = Vector::Ones(1);
        auto err = [&](double rtol) {
            OdeOptions o;
            o.rtol = rtol;
            o.atol = rtol * 1e-2;
            o.output_times = {0.05, 0.2, 1.0};
            const auto tr = simulate_linear(sys, InputSignal::step(u), 1.0, Vector::Zero(3), o);
            double e = 0.0;
            for (std::size_t k = 0; k < tr.times.size(); ++k) {
                e = std::max(e, (tr.outputs[k] - step_response_expm(sys, u, Vector::Zero(3), tr.times[k])).cwiseAbs().maxCoeff());
            }
            return e;
        };
        const double coarse = err(1e-4);
        const double fine = err(1e-8);
        CHECK(fine < coarse / 100.0);
        CHECK(fine < 1e-8);
        CHECK(err(5e-5) < coarse);
    }

    TEST_CASE("piecewise inputs integrate across the switch")
    {
        const auto sys = build_open_linear(builtin::glycolysis());
        const auto u = InputSignal::piecewise({0.0, 1.0}, {Vector::Ones(1), Vector::Zero(1)});
        OdeOptions o;
        o.output_times = {1.0, 2.0};
        const auto tr = simulate_linear(sys, u, 2.0, Vector::Zero(3), o);
        const Matrix E = (sys.A * 1.0).exp();
        const Vector x1 = sys.A.fullPivLu().solve((E - Matrix::Identity(3, 3)) * sys.B);
        const Vector x2 = E * x1;
        CHECK(std::abs(tr.outputs[0](0) - (sys.C * x1)(0)) < 1e-7);
        CHECK(std::abs(tr.outputs[1](0) - (sys.C * x2)(0)) < 1e-7);
        CHECK(u.switches_before(2.0) == std::vector<double>{1.0});
    }

    TEST_CASE("mass action on SS networks equals the linear simulation")
    {
        const auto net = builtin::glycolysis();
        const auto sys = build_open_linear(net);
        OdeOptions o;
        o.output_times = {0.1, 0.5, 2.0};
        const Vector x0 = Vector::Constant(3, 0.5);
        const auto a = simulate_mass_action(net, InputSignal::step(Vector::Ones(1)), 2.0, x0, o);
        const auto b = simulate_linear(sys, InputSignal::step(Vector::Ones(1)), 2.0, x0, o);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK((a.states[k] - b.states[k]).cwiseAbs().maxCoeff() < 1e-7);
        }
    }

    TEST_CASE("glycogen mass-action step settles at the steady-state gain")
    {
        const auto net = builtin::glycogen();
        const Vector v = Vector::Constant(1, 2.0);
        OdeOptions o;
        o.rtol = 1e-11;
        o.atol = 1e-14;
        o.output_times = {1.0, 60.0, 15000.0};
        const auto tr = simulate_mass_action(net, InputSignal::step(v), 15000.0, Vector::Ones(6), o);
        const Vector x = tr.states.back();
        CHECK(mass_action_rhs(net, x, v).cwiseAbs().maxCoeff() < 1e-8);
        const double expected = zero_moment(net)(0, 0) * v(0);
        CHECK(std::abs(tr.outputs.back()(0) - expected) <= 1e-6 * expected);
        for (const auto& s : tr.states) {
            CHECK((s.array() > 0.0).all());
        }
    }

    TEST_CASE("closed mass-action networks preserve conservation laws and positivity")
    {
        Rng rng(97);
        for (int trial = 0; trial < 20; ++trial) {
            const Index n = uniform_index(rng, 3, 5);
            const auto net = random_closed_mass_action(rng, n, uniform_index(rng, 2, n - 1));
            const Matrix S = net.complex_matrix() * net.incidence();
            const Matrix W = Eigen::FullPivLU<Matrix>(S.transpose()).kernel();
            REQUIRE(W.cols() >= 1);
            Vector x0(static_cast<Eigen::Index>(n));
            for (Eigen::Index i = 0; i < x0.size(); ++i) {
                x0(i) = uniform(rng, 0.2, 2.0);
            }
            const auto tr = simulate_mass_action(net, InputSignal::zero(0), 5.0, x0);
            for (const auto& x : tr.states) {
                CHECK((x.array() > 0.0).all());
                const Vector drift = W.transpose() * (x - x0);
                CHECK(drift.cwiseAbs().maxCoeff() <= 1e-8 * std::max(1.0, (W.transpose() * x0).cwiseAbs().maxCoeff()));
            }
        }
    }

    TEST_CASE("finite-time blow-up is reported")
    {
        auto f = [](double, const Vector& x) -> Vector { return x.cwiseProduct(x); };
        CHECK_THROWS_AS(integrate_dopri5(f, Vector::Ones(1), 0.0, 2.0), NumericalError);
    }

    TEST_CASE("positivity guard rejects steps whose stages leave the orthant")
    {
        auto f = [](double, const Vector& x) -> Vector {
            if ((x.array() <= 0.0).any()) {
                throw DomainError("nonpositive stage");
            }
            return -50.0 * x;
        };
        OdeOptions o;
        o.h_init = 1.0;
        o.positivity_guard = true;
        o.output_times = {1.0};
        const auto tr = integrate_dopri5(f, Vector::Ones(1), 0.0, 1.0, o);
        CHECK(tr.rejected_steps > 0);
        CHECK(std::abs(tr.states.back()(0) - std::exp(-50.0)) <= 1e-6 * std::exp(-50.0) + 1e-20);
    }

    TEST_CASE("mass action rejects nonpositive initial states")
    {
        CHECK_THROWS_AS(simulate_mass_action(builtin::glycogen(), InputSignal::zero(1), 1.0, Vector::Zero(6)), DomainError);
    }
}

TEST_SUITE("hinf")
{
    TEST_CASE("glycolysis one-step error")
    {
        const auto sys = build_open_linear(builtin::glycolysis());
        const auto red = kron_reduce_linear(sys, Partition::from_removed(3, {1}));
        const auto rep = hinf_error(sys, red);
        CHECK(std::abs(rep.hinf - 0.0335) <= 0.01 * 0.0335);
        CHECK(rep.methods_agree);
    }

    TEST_CASE("McKeithan output-node removal error")
    {
        const auto sys = build_open_linear(builtin::mckeithan());
        const auto red = kron_reduce_linear(sys, Partition::from_removed(21, {20}), OutputMode::Permissive);
        CHECK(std::abs(hinf_error(sys, red).hinf - 0.4283e-3) <= 0.01 * 0.4283e-3);
    }

    TEST_CASE("identical systems have zero error")
    {
        const auto sys = build_open_linear(builtin::asm1());
        CHECK(hinf_error(sys, sys).hinf == 0.0);
    }

    TEST_CASE("errors agree with a dense frequency grid")
    {
        Rng rng(101);
        for (int trial = 0; trial < 20; ++trial) {
            const auto sys = build_open_linear(random_open_ss(rng, uniform_index(rng, 3, 7)));
            const auto removed = random_subset(rng, sys.order(), uniform_index(rng, 1, sys.order() - 1));
            const auto red = kron_reduce_linear(sys, Partition::from_removed(sys.order(), removed), OutputMode::Permissive);
            const double h = hinf_error(sys, red).hinf;
            const double grid = hinf_dense_grid(sys, red, 4000);
            CHECK(h >= grid * (1.0 - 1e-9));
            CHECK(h <= grid * (1.0 + 1e-3) + 1e-14);
        }
    }

    TEST_CASE("triangle inequality on random triples")
    {
        Rng rng(103);
        for (int trial = 0; trial < 20; ++trial) {
            const auto sys = build_open_linear(random_open_ss(rng, uniform_index(rng, 4, 8)));
            const Index n = sys.order();
            const auto r1 = kron_reduce_linear(sys, Partition::from_removed(n, {0}), OutputMode::Permissive);
            const auto r2 = kron_reduce_linear(sys, Partition::from_removed(n, {0, 1}), OutputMode::Permissive);
            const double a = hinf_error(sys, r2).hinf;
            const double b = hinf_error(sys, r1).hinf;
            const double c = hinf_error(r1, r2).hinf;
            CHECK(a <= b + c + 1e-8);
        }
    }

    TEST_CASE("error system realization")
    {
        const auto sys = build_open_linear(builtin::glycolysis());
        const auto red = kron_reduce_linear(sys, Partition::from_removed(3, {1}));
        const auto e = error_system(sys, red);
        CHECK(e.order() == 5);
        const FrequencyResponse G(sys), Gr(red), Ge(e);
        for (double w : {0.0, 0.3, 7.0}) {
            CHECK(std::abs((Ge(w) - (G(w) - Gr(w)))(0, 0)) < 1e-12);
        }
        CHECK(std::abs(G.dc()(0, 0) - 0.628272) < 1e-5);
    }

    TEST_CASE("cached full response gives the same error")
    {
        const auto sys = build_open_linear(builtin::mckeithan());
        const FullResponseCache cache(sys, HinfOptions{});
        for (Index i : {2, 9, 16}) {
            const auto red = kron_reduce_linear(sys, Partition::from_removed(21, {i}));
            CHECK(hinf_error(cache, red).hinf == doctest::Approx(hinf_error(sys, red).hinf).epsilon(1e-9));
        }
    }
}

TEST_SUITE("sweep")
{
    TEST_CASE("subset enumeration")
    {
        CHECK(binomial(20, 5) == 15504.0);
        CHECK(binomial(5, 0) == 1.0);
        const auto s = k_subsets({1, 3, 5, 7}, 2);
        REQUIRE(s.size() == 6);
        CHECK(s.front() == IndexList{1, 3});
        CHECK(s[1] == IndexList{1, 5});
        CHECK(s.back() == IndexList{5, 7});
    }

    TEST_CASE("single candidate when k equals the removable count")
    {
        const auto sys = build_open_linear(builtin::glycolysis());
        SweepOptions o;
        o.k = 2;
        o.removable = {0, 1};
        const auto res = sweep_subsets(sys, o);
        REQUIRE(res.rows.size() == 1);
        CHECK(res.rows[0].removed == IndexList{0, 1});
    }

    TEST_CASE("single removals reproduce the McKeithan error ordering")
    {
        const auto sys = build_open_linear(builtin::mckeithan());
        SweepOptions o;
        o.k = 1;
        for (Index i = 0; i < 21; ++i) {
            o.removable.push_back(i);
        }
        const auto res = sweep_subsets(sys, o);
        const IndexList expected =
            labels_to_indices({21, 17, 19, 18, 3, 4, 5, 20, 6, 7, 15, 8, 16, 9, 14, 2, 12, 13, 10, 1, 11});
        REQUIRE(res.rows.size() == 21);
        for (Index i = 0; i < 21; ++i) {
            CHECK(res.rows[i].removed[0] == expected[i]);
        }
    }

    TEST_CASE("thread count does not change the result")
    {
        const auto sys = build_open_linear(builtin::mckeithan());
        SweepOptions o;
        o.k = 2;
        o.highlight = IndexList{2, 16};
        o.jobs = 1;
        const auto a = sweep_subsets(sys, o);
        o.jobs = 3;
        const auto b = sweep_subsets(sys, o);
        REQUIRE(a.rows.size() == 190);
        REQUIRE(b.rows.size() == 190);
        for (std::size_t i = 0; i < a.rows.size(); ++i) {
            CHECK(a.rows[i].removed == b.rows[i].removed);
            CHECK(a.rows[i].hinf == b.rows[i].hinf);
        }
        CHECK(a.highlight_position == b.highlight_position);
        REQUIRE(a.highlight_position.has_value());
        CHECK(a.rows[*a.highlight_position].removed == IndexList{2, 16});
        for (std::size_t i = 1; i < a.rows.size(); ++i) {
            CHECK(a.rows[i - 1].hinf <= a.rows[i].hinf);
        }
    }

    TEST_CASE("oversized sweeps are refused")
    {
        const auto sys = build_open_linear(builtin::mckeithan());
        SweepOptions o;
        o.k = 10;
        o.cap = 1000;
        CHECK_THROWS_AS(sweep_subsets(sys, o), InputError);
    }
}
