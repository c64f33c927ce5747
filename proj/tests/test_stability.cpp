#include <cmath>
#include <string>
#include <vector>

#include "doctest.h"
#include "fixtures.hpp"
#include "lfc/errors.hpp"
#include "lfc/matops.hpp"
#include "lfc/stability.hpp"
#include "oracles.hpp"

using lfc::LeaderTopology;
using lfc::Matrix;
using lfc::WeightedDigraph;

TEST_CASE("h_matrix adds leader weights to the Laplacian diagonal") {
    const Matrix expected_a = {{2.0, -1.0, 0.0, 0.0},
                               {-1.0, 1.0, 0.0, 0.0},
                               {0.0, 0.0, 1.0, 0.0},
                               {0.0, -1.0, -1.0, 2.0}};
    CHECK(lfc::h_matrix(topo_a()) == expected_a);

    const Matrix expected_b = {{2.0, -1.0, 0.0, 0.0},
                               {-1.0, 1.0, 0.0, 0.0},
                               {0.0, 0.0, 2.0, -1.0},
                               {0.0, 0.0, -1.0, 1.0}};
    CHECK(lfc::h_matrix(topo_b()) == expected_b);
}

TEST_CASE("is_positive_stable checks every real part") {
    CHECK(lfc::is_positive_stable(lfc::h_matrix(topo_a())));
    CHECK(lfc::is_positive_stable(Matrix::identity(3)));
    CHECK_FALSE(lfc::is_positive_stable(lfc::laplacian(topo_a().graph())));
    CHECK_FALSE(lfc::is_positive_stable(-1.0 * Matrix::identity(2)));
    CHECK_THROWS_AS(lfc::is_positive_stable(Matrix(2, 3, 1.0)), lfc::ValidationError);
}

TEST_CASE("positive stability of the coupling matrix coincides with leader reachability") {
    oracle::Rng rng(301);
    for (int rep = 0; rep < 300; ++rep) {
        CAPTURE(rep);
        const auto t = oracle::random_topology(rng, rng.uniform_int(1, 6));
        REQUIRE(lfc::is_positive_stable(lfc::h_matrix(t)) == lfc::leader_globally_reachable(t));
    }
}

TEST_CASE("balanced_definiteness requires a balanced graph and mirrors reachability") {
    CHECK_THROWS_AS(lfc::balanced_definiteness(topo_a()), lfc::ValidationError);
    CHECK(lfc::balanced_definiteness(topo_b()));
    CHECK_FALSE(lfc::balanced_definiteness({topo_b().graph(), {0.0, 0.0, 0.0, 0.0}}));
    // Leader visible only from the first pair; the second pair never hears it.
    CHECK_FALSE(lfc::balanced_definiteness({topo_b().graph(), {1.0, 0.0, 0.0, 0.0}}));

    oracle::Rng rng(302);
    for (int rep = 0; rep < 200; ++rep) {
        CAPTURE(rep);
        const int n = rng.uniform_int(2, 6);
        WeightedDigraph g = oracle::random_balanced_digraph(rng, n);
        lfc::Vector b(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i)
            if (rng.chance(0.4)) b[static_cast<std::size_t>(i)] = rng.dyadic_weight();
        const LeaderTopology t(std::move(g), std::move(b));
        REQUIRE(lfc::balanced_definiteness(t) == lfc::leader_globally_reachable(t));
    }
}

TEST_CASE("system_matrices assembles the closed-loop blocks") {
    const Matrix h = lfc::h_matrix(topo_a());
    const auto m = lfc::system_matrices(h, 3.0);
    const Matrix zero(4, 4);
    const Matrix eye = Matrix::identity(4);
    CHECK(m.c == lfc::block2x2(zero, eye, zero, -3.0 * eye));
    CHECK(m.e == lfc::block2x2(zero, zero, -1.0 * h, zero));
    CHECK(m.f == m.c + m.e);
    CHECK((m.e * m.e).max_abs() == 0.0);

    CHECK_THROWS_AS(lfc::system_matrices(h, 0.0), lfc::ValidationError);
    CHECK_THROWS_AS(lfc::system_matrices(Matrix(2, 3, 1.0), 1.0), lfc::ValidationError);
}

TEST_CASE("fixed constants reproduce the frozen demonstration values") {
    const auto c = lfc::fixed_constants(topo_a());
    CHECK(lfc::max_abs_diff(c.p_bar, frozen::p_bar_a) <= 1e-12);
    CHECK(c.mu_bar == doctest::Approx(frozen::mu_bar_a).epsilon(1e-12));
    CHECK(c.lambda_bar == doctest::Approx(frozen::lambda_bar_a).epsilon(1e-12));
    CHECK(c.k_star == doctest::Approx(frozen::k_star_a).epsilon(1e-12));
    CHECK(c.k_star_alt == doctest::Approx(frozen::k_star_alt_a).epsilon(1e-12));
    CHECK(c.gate() == c.k_star_alt);
}

TEST_CASE("fixed constants of an identity coupling are closed form") {
    // Three agents, no mutual coupling, each sensing the leader with unit
    // weight: H = I, so the Lyapunov solution is I/2.
    const LeaderTopology t(WeightedDigraph(3, {}), {1.0, 1.0, 1.0});
    const auto c = lfc::fixed_constants(t);
    CHECK(lfc::max_abs_diff(c.p_bar, 0.5 * Matrix::identity(3)) <= 1e-12);
    CHECK(c.mu_bar == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(c.lambda_bar == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c.k_star == doctest::Approx(1.25).epsilon(1e-12));
    CHECK(c.k_star_alt == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("scaling every weight rescales the fixed constants predictably") {
    // Doubling all couplings doubles H; the Lyapunov solution halves, so
    // mu_bar is unchanged while lambda_bar halves.
    const auto base = lfc::fixed_constants(topo_a());
    const LeaderTopology scaled(
        WeightedDigraph(4, {{1, 2, 2.0}, {2, 1, 2.0}, {4, 2, 2.0}, {4, 3, 2.0}}),
        {2.0, 0.0, 2.0, 0.0});
    const auto c = lfc::fixed_constants(scaled);
    CHECK(c.mu_bar == doctest::Approx(base.mu_bar).epsilon(1e-10));
    CHECK(c.lambda_bar == doctest::Approx(base.lambda_bar / 2.0).epsilon(1e-10));
}

TEST_CASE("fixed analysis rejects inadmissible input") {
    CHECK_THROWS_AS(lfc::fixed_constants({topo_a().graph(), {1.0, 0.0, 0.0, 0.0}}),
                    lfc::AnalysisError);
    CHECK_THROWS_AS(lfc::analyze_fixed(topo_a(), 2.5, 1.05), lfc::AnalysisError);
    CHECK_THROWS_AS(lfc::analyze_fixed(topo_a(), 3.0, 1.0), lfc::ValidationError);
    CHECK_THROWS_AS(lfc::analyze_fixed(topo_a(), 3.0, 0.5), lfc::ValidationError);
}

TEST_CASE("fixed analysis reproduces the frozen margins at the demonstration gain") {
    const auto a = lfc::analyze_fixed(topo_a(), 3.0, 1.05);
    CHECK(a.k == 3.0);
    CHECK(a.q == 1.05);
    CHECK(a.lambda_min == doctest::Approx(frozen::lambda_min_a_k3).epsilon(1e-12));
    CHECK(a.tau == doctest::Approx(frozen::tau_a_k3).epsilon(1e-12));
    CHECK(a.norm_convention == "spectral");
    CHECK(a.warnings.empty());
    CHECK(a.q_matrix.rows() == 8);
    CHECK(a.q_matrix == a.q_matrix.transpose());
    CHECK(lfc::is_positive_definite(a.q_matrix));
    CHECK(lfc::symmetric_eigenvalues(a.q_matrix).front() ==
          doctest::Approx(a.lambda_min).epsilon(1e-12));
}

TEST_CASE("fixed analysis margins shrink as the decay ratio grows") {
    const auto tight = lfc::analyze_fixed(topo_a(), 3.0, 1.05);
    const auto loose = lfc::analyze_fixed(topo_a(), 3.0, 2.0);
    CHECK(loose.tau < tight.tau);
    CHECK(loose.lambda_min == doctest::Approx(tight.lambda_min).epsilon(1e-12));
}

TEST_CASE("fixed analysis yields positive margins on random admissible systems") {
    oracle::Rng rng(303);
    int tested = 0;
    while (tested < 50) {
        const auto t = oracle::random_topology(rng, rng.uniform_int(1, 5));
        if (!lfc::leader_globally_reachable(t)) continue;
        CAPTURE(tested);
        const auto c = lfc::fixed_constants(t);
        const double k = c.gate() * 1.1 + 0.1;
        const auto a = lfc::analyze_fixed(t, k, 1.05);
        REQUIRE(a.lambda_min > 0.0);
        REQUIRE(a.tau > 0.0);
        REQUIRE(lfc::is_positive_definite(a.q_matrix));
        ++tested;
    }
}

TEST_CASE("switched constants reproduce the frozen family values") {
    const auto c = lfc::switched_constants({topo_a(), topo_b()});
    CHECK(c.lambda_tilde == doctest::Approx(frozen::lambda_tilde_ab).epsilon(1e-12));
    CHECK(c.mu_tilde == doctest::Approx(frozen::mu_tilde_ab).epsilon(1e-12));
    CHECK(c.k_star == doctest::Approx(frozen::k_star_ab).epsilon(1e-12));
    CHECK(c.k_star_alt == doctest::Approx(frozen::k_star_alt_ab).epsilon(1e-12));
    CHECK(c.gate() == c.k_star);
    CHECK(c.unbalanced_members == std::vector<std::size_t>{0});
    REQUIRE(c.h_list.size() == 2);
    CHECK(c.h_list[0] == lfc::h_matrix(topo_a()));
    CHECK(c.h_list[1] == lfc::h_matrix(topo_b()));
}

TEST_CASE("the member symmetrized couplings have the frozen minimum eigenvalues") {
    const Matrix ha = lfc::h_matrix(topo_a());
    const Matrix hb = lfc::h_matrix(topo_b());
    CHECK(lfc::symmetric_eigenvalues(ha + ha.transpose()).front() ==
          doctest::Approx(frozen::sym_min_a).epsilon(1e-12));
    CHECK(lfc::symmetric_eigenvalues(hb + hb.transpose()).front() ==
          doctest::Approx(frozen::sym_min_b).epsilon(1e-12));
    CHECK(frozen::sym_min_b == doctest::Approx(3.0 - std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("switched constants reject inadmissible families") {
    CHECK_THROWS_AS(lfc::switched_constants({}), lfc::ValidationError);
    CHECK_THROWS_AS(
        lfc::switched_constants({topo_a(), {WeightedDigraph(2, {}), {1.0, 1.0}}}),
        lfc::ValidationError);
    CHECK_THROWS_AS(
        lfc::switched_constants({topo_a(), {topo_b().graph(), {1.0, 0.0, 0.0, 0.0}}}),
        lfc::AnalysisError);
    // Reachable, but the heavy one-way coupling makes H + H^T indefinite.
    const LeaderTopology lopsided(WeightedDigraph(2, {{2, 1, 8.0}}), {1.0, 0.0});
    CHECK_THROWS_AS(lfc::switched_constants({lopsided}), lfc::AnalysisError);
}

TEST_CASE("switched analysis reproduces the frozen margins at the demonstration gain") {
    const auto a = lfc::analyze_switched({topo_a(), topo_b()}, 9.0, 1.05);
    CHECK(a.k == 9.0);
    CHECK(a.lambda_min == doctest::Approx(frozen::lambda_min_ab_k9).epsilon(1e-12));
    CHECK(a.tau == doctest::Approx(frozen::tau_ab_k9).epsilon(1e-12));
    CHECK(a.norm_convention == "spectral");
    CHECK(a.unbalanced_members == std::vector<std::size_t>{0});
    REQUIRE(a.warnings.size() == 1);
    CHECK(a.warnings.front().find("not balanced") != std::string::npos);
}

TEST_CASE("switched analysis enforces its gain and decay-ratio gates") {
    CHECK_THROWS_AS(lfc::analyze_switched({topo_a(), topo_b()}, 8.0, 1.05),
                    lfc::AnalysisError);
    CHECK_THROWS_AS(lfc::analyze_switched({topo_a(), topo_b()}, 9.0, 1.0),
                    lfc::ValidationError);
}

TEST_CASE("a single-member switched family agrees with its own constants") {
    // The family {topo_b} is balanced, so there are no warnings, and its
    // lambda_min comes from the one member matrix alone.
    const auto a = lfc::analyze_switched({topo_b()}, 9.0, 1.05);
    CHECK(a.unbalanced_members.empty());
    CHECK(a.warnings.empty());
    CHECK(a.lambda_tilde == doctest::Approx(frozen::sym_min_b).epsilon(1e-12));
    CHECK(a.tau > 0.0);
}

TEST_CASE("switched margins are monotone in the decay ratio") {
    const auto tight = lfc::analyze_switched({topo_a(), topo_b()}, 9.0, 1.05);
    const auto loose = lfc::analyze_switched({topo_a(), topo_b()}, 9.0, 1.6);
    CHECK(loose.tau < tight.tau);
    CHECK(loose.lambda_min == doctest::Approx(tight.lambda_min).epsilon(1e-12));
}
