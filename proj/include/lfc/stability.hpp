#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lfc/digraph.hpp"
#include "lfc/matrix.hpp"

namespace lfc {

/// Coupling matrix H = L + diag(leader weights).
Matrix h_matrix(const LeaderTopology& t);

/// True iff every eigenvalue of h has real part > 1e-10.
bool is_positive_stable(const Matrix& h);

/// For a balanced graph: true iff H + H^T is positive definite. Requires a
/// balanced graph and cross-checks the result against leader reachability;
/// the two must agree.
bool balanced_definiteness(const LeaderTopology& t);

/// Closed-loop blocks for the error dynamics: C carries the velocity
/// feedback, E the delayed position coupling, F = C + E the undelayed limit.
struct SystemMatrices {
    Matrix c;
    Matrix e;
    Matrix f;
};

SystemMatrices system_matrices(const Matrix& h, double k);

/// Gain-independent constants of the fixed-topology analysis. Two readings
/// of the gain threshold circulate for this family of conditions; both are
/// reported and gates use the larger one.
struct FixedConstants {
    Matrix h;
    Matrix p_bar;
    double mu_bar = 0.0;
    double lambda_bar = 0.0;
    double k_star = 0.0;     // mu_bar / (2 lambda_bar) + 1
    double k_star_alt = 0.0; // mu_bar / lambda_bar + 1

    double gate() const { return k_star > k_star_alt ? k_star : k_star_alt; }
};

FixedConstants fixed_constants(const LeaderTopology& t);

struct FixedAnalysis {
    Matrix h;
    Matrix p_bar;
    double mu_bar = 0.0;
    double lambda_bar = 0.0;
    double k_star = 0.0;
    double k_star_alt = 0.0;
    double k = 0.0;
    double q = 0.0;
    Matrix q_matrix;
    double lambda_min = 0.0;
    double tau = 0.0;
    std::string norm_convention; // always "spectral"
    std::vector<std::string> warnings;
};

/// Full fixed-topology margin computation. Requires a leader reachable from
/// every follower, k above the conservative threshold, and q > 1.
FixedAnalysis analyze_fixed(const LeaderTopology& t, double k, double q);

/// Gain-independent constants of the switched analysis.
struct SwitchedConstants {
    std::vector<Matrix> h_list;
    double lambda_tilde = 0.0;
    double mu_tilde = 0.0;
    double k_star = 0.0;     // mu_tilde / (2 lambda_tilde) + 1
    double k_star_alt = 0.0; // mu_tilde / (2 lambda_tilde)
    std::vector<std::size_t> unbalanced_members;

    double gate() const { return k_star > k_star_alt ? k_star : k_star_alt; }
};

SwitchedConstants switched_constants(const std::vector<LeaderTopology>& ts);

struct SwitchedAnalysis {
    std::vector<Matrix> h_list;
    double lambda_tilde = 0.0;
    double mu_tilde = 0.0;
    double k_star = 0.0;
    double k_star_alt = 0.0;
    double k = 0.0;
    double q = 0.0;
    double lambda_min = 0.0;
    double tau = 0.0;
    std::vector<std::size_t> unbalanced_members;
    std::string norm_convention; // always "spectral"
    std::vector<std::string> warnings;
};

/// Margin computation over a family of topologies under arbitrary switching.
/// Unbalanced members are tolerated but flagged in unbalanced_members and
/// warnings; the definiteness requirement lands on lambda_tilde instead.
SwitchedAnalysis analyze_switched(const std::vector<LeaderTopology>& ts, double k, double q);

} // namespace lfc
