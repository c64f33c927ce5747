#include "lfc/stability.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "lfc/errors.hpp"
#include "lfc/matops.hpp"

namespace lfc {

namespace {

Matrix symmetric_part(const Matrix& a) {
    Matrix s(a.rows(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.rows(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
    return s;
}

void require_q(double q) {
    if (!(q > 1.0))
        throw ValidationError("analysis: decay ratio q must exceed 1, got " + std::to_string(q));
}

} // namespace

Matrix h_matrix(const LeaderTopology& t) {
    return laplacian(t.graph()) + Matrix::diagonal(t.leader_weights());
}

bool is_positive_stable(const Matrix& h) {
    if (!h.is_square())
        throw ValidationError("is_positive_stable: matrix must be square");
    const Spectrum s = eigenvalues(h);
    for (const auto& v : s.values)
        if (v.real() <= 1e-10) return false;
    return true;
}

bool balanced_definiteness(const LeaderTopology& t) {
    if (!is_balanced(t.graph()))
        throw ValidationError("balanced_definiteness: graph is not balanced");
    const Matrix h = h_matrix(t);
    const bool definite = is_positive_definite(h + h.transpose());
    if (definite != leader_globally_reachable(t))
        throw Error("balanced_definiteness: definiteness test disagrees with reachability");
    return definite;
}

SystemMatrices system_matrices(const Matrix& h, double k) {
    if (!h.is_square())
        throw ValidationError("system_matrices: coupling matrix must be square");
    if (!(k > 0.0))
        throw ValidationError("system_matrices: velocity gain k must be positive");
    const std::size_t n = h.rows();
    const Matrix zero(n, n);
    const Matrix eye = Matrix::identity(n);
    SystemMatrices m{
        block2x2(zero, eye, zero, eye * -k),
        block2x2(zero, zero, h * -1.0, zero),
        Matrix(),
    };
    m.f = m.c + m.e;
    if ((m.e * m.e).max_abs() != 0.0)
        throw Error("system_matrices: delayed block must square to zero");
    return m;
}

FixedConstants fixed_constants(const LeaderTopology& t) {
    if (!leader_globally_reachable(t))
        throw AnalysisError("fixed analysis: leader is not globally reachable");
    FixedConstants c;
    c.h = h_matrix(t);
    c.p_bar = solve_lyapunov(c.h);
    const Matrix ph = c.p_bar * c.h;
    c.mu_bar = symmetric_eigenvalues(symmetric_part(ph * ph.transpose())).back();
    c.lambda_bar = symmetric_eigenvalues(c.p_bar).front();
    c.k_star = c.mu_bar / (2.0 * c.lambda_bar) + 1.0;
    c.k_star_alt = c.mu_bar / c.lambda_bar + 1.0;
    return c;
}

FixedAnalysis analyze_fixed(const LeaderTopology& t, double k, double q) {
    require_q(q);
    const FixedConstants c = fixed_constants(t);
    if (!(k > c.gate()))
        throw AnalysisError("fixed analysis: gain k = " + std::to_string(k) +
                            " must exceed the threshold " + std::to_string(c.gate()));

    FixedAnalysis a;
    a.h = c.h;
    a.p_bar = c.p_bar;
    a.mu_bar = c.mu_bar;
    a.lambda_bar = c.lambda_bar;
    a.k_star = c.k_star;
    a.k_star_alt = c.k_star_alt;
    a.k = k;
    a.q = q;
    a.norm_convention = "spectral";

    const std::size_t n = c.h.rows();
    const Matrix eye = Matrix::identity(n);
    const Matrix zero(n, n);
    a.q_matrix = block2x2(eye, c.h.transpose() * c.p_bar, c.p_bar * c.h,
                          c.p_bar * (2.0 * (k - 1.0)));
    if (!is_positive_definite(a.q_matrix))
        throw AnalysisError("fixed analysis: margin matrix is not positive definite at k = " +
                            std::to_string(k));
    a.lambda_min = symmetric_eigenvalues(a.q_matrix).front();

    const Matrix p = block2x2(c.p_bar * k, c.p_bar, c.p_bar, c.p_bar);
    double pivot_ratio = 0.0;
    const Matrix p_inv = invert(p, &pivot_ratio);
    if (pivot_ratio < 1e-10)
        a.warnings.push_back("storage matrix is ill conditioned (pivot ratio " +
                             std::to_string(pivot_ratio) + ")");
    const Matrix ec = block2x2(zero, zero, zero, c.h * -1.0);
    const Matrix inner = p * ec * p_inv * ec.transpose() * p;
    a.tau = a.lambda_min / (spectral_norm(inner) + q * spectral_norm(p));
    return a;
}

SwitchedConstants switched_constants(const std::vector<LeaderTopology>& ts) {
    if (ts.empty())
        throw ValidationError("switched analysis: topology family is empty");
    const int n = ts.front().graph().order();
    for (const auto& t : ts)
        if (t.graph().order() != n)
            throw ValidationError("switched analysis: member graphs must share the agent count");

    SwitchedConstants c;
    c.lambda_tilde = 0.0;
    c.mu_tilde = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        if (!leader_globally_reachable(ts[i]))
            throw AnalysisError("switched analysis: leader is not globally reachable in member " +
                                std::to_string(i));
        if (!is_balanced(ts[i].graph())) c.unbalanced_members.push_back(i);
        Matrix h = h_matrix(ts[i]);
        const double lo = symmetric_eigenvalues(h + h.transpose()).front();
        const double hi = symmetric_eigenvalues(symmetric_part(h * h.transpose())).back();
        if (i == 0 || lo < c.lambda_tilde) c.lambda_tilde = lo;
        if (i == 0 || hi > c.mu_tilde) c.mu_tilde = hi;
        c.h_list.push_back(std::move(h));
    }
    if (!(c.lambda_tilde > 0.0))
        throw AnalysisError("switched analysis: some symmetrized coupling matrix is not positive "
                            "definite (min eigenvalue " +
                            std::to_string(c.lambda_tilde) + ")");
    c.k_star = c.mu_tilde / (2.0 * c.lambda_tilde) + 1.0;
    c.k_star_alt = c.mu_tilde / (2.0 * c.lambda_tilde);
    return c;
}

SwitchedAnalysis analyze_switched(const std::vector<LeaderTopology>& ts, double k, double q) {
    require_q(q);
    const SwitchedConstants c = switched_constants(ts);
    if (!(k > c.gate()))
        throw AnalysisError("switched analysis: gain k = " + std::to_string(k) +
                            " must exceed the threshold " + std::to_string(c.gate()));

    SwitchedAnalysis a;
    a.h_list = c.h_list;
    a.lambda_tilde = c.lambda_tilde;
    a.mu_tilde = c.mu_tilde;
    a.k_star = c.k_star;
    a.k_star_alt = c.k_star_alt;
    a.k = k;
    a.q = q;
    a.unbalanced_members = c.unbalanced_members;
    a.norm_convention = "spectral";
    for (std::size_t i : c.unbalanced_members)
        a.warnings.push_back("member graph " + std::to_string(i) +
                             " is not balanced; margins still apply when every symmetrized "
                             "coupling matrix stays positive definite");

    const std::size_t n = a.h_list.front().rows();
    const Matrix eye = Matrix::identity(n);
    bool first = true;
    for (const Matrix& h : a.h_list) {
        const Matrix qs = block2x2(h.transpose() + h, h.transpose(), h,
                                   eye * (2.0 * (k - 1.0)));
        const double lo = symmetric_eigenvalues(qs).front();
        if (first || lo < a.lambda_min) a.lambda_min = lo;
        first = false;
    }
    if (!(a.lambda_min > 0.0))
        throw AnalysisError("switched analysis: margin matrix is not positive definite at k = " +
                            std::to_string(k));

    const double denom = (2.0 * k / (k - 1.0)) * a.mu_tilde +
                         0.5 * q * (k + 1.0 + std::sqrt((k - 1.0) * (k - 1.0) + 4.0));
    a.tau = a.lambda_min / denom;
    return a;
}

} // namespace lfc
