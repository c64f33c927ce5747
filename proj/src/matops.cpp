#include "lfc/matops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lfc/errors.hpp"

namespace lfc {

namespace {

double sign_with(double magnitude, double sign_of) {
    return sign_of >= 0.0 ? std::abs(magnitude) : -std::abs(magnitude);
}

struct LuFactors {
    Matrix lu;
    std::vector<std::size_t> perm;
    double min_pivot = 0.0;
    double max_pivot = 0.0;
};

LuFactors lu_factor(const Matrix& a) {
    if (!a.is_square())
        throw ValidationError("lu_factor: matrix must be square");
    const std::size_t n = a.rows();
    LuFactors f{a, std::vector<std::size_t>(n), 0.0, 0.0};
    const double tol = 1e-12 * std::max(1.0, a.max_abs());
    f.min_pivot = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(f.lu(i, k)) > std::abs(f.lu(p, k))) p = i;
        const double pivot = std::abs(f.lu(p, k));
        if (pivot <= tol)
            throw SingularMatrixError("solve_linear: pivot " + std::to_string(pivot) +
                                      " underflows at column " + std::to_string(k));
        f.perm[k] = p;
        if (p != k)
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
        f.min_pivot = std::min(f.min_pivot, pivot);
        f.max_pivot = std::max(f.max_pivot, pivot);
        for (std::size_t i = k + 1; i < n; ++i) {
            const double m = f.lu(i, k) / f.lu(k, k);
            f.lu(i, k) = m;
            if (m == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

Vector lu_solve(const LuFactors& f, Vector b) {
    const std::size_t n = f.lu.rows();
    for (std::size_t k = 0; k < n; ++k)
        if (f.perm[k] != k) std::swap(b[k], b[f.perm[k]]);
    for (std::size_t i = 1; i < n; ++i) {
        double s = b[i];
        for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * b[j];
        b[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) s -= f.lu(i, j) * b[j];
        b[i] = s / f.lu(i, i);
    }
    return b;
}

// Householder similarity reduction to upper Hessenberg form, in place.
void to_hessenberg(Matrix& a) {
    const std::size_t n = a.rows();
    if (n < 3) return;
    std::vector<double> u(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double scale = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) scale = std::max(scale, std::abs(a(i, k)));
        if (scale == 0.0) continue;
        double norm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            u[i] = a(i, k) / scale;
            norm2 += u[i] * u[i];
        }
        double alpha = -sign_with(std::sqrt(norm2), u[k + 1]);
        u[k + 1] -= alpha;
        double unorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) unorm2 += u[i] * u[i];
        if (unorm2 == 0.0) continue;
        const double beta = 2.0 / unorm2;
        // Left: rows k+1..n-1, columns k..n-1.
        for (std::size_t j = k; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = k + 1; i < n; ++i) s += u[i] * a(i, j);
            s *= beta;
            for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * u[i];
        }
        // Right: all rows, columns k+1..n-1.
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = k + 1; j < n; ++j) s += u[j] * a(i, j);
            s *= beta;
            for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * u[j];
        }
        a(k + 1, k) = scale * alpha;
        for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

// Francis double-shift QR on an upper Hessenberg matrix; eigenvalues only.
std::vector<std::complex<double>> hessenberg_qr(Matrix h, long max_sweeps) {
    const int n = static_cast<int>(h.rows());
    std::vector<std::complex<double>> out(n);
    const double eps = std::numeric_limits<double>::epsilon();

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(h(i, j));
    if (anorm == 0.0) return out;

    long sweeps = 0;
    int nn = n - 1;
    double t = 0.0;
    while (nn >= 0) {
        int its = 0;
        int l = 0;
        do {
            for (l = nn; l >= 1; --l) {
                double s = std::abs(h(l - 1, l - 1)) + std::abs(h(l, l));
                if (s == 0.0) s = anorm;
                if (std::abs(h(l, l - 1)) <= eps * s) {
                    h(l, l - 1) = 0.0;
                    break;
                }
            }
            if (l < 0) l = 0;
            double x = h(nn, nn);
            if (l == nn) {
                out[nn--] = {x + t, 0.0};
            } else {
                double y = h(nn - 1, nn - 1);
                double w = h(nn, nn - 1) * h(nn - 1, nn);
                if (l == nn - 1) {
                    double p = 0.5 * (y - x);
                    double q = p * p + w;
                    double z = std::sqrt(std::abs(q));
                    x += t;
                    if (q >= 0.0) {
                        z = p + sign_with(z, p);
                        out[nn - 1] = {x + z, 0.0};
                        out[nn] = {z != 0.0 ? x - w / z : x + z, 0.0};
                    } else {
                        out[nn - 1] = {x + p, -z};
                        out[nn] = {x + p, z};
                    }
                    nn -= 2;
                } else {
                    if (++sweeps > max_sweeps)
                        throw ConvergenceError("eigenvalues: QR iteration cap of " +
                                               std::to_string(max_sweeps) + " sweeps exceeded");
                    if (its > 0 && its % 10 == 0) {
                        // Exceptional shift to break limit cycles.
                        t += x;
                        for (int i = 0; i <= nn; ++i) h(i, i) -= x;
                        double s = std::abs(h(nn, nn - 1)) + std::abs(h(nn - 1, nn - 2));
                        y = x = 0.75 * s;
                        w = -0.4375 * s * s;
                    }
                    ++its;
                    double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
                    int m;
                    for (m = nn - 2; m >= l; --m) {
                        z = h(m, m);
                        const double dr = x - z;
                        const double ds = y - z;
                        p = (dr * ds - w) / h(m + 1, m) + h(m, m + 1);
                        q = h(m + 1, m + 1) - z - dr - ds;
                        r = h(m + 2, m + 1);
                        const double sc = std::abs(p) + std::abs(q) + std::abs(r);
                        p /= sc;
                        q /= sc;
                        r /= sc;
                        if (m == l) break;
                        const double u = std::abs(h(m, m - 1)) * (std::abs(q) + std::abs(r));
                        const double v = std::abs(p) * (std::abs(h(m - 1, m - 1)) + std::abs(z) +
                                                        std::abs(h(m + 1, m + 1)));
                        if (u <= eps * v) break;
                    }
                    for (int i = m + 2; i <= nn; ++i) h(i, i - 2) = 0.0;
                    for (int i = m + 3; i <= nn; ++i) h(i, i - 3) = 0.0;
                    for (int k = m; k <= nn - 1; ++k) {
                        if (k != m) {
                            p = h(k, k - 1);
                            q = h(k + 1, k - 1);
                            r = k != nn - 1 ? h(k + 2, k - 1) : 0.0;
                            x = std::abs(p) + std::abs(q) + std::abs(r);
                            if (x != 0.0) {
                                p /= x;
                                q /= x;
                                r /= x;
                            }
                        }
                        double s = sign_with(std::sqrt(p * p + q * q + r * r), p);
                        if (s == 0.0) continue;
                        if (k == m) {
                            if (l != m) h(k, k - 1) = -h(k, k - 1);
                        } else {
                            h(k, k - 1) = -s * x;
                        }
                        p += s;
                        x = p / s;
                        y = q / s;
                        z = r / s;
                        q /= p;
                        r /= p;
                        for (int j = k; j <= nn; ++j) {
                            p = h(k, j) + q * h(k + 1, j);
                            if (k != nn - 1) {
                                p += r * h(k + 2, j);
                                h(k + 2, j) -= p * z;
                            }
                            h(k + 1, j) -= p * y;
                            h(k, j) -= p * x;
                        }
                        const int mmin = std::min(nn, k + 3);
                        for (int i = l; i <= mmin; ++i) {
                            p = x * h(i, k) + y * h(i, k + 1);
                            if (k != nn - 1) {
                                p += z * h(i, k + 2);
                                h(i, k + 2) -= p * r;
                            }
                            h(i, k + 1) -= p * q;
                            h(i, k) -= p;
                        }
                    }
                }
            }
        } while (l < nn - 1);
    }
    return out;
}

Matrix exact_symmetric_part(const Matrix& a) {
    Matrix s(a.rows(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.rows(); ++j) s(i, j) = 0.5 * (a(i, j) + a(j, i));
    return s;
}

void require_symmetric(const Matrix& a, const char* who) {
    if (!a.is_square())
        throw ValidationError(std::string(who) + ": matrix must be square");
    const double tol = 1e-10 * std::max(1.0, a.max_abs());
    if (!is_symmetric(a, tol))
        throw NotSymmetricError(std::string(who) + ": input is not symmetric within tolerance");
}

} // namespace

std::size_t Spectrum::zero_multiplicity() const {
    std::size_t count = 0;
    for (const auto& v : values)
        if (std::abs(v) <= tolerance) ++count;
    return count;
}

Vector solve_linear(const Matrix& a, const Vector& b) {
    if (a.rows() != b.size())
        throw ValidationError("solve_linear: dimension mismatch");
    return lu_solve(lu_factor(a), b);
}

Matrix solve_matrix(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows())
        throw ValidationError("solve_matrix: dimension mismatch");
    const LuFactors f = lu_factor(a);
    Matrix x(b.rows(), b.cols());
    Vector col(b.rows());
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        Vector sol = lu_solve(f, col);
        for (std::size_t i = 0; i < b.rows(); ++i) x(i, j) = sol[i];
    }
    return x;
}

Matrix invert(const Matrix& a, double* pivot_ratio) {
    const LuFactors f = lu_factor(a);
    if (pivot_ratio) *pivot_ratio = f.max_pivot > 0.0 ? f.min_pivot / f.max_pivot : 0.0;
    Matrix x(a.rows(), a.cols());
    Vector col(a.rows(), 0.0);
    for (std::size_t j = 0; j < a.cols(); ++j) {
        col.assign(a.rows(), 0.0);
        col[j] = 1.0;
        Vector sol = lu_solve(f, col);
        for (std::size_t i = 0; i < a.rows(); ++i) x(i, j) = sol[i];
    }
    return x;
}

Spectrum eigenvalues(const Matrix& a) {
    if (!a.is_square())
        throw ValidationError("eigenvalues: matrix must be square");
    if (a.rows() > 50)
        throw ValidationError("eigenvalues: dimension " + std::to_string(a.rows()) +
                              " exceeds the supported limit of 50");
    Spectrum s;
    s.tolerance = 1e-8 * a.max_abs();
    if (a.rows() == 0) return s;
    Matrix work = a;
    to_hessenberg(work);
    s.values = hessenberg_qr(std::move(work), 100L * static_cast<long>(a.rows()));
    return s;
}

std::vector<double> symmetric_eigenvalues(const Matrix& a) {
    require_symmetric(a, "symmetric_eigenvalues");
    const std::size_t n = a.rows();
    Matrix w = exact_symmetric_part(a);

    double frob2 = 0.0;
    for (double v : w.data()) frob2 += v * v;
    const double stop = frob2 * 1e-28 + 1e-300;

    const int max_sweeps = 100;
    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        double off2 = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off2 += 2.0 * w(i, j) * w(i, j);
        if (off2 <= stop) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (apq == 0.0) continue;
                const double theta = (w(q, q) - w(p, p)) / (2.0 * apq);
                const double tval =
                    sign_with(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(tval * tval + 1.0);
                const double svals = tval * c;
                const double tau = svals / (1.0 + c);
                const double app = w(p, p), aqq = w(q, q);
                w(p, p) = app - tval * apq;
                w(q, q) = aqq + tval * apq;
                w(p, q) = w(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    const double akp = w(k, p), akq = w(k, q);
                    w(k, p) = akp - svals * (akq + tau * akp);
                    w(k, q) = akq + svals * (akp - tau * akq);
                    w(p, k) = w(k, p);
                    w(q, k) = w(k, q);
                }
            }
        }
    }
    if (sweep == max_sweeps)
        throw ConvergenceError("symmetric_eigenvalues: Jacobi sweeps did not converge");

    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = w(i, i);
    std::sort(out.begin(), out.end());
    return out;
}

bool is_positive_definite(const Matrix& a) {
    require_symmetric(a, "is_positive_definite");
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 1e-12)) return false;
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return true;
}

double spectral_norm(const Matrix& a) {
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    const Matrix b = a.rows() >= a.cols() ? a.transpose() * a : a * a.transpose();
    const auto eigs = symmetric_eigenvalues(exact_symmetric_part(b));
    return std::sqrt(std::max(0.0, eigs.back()));
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double aij = a(i, j);
            if (aij == 0.0) continue;
            for (std::size_t p = 0; p < b.rows(); ++p)
                for (std::size_t q = 0; q < b.cols(); ++q)
                    out(i * b.rows() + p, j * b.cols() + q) = aij * b(p, q);
        }
    return out;
}

Matrix solve_lyapunov(const Matrix& h) {
    if (!h.is_square())
        throw ValidationError("solve_lyapunov: matrix must be square");
    const std::size_t n = h.rows();

    const Spectrum s = eigenvalues(h);
    for (const auto& v : s.values)
        if (v.real() <= 1e-10)
            throw NotPositiveStableError(
                "solve_lyapunov: eigenvalue with real part " + std::to_string(v.real()) +
                " makes the coupling matrix not positive stable");

    const Matrix ht = h.transpose();
    const Matrix eye = Matrix::identity(n);
    const Matrix system = kron(ht, eye) + kron(eye, ht);

    // Column-stacked vec of the identity.
    Vector rhs(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) rhs[i + n * i] = 1.0;
    const Vector x = solve_linear(system, rhs);

    Matrix p(n, n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) p(i, j) = x[i + n * j];
    p = exact_symmetric_part(p);

    const Matrix residual = p * h + ht * p - eye;
    if (residual.max_abs() > 1e-8)
        throw ConvergenceError("solve_lyapunov: residual " + std::to_string(residual.max_abs()) +
                               " exceeds 1e-8");
    return p;
}

} // namespace lfc
