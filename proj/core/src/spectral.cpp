#include "prw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "prw/errors.hpp"

namespace prw {

namespace {

using Bool4x4 = std::array<std::uint16_t, 16>;

Bool4x4 support_of(const TransitionMatrix& q) {
    Bool4x4 s{};
    for (int i = 0; i < 16; ++i) s[i] = q.entries()[i] > 0.0 ? 1 : 0;
    return s;
}

Bool4x4 bool_multiply(const Bool4x4& a, const Bool4x4& b) {
    Bool4x4 r{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            std::uint16_t v = 0;
            for (int k = 0; k < 4; ++k) v |= static_cast<std::uint16_t>(a[i * 4 + k] & b[k * 4 + j]);
            r[i * 4 + j] = v;
        }
    return r;
}

bool all_positive(const Bool4x4& s) {
    for (auto v : s)
        if (!v) return false;
    return true;
}

std::array<double, 16> to_array(const TransitionMatrix& m) { return m.entries(); }

} // namespace

bool is_primitive(const TransitionMatrix& q) {
    Bool4x4 s = support_of(q);
    Bool4x4 p = s;
    for (int k = 1; k <= 10; ++k) {
        if (all_positive(p)) return true;
        p = bool_multiply(p, s);
    }
    return false;
}

std::array<double, 4> stationary_vector(const TransitionMatrix& q) {
    if (!is_primitive(q)) throw NonPrimitiveError("stationary vector needs a primitive matrix");

    TransitionMatrix p = q;
    for (int m = 0; m < 64; ++m) {
        double spread = 0.0;
        for (int j = 0; j < 4; ++j)
            for (int i = 1; i < 4; ++i) spread = std::max(spread, std::abs(p(i, j) - p(0, j)));
        if (spread < 1e-15) break;
        p = p.multiply(p);
    }

    std::array<double, 4> pi{};
    double total = 0.0;
    for (int j = 0; j < 4; ++j) {
        double c = 0.0;
        for (int i = 0; i < 4; ++i) c += p(i, j);
        pi[j] = c / 4.0;
        total += pi[j];
    }
    for (auto& v : pi) v /= total;

    double residual = 0.0;
    for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int i = 0; i < 4; ++i) s += pi[i] * q(i, j);
        residual = std::max(residual, std::abs(s - pi[j]));
    }
    if (residual > 1e-10)
        throw Error("stationary vector did not converge (residual " + std::to_string(residual) + ")");
    return pi;
}

double symmetric_eigen_max(const std::array<double, 16>& sym) {
    std::array<double, 16> a = sym;
    // Cyclic Jacobi; 4x4 symmetric converges to machine precision in a few sweeps.
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < 4; ++i)
            for (int j = i + 1; j < 4; ++j) off += a[i * 4 + j] * a[i * 4 + j];
        if (off < 1e-30) break;
        for (int p = 0; p < 4; ++p)
            for (int qi = p + 1; qi < 4; ++qi) {
                double apq = a[p * 4 + qi];
                if (apq == 0.0) continue;
                double app = a[p * 4 + p], aqq = a[qi * 4 + qi];
                double theta = 0.5 * (aqq - app) / apq;
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < 4; ++k) {
                    double akp = a[k * 4 + p], akq = a[k * 4 + qi];
                    a[k * 4 + p] = c * akp - s * akq;
                    a[k * 4 + qi] = s * akp + c * akq;
                }
                for (int k = 0; k < 4; ++k) {
                    double apk = a[p * 4 + k], aqk = a[qi * 4 + k];
                    a[p * 4 + k] = c * apk - s * aqk;
                    a[qi * 4 + k] = s * apk + c * aqk;
                }
            }
    }
    return std::max({a[0], a[5], a[10], a[15]});
}

double spectral_radius_by_squaring(const std::array<double, 16>& a0) {
    auto frob = [](const std::array<double, 16>& m) {
        double s = 0.0;
        for (double v : m) s += v * v;
        return std::sqrt(s);
    };
    auto mul = [](const std::array<double, 16>& x, const std::array<double, 16>& y) {
        std::array<double, 16> r{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) {
                double s = 0.0;
                for (int k = 0; k < 4; ++k) s += x[i * 4 + k] * y[k * 4 + j];
                r[i * 4 + j] = s;
            }
        return r;
    };

    double s0 = frob(a0);
    if (s0 == 0.0) return 0.0;
    std::array<double, 16> a = a0;
    for (auto& v : a) v /= s0;

    // log rho = log s0 + sum_k 2^-(k+1) log ||A_k^2||_F with A_{k+1} the
    // normalized square; truncation after 48 terms is below 1e-13.
    double log_rho = std::log(s0);
    double weight = 0.5;
    for (int k = 0; k < 48; ++k) {
        a = mul(a, a);
        double r = frob(a);
        if (r == 0.0) return 0.0;
        for (auto& v : a) v /= r;
        log_rho += weight * std::log(r);
        weight *= 0.5;
    }
    return std::exp(log_rho);
}

double deviation_norm(const TransitionMatrix& q) {
    if (!is_doubly_stochastic(q))
        throw NotDoublyStochasticError("deviation norm requires a doubly stochastic matrix");

    // q^T q - W is symmetric PSD with the all-ones eigenvector annihilated,
    // so its largest eigenvalue is exactly ||q restricted to E-perp||^2.
    TransitionMatrix g = q.transpose().multiply(q);
    std::array<double, 16> a = to_array(g);
    for (auto& v : a) v -= 0.25;

    double lam = symmetric_eigen_max(a);
    double rho = spectral_radius_by_squaring(a);
    if (std::abs(lam - rho) > 1e-12)
        throw Error("spectral cross-check failed: Jacobi " + std::to_string(lam) +
                    " vs power " + std::to_string(rho));

    lam = std::clamp(lam, 0.0, 1.0);
    return std::sqrt(lam);
}

bool toth_condition(const TransitionMatrix& q, double eps) {
    if (!(eps > 0.0) || !(eps < 1.0))
        throw BadParameterError("toth_condition needs eps in (0,1)");
    if (!is_doubly_stochastic(q)) return false;
    return deviation_norm(q) <= 1.0 - eps;
}

SufficientConditions remark_sufficient_conditions(const TransitionMatrix& q) {
    if (!is_doubly_stochastic(q))
        throw NotDoublyStochasticError("remark conditions assume a doubly stochastic matrix");

    SufficientConditions r;

    r.no_column_two_zeros = true;
    for (int j = 0; j < 4; ++j) {
        int zeros = 0;
        for (int i = 0; i < 4; ++i)
            if (q(i, j) == 0.0) ++zeros;
        if (zeros > 1) r.no_column_two_zeros = false;
    }

    bool primitive = is_primitive(q);

    TransitionMatrix qtq = q.transpose().multiply(q);
    TransitionMatrix qqt = q.multiply(q.transpose());
    bool normal = true;
    for (int i = 0; i < 16; ++i)
        if (std::abs(qtq.entries()[i] - qqt.entries()[i]) > 1e-12) normal = false;
    r.primitive_and_normal = primitive && normal;

    bool diag_positive = q(0, 0) > 0.0 && q(1, 1) > 0.0 && q(2, 2) > 0.0 && q(3, 3) > 0.0;
    r.primitive_positive_diagonal = primitive && diag_positive;

    return r;
}

} // namespace prw
