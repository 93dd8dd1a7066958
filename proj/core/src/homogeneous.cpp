#include "prw/homogeneous.hpp"

#include <cmath>

#include "prw/errors.hpp"

namespace prw {

namespace {
constexpr double kVanishTol = 1e-12;
constexpr double kBalanceTol = 1e-9;
} // namespace

ExtendedRatio ExtendedRatio::of(double num, double den) {
    bool num_zero = std::abs(num) < kVanishTol;
    bool den_zero = std::abs(den) < kVanishTol;
    if (num_zero && den_zero) return indeterminate();
    if (den_zero) return infinite();
    return finite(num / den);
}

bool ratio_equal(const ExtendedRatio& a, const ExtendedRatio& b, double rel_tol) {
    if (a.is_indeterminate() || b.is_indeterminate()) return false;
    if (a.is_infinite() || b.is_infinite()) return a.is_infinite() && b.is_infinite();
    double scale = std::max({1.0, std::abs(a.value), std::abs(b.value)});
    return std::abs(a.value - b.value) <= rel_tol * scale;
}

std::array<ExtendedRatio, 4> lambda_expressions(const TransitionMatrix& q) {
    const auto E = Direction::E, N = Direction::N, W = Direction::W, S = Direction::S;
    return {
        ExtendedRatio::of(1.0 - q(E, E) - q(W, E), q(N, E) + q(S, E)),
        ExtendedRatio::of(1.0 - q(E, W) - q(W, W), q(N, W) + q(S, W)),
        ExtendedRatio::of(q(E, N) + q(W, N), 1.0 - q(N, N) - q(S, N)),
        ExtendedRatio::of(q(E, S) + q(W, S), 1.0 - q(N, S) - q(S, S)),
    };
}

std::array<double, 2> p_from_lambda(const ExtendedRatio& lambda) {
    if (lambda.is_indeterminate())
        throw IndeterminateRatioError("cannot derive (p1,p2) from an indeterminate ratio");
    if (lambda.is_infinite()) return {0.0, 0.5};
    if (lambda.value < 0.0)
        throw BadParameterError("no nonnegative (p1,p2) pair exists for a negative ratio");
    double p1 = 0.5 / (1.0 + lambda.value);
    return {p1, 0.5 - p1};
}

std::array<double, 2> asymptotic_velocity(const TransitionMatrix& q) {
    auto pi = stationary_vector(q);
    return {pi[0] - pi[2], pi[1] - pi[3]};
}

HomogeneousVerdict classify_homogeneous(const TransitionMatrix& q) {
    HomogeneousVerdict v;
    v.lambdas = lambda_expressions(q);

    bool any_indeterminate = false;
    for (const auto& l : v.lambdas)
        if (l.is_indeterminate()) any_indeterminate = true;

    if (!any_indeterminate) {
        bool equal = ratio_equal(v.lambdas[0], v.lambdas[1]) &&
                     ratio_equal(v.lambdas[0], v.lambdas[2]) &&
                     ratio_equal(v.lambdas[0], v.lambdas[3]);
        bool in_range = v.lambdas[0].is_infinite() || v.lambdas[0].value >= -kVanishTol;
        v.lambda_criterion = equal && in_range;
    }

    if (!is_primitive(q)) {
        v.classification = WalkClass::Inconclusive;
        return v;
    }

    auto pi = stationary_vector(q);
    v.pi = pi;
    v.velocity = {{pi[0] - pi[2], pi[1] - pi[3]}};
    v.pi_criterion =
        std::abs(pi[0] - pi[2]) <= kBalanceTol && std::abs(pi[1] - pi[3]) <= kBalanceTol;

    v.classification = v.pi_criterion ? WalkClass::RecurrentCLT : WalkClass::Ballistic;
    return v;
}

const char* to_string(WalkClass c) {
    switch (c) {
    case WalkClass::RecurrentCLT: return "RecurrentCLT";
    case WalkClass::Ballistic: return "Ballistic";
    default: return "Inconclusive";
    }
}

} // namespace prw
