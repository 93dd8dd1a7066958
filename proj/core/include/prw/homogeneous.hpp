#pragma once

#include <array>
#include <optional>

#include "prw/spectral.hpp"
#include "prw/transition_matrix.hpp"

namespace prw {

/// Value of one of the four balance ratios: a finite real, +infinity, or
/// indeterminate (numerator and denominator both vanish within 1e-12).
/// Finite values are nonnegative whenever the matrix admits the balanced
/// stationary form; negative values can occur for arbitrary stochastic input
/// and never satisfy the criterion.
struct ExtendedRatio {
    enum class Kind : unsigned char { Finite, Infinite, Indeterminate };

    Kind kind = Kind::Finite;
    double value = 0.0;

    static ExtendedRatio finite(double v) { return {Kind::Finite, v}; }
    static ExtendedRatio infinite() { return {Kind::Infinite, 0.0}; }
    static ExtendedRatio indeterminate() { return {Kind::Indeterminate, 0.0}; }

    bool is_finite() const { return kind == Kind::Finite; }
    bool is_infinite() const { return kind == Kind::Infinite; }
    bool is_indeterminate() const { return kind == Kind::Indeterminate; }

    /// Builds num/den with the 0/0 and x/0 conventions.
    static ExtendedRatio of(double num, double den);
};

/// Equality of extended ratios: finite values compare with relative
/// tolerance 1e-9, +infinity equals only +infinity, indeterminate equals
/// nothing (including itself).
bool ratio_equal(const ExtendedRatio& a, const ExtendedRatio& b, double rel_tol = 1e-9);

/// The four ratio expressions of the homogeneous recurrence criterion, in
/// the order (lambda1..lambda4) = (E column, W column, N column, S column).
std::array<ExtendedRatio, 4> lambda_expressions(const TransitionMatrix& q);

/// The unique pair p1, p2 >= 0 with p1 + p2 = 1/2 and p2/p1 = lambda;
/// lambda = +infinity gives (0, 1/2). Throws IndeterminateRatioError for
/// indeterminate input and BadParameterError for negative finite values.
std::array<double, 2> p_from_lambda(const ExtendedRatio& lambda);

/// V = (pi_E - pi_W, pi_N - pi_S) for the stationary vector of q.
/// Throws NonPrimitiveError when q is not primitive.
std::array<double, 2> asymptotic_velocity(const TransitionMatrix& q);

enum class WalkClass : unsigned char { RecurrentCLT, Ballistic, Inconclusive };

struct HomogeneousVerdict {
    std::array<ExtendedRatio, 4> lambdas;
    std::optional<std::array<double, 4>> pi;       // absent when not primitive
    std::optional<std::array<double, 2>> velocity; // absent when not primitive
    WalkClass classification = WalkClass::Inconclusive;

    /// True when all four ratios are equal (tolerance 1e-9) and the common
    /// value is a nonnegative real or +infinity; false when any ratio is
    /// indeterminate.
    bool lambda_criterion = false;

    /// True when pi has the balanced form (p1, p2, p1, p2) within 1e-9.
    bool pi_criterion = false;
};

/// Full classification of a homogeneous walk. Non-primitive matrices are
/// reported Inconclusive; when any ratio is indeterminate the verdict falls
/// back to the stationary-form test alone.
HomogeneousVerdict classify_homogeneous(const TransitionMatrix& q);

const char* to_string(WalkClass c);

} // namespace prw
