#pragma once

#include <array>

#include "prw/transition_matrix.hpp"

namespace prw {

/// True iff the boolean support matrix S of q has S^k all-positive for some
/// k <= 10 (the Wielandt bound for 4x4); equivalent to irreducible and
/// aperiodic. Pure integer/boolean arithmetic, no float thresholds beyond
/// "entry > 0".
bool is_primitive(const TransitionMatrix& q);

/// Unique stationary row vector pi with pi q = pi, computed by repeated
/// squaring of q (rows of q^(2^m) converge to pi for primitive q). The
/// residual ||pi q - pi||_inf is checked against 1e-10.
/// Throws NonPrimitiveError when is_primitive(q) is false.
std::array<double, 4> stationary_vector(const TransitionMatrix& q);

/// ||q - W|| for doubly stochastic q, the operator norm of q restricted to
/// the orthogonal complement of (1,1,1,1). Equals sqrt(rho(q^T q - W)),
/// computed with a Jacobi symmetric eigensolve and cross-checked against a
/// matrix-power iteration; lies in [0,1] and is < 1 iff q^T q is primitive.
/// Throws NotDoublyStochasticError unless q and q^T are both stochastic.
double deviation_norm(const TransitionMatrix& q);

/// ||q - W|| <= 1 - eps with eps in (0,1); false whenever q is not doubly
/// stochastic. Never throws on the matrix argument so environment audits can
/// grade arbitrary sites.
bool toth_condition(const TransitionMatrix& q, double eps);

/// The three sufficient conditions of the deviation-norm remark, each of
/// which forces ||q - W|| < 1:
///   1. no column of q contains more than one zero entry;
///   2. q is irreducible, aperiodic and normal (q^T q == q q^T; the usual
///      notion of a normal matrix);
///   3. q is irreducible, aperiodic and has positive diagonal entries.
struct SufficientConditions {
    bool no_column_two_zeros = false;
    bool primitive_and_normal = false;
    bool primitive_positive_diagonal = false;

    bool any() const {
        return no_column_two_zeros || primitive_and_normal || primitive_positive_diagonal;
    }
};

/// Requires q doubly stochastic (NotDoublyStochasticError otherwise).
SufficientConditions remark_sufficient_conditions(const TransitionMatrix& q);

/// Largest eigenvalue of a symmetric 4x4 matrix by cyclic Jacobi rotations.
double symmetric_eigen_max(const std::array<double, 16>& sym);

/// Spectral radius of a (symmetric PSD) 4x4 matrix by Frobenius-normalized
/// repeated squaring; the power-iteration cross-check for deviation_norm.
double spectral_radius_by_squaring(const std::array<double, 16>& a);

} // namespace prw
