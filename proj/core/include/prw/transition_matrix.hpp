#pragma once

#include <array>
#include <cstddef>

#include "prw/directions.hpp"

namespace prw {

/// 4x4 row-stochastic matrix over the direction alphabet, row = incoming
/// direction, column = outgoing direction, both in (E,N,W,S) order.
///
/// Construction validates stochasticity: entries must be >= -1e-12 (tiny
/// negative float dust is clamped to zero) and every row sum must lie within
/// 1e-9 of one; accepted rows are renormalized to sum exactly to their
/// floating-point best. Anything worse throws BadParameterError.
class TransitionMatrix {
  public:
    static constexpr double kRowSumTolerance = 1e-9;
    static constexpr double kEntryDustTolerance = 1e-12;

    TransitionMatrix() : e_{} {}

    /// Validating constructor from row-major entries.
    static TransitionMatrix from_entries(const std::array<double, 16>& entries);

    /// Validating constructor from four rows.
    static TransitionMatrix from_rows(const std::array<std::array<double, 4>, 4>& rows);

    /// All entries 1/4 (the standard walk matrix W).
    static TransitionMatrix standard_walk();

    /// Matrix whose four rows all equal `row`.
    static TransitionMatrix rank_one(const std::array<double, 4>& row);

    /// Builds a matrix from per-incoming-direction probabilities of the four
    /// relative moves; rel[m] applies to every incoming direction.
    static TransitionMatrix from_relative(const std::array<double, 4>& rel_rfl_b);

    double operator()(Direction in, Direction out) const {
        return e_[static_cast<std::size_t>(in) * 4 + static_cast<std::size_t>(out)];
    }
    double operator()(int in, int out) const {
        return e_[static_cast<std::size_t>(in) * 4 + static_cast<std::size_t>(out)];
    }

    const std::array<double, 16>& entries() const { return e_; }

    std::array<double, 4> row(Direction in) const {
        auto i = static_cast<std::size_t>(in) * 4;
        return {e_[i], e_[i + 1], e_[i + 2], e_[i + 3]};
    }

    double row_sum(int i) const { return e_[i * 4] + e_[i * 4 + 1] + e_[i * 4 + 2] + e_[i * 4 + 3]; }
    double column_sum(int j) const { return e_[j] + e_[4 + j] + e_[8 + j] + e_[12 + j]; }

    TransitionMatrix transpose() const;

    /// Plain matrix product (result is not revalidated; products of
    /// stochastic matrices are stochastic up to float dust).
    TransitionMatrix multiply(const TransitionMatrix& o) const;

    friend bool operator==(const TransitionMatrix&, const TransitionMatrix&) = default;

  private:
    std::array<double, 16> e_;
};

/// True iff every column also sums to one within 1e-9 (doubly stochastic).
bool is_isotropic(const TransitionMatrix& q, double tol = 1e-9);

/// Alias for is_isotropic with the matrix-side terminology.
bool is_doubly_stochastic(const TransitionMatrix& q, double tol = 1e-9);

/// True iff every entry is >= eps. Requires eps > 0.
bool is_elliptic(const TransitionMatrix& q, double eps);

} // namespace prw
