#include "prw/transition_matrix.hpp"

#include <cmath>
#include <string>

#include "prw/errors.hpp"

namespace prw {

namespace {

std::array<double, 16> validate_and_normalize(std::array<double, 16> e) {
    for (int i = 0; i < 4; ++i) {
        double sum = 0.0;
        for (int j = 0; j < 4; ++j) {
            double v = e[i * 4 + j];
            if (v < -TransitionMatrix::kEntryDustTolerance || !std::isfinite(v))
                throw BadParameterError("transition matrix entry (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") is negative or non-finite");
            if (v < 0.0) e[i * 4 + j] = v = 0.0;
            sum += v;
        }
        if (std::abs(sum - 1.0) > TransitionMatrix::kRowSumTolerance)
            throw BadParameterError("transition matrix row " + std::to_string(i) +
                                    " sums to " + std::to_string(sum) + ", not 1");
        for (int j = 0; j < 4; ++j) e[i * 4 + j] /= sum;
    }
    return e;
}

} // namespace

TransitionMatrix TransitionMatrix::from_entries(const std::array<double, 16>& entries) {
    TransitionMatrix m;
    m.e_ = validate_and_normalize(entries);
    return m;
}

TransitionMatrix TransitionMatrix::from_rows(const std::array<std::array<double, 4>, 4>& rows) {
    std::array<double, 16> e;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) e[i * 4 + j] = rows[i][j];
    return from_entries(e);
}

TransitionMatrix TransitionMatrix::standard_walk() {
    std::array<double, 16> e;
    e.fill(0.25);
    TransitionMatrix m;
    m.e_ = e;
    return m;
}

TransitionMatrix TransitionMatrix::rank_one(const std::array<double, 4>& row) {
    return from_rows({row, row, row, row});
}

TransitionMatrix TransitionMatrix::from_relative(const std::array<double, 4>& rel) {
    std::array<double, 16> e{};
    for (Direction in : all_directions)
        for (RelativeMove m : all_relative_moves) {
            Direction out = relative_to_absolute(in, m);
            e[static_cast<std::size_t>(in) * 4 + static_cast<std::size_t>(out)] =
                rel[static_cast<std::size_t>(m)];
        }
    return from_entries(e);
}

TransitionMatrix TransitionMatrix::transpose() const {
    TransitionMatrix t;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) t.e_[j * 4 + i] = e_[i * 4 + j];
    return t;
}

TransitionMatrix TransitionMatrix::multiply(const TransitionMatrix& o) const {
    TransitionMatrix r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            double s = 0.0;
            for (int k = 0; k < 4; ++k) s += e_[i * 4 + k] * o.e_[k * 4 + j];
            r.e_[i * 4 + j] = s;
        }
    return r;
}

bool is_isotropic(const TransitionMatrix& q, double tol) {
    for (int j = 0; j < 4; ++j)
        if (std::abs(q.column_sum(j) - 1.0) > tol) return false;
    return true;
}

bool is_doubly_stochastic(const TransitionMatrix& q, double tol) { return is_isotropic(q, tol); }

bool is_elliptic(const TransitionMatrix& q, double eps) {
    if (!(eps > 0.0)) throw BadParameterError("ellipticity bound must be positive");
    for (double v : q.entries())
        if (v < eps) return false;
    return true;
}

bool direction_from_letter(char c, Direction& out) {
    switch (c) {
    case 'E': case 'e': out = Direction::E; return true;
    case 'N': case 'n': out = Direction::N; return true;
    case 'W': case 'w': out = Direction::W; return true;
    case 'S': case 's': out = Direction::S; return true;
    default: return false;
    }
}

std::string to_string(const Site& s) {
    return "(" + std::to_string(s.x1) + "," + std::to_string(s.x2) + ")";
}

} // namespace prw
