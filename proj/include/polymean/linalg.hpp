/**
 * Exact rank, affine dimension, null spaces and square solves.
 */

#ifndef POLYMEAN_LINALG_HPP
#define POLYMEAN_LINALG_HPP

#include <optional>
#include <vector>

#include "polymean/rational.hpp"

namespace polymean {

/** Rank by fraction-free (Bareiss) elimination on integer-scaled rows. */
std::size_t rank(const RationalMatrix& m);

/** Rank of the matrix whose rows are the given vectors. */
std::size_t rank(const std::vector<Vector>& rows);

/**
 * dim aff{points} = rank of the differences p_i - p_0.
 * Throws std::invalid_argument("empty point set") on empty input.
 */
std::size_t affine_dim(const std::vector<Vector>& points);

/** Basis of {v : M v = 0}, one vector per free column of the RREF of M. */
std::vector<Vector> kernel_basis(const RationalMatrix& m);

/** Unique solution of the square system M x = rhs, or nullopt if M is singular. */
std::optional<Vector> solve_square(const RationalMatrix& m, std::span<const Rational> rhs);

/**
 * Incrementally maintained row-echelon basis of a subspace of Q^dim.
 * Used where many small rank updates are needed (face-tuple searches).
 */
class EchelonBasis
{
    public:
        explicit EchelonBasis(std::size_t dim) : dim_(dim) {}

        std::size_t dim() const { return dim_; }
        std::size_t rank() const { return rows_.size(); }

        /** Adds `v` to the span; returns false (and leaves the basis unchanged) if `v` was already in it. */
        bool insert(Vector v);

        /** True if `v` lies in the current span. */
        bool contains(Vector v) const;

    private:
        // Reduces v against the basis in place; returns the pivot column of the remainder or dim_.
        std::size_t reduce(Vector& v) const;

        std::size_t dim_;
        std::vector<Vector> rows_;          // rows_[i] has leading 1 at pivots_[i]
        std::vector<std::size_t> pivots_;
};

}   // namespace polymean

#endif
