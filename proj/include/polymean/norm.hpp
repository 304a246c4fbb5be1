/**
 * Polytope norms ||x||_B = max_i (A x)_i for a centrally symmetric,
 * full-dimensional unit ball B = {x : A x <= 1}. The rows of A are the
 * vertices of the polar polytope.
 */

#ifndef POLYMEAN_NORM_HPP
#define POLYMEAN_NORM_HPP

#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "polymean/rational.hpp"

namespace polymean {

class PolytopeNorm
{
    public:
        /**
         * Validates central symmetry, absence of duplicate and zero rows,
         * rank(A) = k, and that every row is a vertex of conv(rows).
         * Violations throw std::invalid_argument.
         */
        explicit PolytopeNorm(RationalMatrix A, std::string name = {});

        /** Rows +-e_1, +-e_2, ... (in that order). */
        static PolytopeNorm linf(std::size_t k);
        /** All sign vectors, binary-reflected Gray code order; bit j set means coordinate j is -1. */
        static PolytopeNorm l1(std::size_t k);

        /**
         * Ball whose polar is conv(+-points). Points that are not extreme in
         * that hull are dropped, as are duplicates.
         */
        static PolytopeNorm from_symmetric_points(const std::vector<Vector>& points, std::string name = {});

        /** "linf:<k>" or "l1:<k>"; throws ParseError otherwise. */
        static PolytopeNorm from_name(std::string_view name);
        /** Norm file: "r k" then r rows of k rationals; '#' starts a comment. */
        static PolytopeNorm parse(std::istream& in, std::string name = {});
        static PolytopeNorm load(const std::string& path);
        /** A built-in name if it looks like one, otherwise a file path. */
        static PolytopeNorm resolve(const std::string& spec);

        std::size_t dim() const { return A_.cols(); }
        std::size_t size() const { return A_.rows(); }
        const RationalMatrix& A() const { return A_; }
        std::span<const Rational> row(std::size_t i) const { return A_.row(i); }
        Vector row_vector(std::size_t i) const { return A_.row_vector(i); }
        const std::string& name() const { return name_; }

        /** Index of the row -a_i. */
        std::size_t opposite(std::size_t i) const { return opposite_[i]; }

        /** FNV-1a over the exact text of the rows. */
        std::uint64_t hash() const;

    private:
        RationalMatrix A_;
        std::string name_;
        std::vector<std::size_t> opposite_;
};

/** max_i a_i . x; throws DimensionError on length mismatch. */
Rational norm_eval(const PolytopeNorm& N, std::span<const Rational> x);

/**
 * Rows attaining the norm at x, ascending.
 * Throws std::invalid_argument("active set undefined at origin") for x = 0.
 */
std::vector<std::size_t> active_constraints(const PolytopeNorm& N, std::span<const Rational> x);

}   // namespace polymean

#endif
