/**
 * Exact rational scalars and dense rational vectors/matrices.
 *
 * Everything geometric in polymean is decided with these types; doubles only
 * appear as hints (see lp.hpp) and in human-facing output.
 */

#ifndef POLYMEAN_RATIONAL_HPP
#define POLYMEAN_RATIONAL_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/gmp.hpp>

namespace polymean {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;
using Vector = std::vector<Rational>;

/** Raised for malformed textual input (numbers, files, names). */
class ParseError : public std::runtime_error
{
    public:
        explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/** Raised when operands disagree on length or shape. */
class DimensionError : public std::invalid_argument
{
    public:
        explicit DimensionError(const std::string& what = "dimension mismatch")
            : std::invalid_argument(what) {}
};

/**
 * Parse "p/q" or "p" with an optional leading minus (ASCII '-' or U+2212).
 * No whitespace, no decimal point; q must be nonzero.
 */
Rational parse_rational(std::string_view text);

/** Exact text form: "p" when the denominator is 1, otherwise "p/q". */
std::string to_string(const Rational& value);

/** Decimal rendering for humans; never fed back into computation. */
std::string to_decimal(const Rational& value, int digits = 6);

Rational dot(std::span<const Rational> a, std::span<const Rational> b);

Vector operator-(const Vector& a, const Vector& b);
Vector operator+(const Vector& a, const Vector& b);
Vector operator*(const Rational& s, const Vector& a);

bool is_zero(std::span<const Rational> v);

/** Least common multiple of the denominators of `v` (1 for empty input). */
Integer common_denominator(std::span<const Rational> v);

/**
 * Scale `v` by a positive rational so that it becomes a primitive integer
 * vector (gcd of entries 1). Zero vectors are returned unchanged. The scale
 * factor used is written to `scale` when non-null.
 */
std::vector<Integer> primitive_integer_vector(std::span<const Rational> v, Rational* scale = nullptr);

/** Dense row-major rational matrix. */
class RationalMatrix
{
    public:
        RationalMatrix() = default;
        RationalMatrix(std::size_t rows, std::size_t cols)
            : rows_(rows), cols_(cols), entries_(rows * cols) {}

        /** Builds a matrix from row vectors; all rows must share one length. */
        static RationalMatrix from_rows(const std::vector<Vector>& rows, std::size_t cols_if_empty = 0);

        std::size_t rows() const { return rows_; }
        std::size_t cols() const { return cols_; }

        Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * cols_ + j]; }
        const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }

        std::span<Rational> row(std::size_t i) { return {entries_.data() + i * cols_, cols_}; }
        std::span<const Rational> row(std::size_t i) const { return {entries_.data() + i * cols_, cols_}; }
        Vector row_vector(std::size_t i) const { auto r = row(i); return {r.begin(), r.end()}; }

        void append_row(std::span<const Rational> r);

        Vector operator*(std::span<const Rational> x) const;
        RationalMatrix transpose() const;

        bool operator==(const RationalMatrix& other) const = default;

    private:
        std::size_t rows_ = 0;
        std::size_t cols_ = 0;
        std::vector<Rational> entries_;
};

}   // namespace polymean

#endif
