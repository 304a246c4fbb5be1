#ifndef POLYMEAN_HPOLYHEDRON_HPP
#define POLYMEAN_HPOLYHEDRON_HPP

#include <vector>

#include "polymean/rational.hpp"

namespace polymean {

/** The polyhedron {x : A x <= b}. */
class HPolyhedron
{
    public:
        HPolyhedron() = default;
        explicit HPolyhedron(std::size_t dim) : A_(0, dim) {}
        HPolyhedron(RationalMatrix A, Vector b);

        std::size_t dim() const { return A_.cols(); }
        std::size_t size() const { return A_.rows(); }

        const RationalMatrix& A() const { return A_; }
        const Vector& b() const { return b_; }

        std::span<const Rational> normal(std::size_t i) const { return A_.row(i); }
        const Rational& rhs(std::size_t i) const { return b_[i]; }

        void add(std::span<const Rational> a, const Rational& rhs);

        /** a_i . x - b_i  (<= 0 inside) */
        Rational excess(std::size_t i, std::span<const Rational> x) const;
        bool contains(std::span<const Rational> x) const;

        bool operator==(const HPolyhedron& other) const = default;

    private:
        RationalMatrix A_;
        Vector b_;
};

}   // namespace polymean

#endif
