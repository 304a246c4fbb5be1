#include "polymean/hpolyhedron.hpp"

namespace polymean {

HPolyhedron::HPolyhedron(RationalMatrix A, Vector b) : A_(std::move(A)), b_(std::move(b))
{
    if (A_.rows() != b_.size())
        throw DimensionError("constraint matrix and right-hand side differ in length");
}

void HPolyhedron::add(std::span<const Rational> a, const Rational& rhs)
{
    A_.append_row(a);
    b_.push_back(rhs);
}

Rational HPolyhedron::excess(std::size_t i, std::span<const Rational> x) const
{
    return dot(A_.row(i), x) - b_[i];
}

bool HPolyhedron::contains(std::span<const Rational> x) const
{
    if (x.size() != dim())
        throw DimensionError();
    for (std::size_t i = 0; i < size(); ++i)
        if (excess(i, x) > 0)
            return false;
    return true;
}

}   // namespace polymean
