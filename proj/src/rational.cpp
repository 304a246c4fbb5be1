#include "polymean/rational.hpp"

#include <cctype>
#include <sstream>

namespace polymean {

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

}   // namespace

Rational parse_rational(std::string_view text)
{
    const std::string original(text);
    bool negative = false;
    if (text.starts_with("-")) {
        negative = true;
        text.remove_prefix(1);
    }
    else if (text.starts_with("\xE2\x88\x92")) {   // U+2212 MINUS SIGN
        negative = true;
        text.remove_prefix(3);
    }
    std::string_view num = text, den;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
        if (!all_digits(den))
            throw ParseError("malformed rational '" + original + "'");
    }
    if (!all_digits(num))
        throw ParseError("malformed rational '" + original + "'");

    Integer p{std::string(num)};
    Integer q = den.empty() ? Integer(1) : Integer(std::string(den));
    if (q == 0)
        throw ParseError("zero denominator in '" + original + "'");
    Rational value = Rational(p) / Rational(q);
    return negative ? Rational(-value) : value;
}

std::string to_string(const Rational& value)
{
    return value.str();
}

std::string to_decimal(const Rational& value, int digits)
{
    std::ostringstream out;
    out.precision(digits);
    out << value.convert_to<double>();
    return out.str();
}

Rational dot(std::span<const Rational> a, std::span<const Rational> b)
{
    if (a.size() != b.size())
        throw DimensionError();
    Rational s = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].is_zero() && !b[i].is_zero())
            s += a[i] * b[i];
    return s;
}

Vector operator-(const Vector& a, const Vector& b)
{
    if (a.size() != b.size())
        throw DimensionError();
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] - b[i];
    return out;
}

Vector operator+(const Vector& a, const Vector& b)
{
    if (a.size() != b.size())
        throw DimensionError();
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = a[i] + b[i];
    return out;
}

Vector operator*(const Rational& s, const Vector& a)
{
    Vector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        out[i] = s * a[i];
    return out;
}

bool is_zero(std::span<const Rational> v)
{
    for (const auto& x : v)
        if (!x.is_zero())
            return false;
    return true;
}

Integer common_denominator(std::span<const Rational> v)
{
    Integer l = 1;
    for (const auto& x : v) {
        const Integer d = denominator(x);
        if (d != 1)
            l = boost::multiprecision::lcm(l, d);
    }
    return l;
}

std::vector<Integer> primitive_integer_vector(std::span<const Rational> v, Rational* scale)
{
    const Integer l = common_denominator(v);
    std::vector<Integer> out(v.size());
    Integer g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = numerator(v[i]) * (l / denominator(v[i]));
        if (out[i] != 0)
            g = boost::multiprecision::gcd(g, out[i]);
    }
    if (g == 0) {
        if (scale)
            *scale = 1;
        return out;
    }
    g = abs(g);
    if (g != 1)
        for (auto& x : out)
            x /= g;
    if (scale)
        *scale = Rational(l) / Rational(g);
    return out;
}

RationalMatrix RationalMatrix::from_rows(const std::vector<Vector>& rows, std::size_t cols_if_empty)
{
    const std::size_t cols = rows.empty() ? cols_if_empty : rows.front().size();
    RationalMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw DimensionError("ragged rows");
        for (std::size_t j = 0; j < cols; ++j)
            m(i, j) = rows[i][j];
    }
    return m;
}

void RationalMatrix::append_row(std::span<const Rational> r)
{
    if (rows_ == 0 && cols_ == 0)
        cols_ = r.size();
    if (r.size() != cols_)
        throw DimensionError();
    entries_.insert(entries_.end(), r.begin(), r.end());
    ++rows_;
}

Vector RationalMatrix::operator*(std::span<const Rational> x) const
{
    if (x.size() != cols_)
        throw DimensionError();
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        out[i] = dot(row(i), x);
    return out;
}

RationalMatrix RationalMatrix::transpose() const
{
    RationalMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            t(j, i) = (*this)(i, j);
    return t;
}

}   // namespace polymean
