#include "polymean/linalg.hpp"

#include <stdexcept>
#include <utility>

namespace polymean {

namespace {

// Fraction-free echelon reduction; returns the number of pivots found.
std::size_t bareiss_rank(std::vector<std::vector<Integer>> a, std::size_t cols)
{
    const std::size_t rows = a.size();
    Integer prev = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0)
            ++p;
        if (p == rows)
            continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < rows; ++i) {
            for (std::size_t j = c + 1; j < cols; ++j) {
                Integer t = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                mpz_divexact(t.backend().data(), t.backend().data(), prev.backend().data());
                a[i][j] = std::move(t);
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    return r;
}

}   // namespace

std::size_t rank(const RationalMatrix& m)
{
    std::vector<std::vector<Integer>> rows;
    rows.reserve(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i)
        rows.push_back(primitive_integer_vector(m.row(i)));
    return bareiss_rank(std::move(rows), m.cols());
}

std::size_t rank(const std::vector<Vector>& rows)
{
    if (rows.empty())
        return 0;
    std::vector<std::vector<Integer>> ints;
    ints.reserve(rows.size());
    for (const auto& r : rows) {
        if (r.size() != rows.front().size())
            throw DimensionError("ragged rows");
        ints.push_back(primitive_integer_vector(r));
    }
    return bareiss_rank(std::move(ints), rows.front().size());
}

std::size_t affine_dim(const std::vector<Vector>& points)
{
    if (points.empty())
        throw std::invalid_argument("empty point set");
    std::vector<Vector> diffs;
    diffs.reserve(points.size() - 1);
    for (std::size_t i = 1; i < points.size(); ++i)
        diffs.push_back(points[i] - points[0]);
    return rank(diffs);
}

std::vector<Vector> kernel_basis(const RationalMatrix& m)
{
    const std::size_t rows = m.rows(), cols = m.cols();
    RationalMatrix a = m;
    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a(p, c).is_zero())
            ++p;
        if (p == rows)
            continue;
        if (p != r)
            for (std::size_t j = 0; j < cols; ++j)
                std::swap(a(p, j), a(r, j));
        const Rational inv = 1 / a(r, c);
        for (std::size_t j = c; j < cols; ++j)
            a(r, j) *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a(i, c).is_zero())
                continue;
            const Rational f = a(i, c);
            for (std::size_t j = c; j < cols; ++j)
                a(i, j) -= f * a(r, j);
        }
        pivot_cols.push_back(c);
        ++r;
    }

    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_cols)
        is_pivot[c] = true;
    std::vector<Vector> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free])
            continue;
        Vector v(cols);
        v[free] = 1;
        for (std::size_t i = 0; i < pivot_cols.size(); ++i)
            v[pivot_cols[i]] = -a(i, free);
        basis.push_back(std::move(v));
    }
    return basis;
}

std::optional<Vector> solve_square(const RationalMatrix& m, std::span<const Rational> rhs)
{
    const std::size_t n = m.rows();
    if (m.cols() != n || rhs.size() != n)
        throw DimensionError();
    RationalMatrix a = m;
    Vector b(rhs.begin(), rhs.end());
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && a(p, c).is_zero())
            ++p;
        if (p == n)
            return std::nullopt;
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j)
                std::swap(a(p, j), a(c, j));
            std::swap(b[p], b[c]);
        }
        for (std::size_t i = c + 1; i < n; ++i) {
            if (a(i, c).is_zero())
                continue;
            const Rational f = a(i, c) / a(c, c);
            for (std::size_t j = c + 1; j < n; ++j)
                a(i, j) -= f * a(c, j);
            b[i] -= f * b[c];
            a(i, c) = 0;
        }
    }
    Vector x(n);
    for (std::size_t i = n; i-- > 0;) {
        Rational s = b[i];
        for (std::size_t j = i + 1; j < n; ++j)
            if (!a(i, j).is_zero())
                s -= a(i, j) * x[j];
        x[i] = s / a(i, i);
    }
    return x;
}

std::size_t EchelonBasis::reduce(Vector& v) const
{
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const std::size_t p = pivots_[i];
        if (v[p].is_zero())
            continue;
        const Rational f = v[p];
        for (std::size_t j = p; j < dim_; ++j)
            if (!rows_[i][j].is_zero())
                v[j] -= f * rows_[i][j];
    }
    for (std::size_t j = 0; j < dim_; ++j)
        if (!v[j].is_zero())
            return j;
    return dim_;
}

bool EchelonBasis::insert(Vector v)
{
    if (v.size() != dim_)
        throw DimensionError();
    const std::size_t p = reduce(v);
    if (p == dim_)
        return false;
    const Rational inv = 1 / v[p];
    for (std::size_t j = p; j < dim_; ++j)
        v[j] *= inv;
    // keep rows sorted by pivot so reduce() sweeps left to right
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < p)
        ++pos;
    // eliminate the new pivot from existing rows to keep the basis reduced
    for (auto& row : rows_) {
        if (row[p].is_zero())
            continue;
        const Rational f = row[p];
        for (std::size_t j = p; j < dim_; ++j)
            row[j] -= f * v[j];
    }
    rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
    pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), p);
    return true;
}

bool EchelonBasis::contains(Vector v) const
{
    if (v.size() != dim_)
        throw DimensionError();
    return reduce(v) == dim_;
}

}   // namespace polymean
