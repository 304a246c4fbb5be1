#include "polymean/norm.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "polymean/hpolyhedron.hpp"
#include "polymean/linalg.hpp"
#include "polymean/lp.hpp"

namespace polymean {

namespace {

// True if p is not a convex combination of the other points.
bool is_extreme(const std::vector<Vector>& pts, std::size_t i)
{
    // find lambda >= 0, sum 1, sum lambda_j p_j = p_i over j != i
    const std::size_t k = pts[i].size();
    const std::size_t m = pts.size() - 1;
    if (m == 0)
        return true;
    HPolyhedron P(m);
    RationalMatrix E(0, m);
    Vector f;
    for (std::size_t j = 0; j < m; ++j) {
        Vector row(m);
        row[j] = -1;
        P.add(row, 0);
    }
    for (std::size_t c = 0; c <= k; ++c) {
        Vector row(m);
        std::size_t col = 0;
        for (std::size_t j = 0; j < pts.size(); ++j) {
            if (j == i)
                continue;
            row[col++] = c < k ? pts[j][c] : Rational(1);
        }
        E.append_row(row);
        f.push_back(c < k ? pts[i][c] : Rational(1));
    }
    lp::LinearProgram prog{Vector(m), P, E, f};
    return lp::solve(prog).status == lp::Status::infeasible;
}

std::string strip_comment(const std::string& line)
{
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

std::size_t parse_count(const std::string& tok, const char* what)
{
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(std::string("malformed ") + what + " '" + tok + "'");
    return v;
}

}   // namespace

PolytopeNorm::PolytopeNorm(RationalMatrix A, std::string name) : A_(std::move(A)), name_(std::move(name))
{
    const std::size_t r = A_.rows(), k = A_.cols();
    if (k == 0 || r == 0)
        throw std::invalid_argument("norm needs at least one row and one column");
    std::map<Vector, std::size_t> index;
    for (std::size_t i = 0; i < r; ++i) {
        Vector v = A_.row_vector(i);
        if (is_zero(v))
            throw std::invalid_argument("zero row " + std::to_string(i));
        if (!index.emplace(std::move(v), i).second)
            throw std::invalid_argument("duplicate row " + std::to_string(i));
    }
    opposite_.resize(r);
    for (std::size_t i = 0; i < r; ++i) {
        Vector neg = Rational(-1) * A_.row_vector(i);
        auto it = index.find(neg);
        if (it == index.end())
            throw std::invalid_argument("not centrally symmetric: row " + std::to_string(i) + " has no opposite");
        opposite_[i] = it->second;
    }
    if (rank(A_) != k)
        throw std::invalid_argument("rows do not span the space: unit ball is unbounded");
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < r; ++i)
        rows.push_back(A_.row_vector(i));
    for (std::size_t i = 0; i < r; ++i)
        if (!is_extreme(rows, i))
            throw std::invalid_argument("row " + std::to_string(i) + " is not a vertex of the polar polytope");
}

PolytopeNorm PolytopeNorm::linf(std::size_t k)
{
    RationalMatrix A(0, k);
    for (std::size_t i = 0; i < k; ++i)
        for (int s : {1, -1}) {
            Vector row(k);
            row[i] = s;
            A.append_row(row);
        }
    return PolytopeNorm(std::move(A), "linf:" + std::to_string(k));
}

PolytopeNorm PolytopeNorm::l1(std::size_t k)
{
    if (k >= 20)
        throw std::invalid_argument("l1 norm dimension too large");
    RationalMatrix A(0, k);
    for (std::size_t i = 0; i < (std::size_t{1} << k); ++i) {
        const std::size_t g = i ^ (i >> 1);
        Vector row(k);
        for (std::size_t j = 0; j < k; ++j)
            row[j] = ((g >> j) & 1) ? -1 : 1;
        A.append_row(row);
    }
    return PolytopeNorm(std::move(A), "l1:" + std::to_string(k));
}

PolytopeNorm PolytopeNorm::from_symmetric_points(const std::vector<Vector>& points, std::string name)
{
    std::vector<Vector> all;
    for (const auto& p : points) {
        if (is_zero(p))
            continue;
        for (Vector v : {p, Rational(-1) * p})
            if (std::find(all.begin(), all.end(), v) == all.end())
                all.push_back(std::move(v));
    }
    std::vector<Vector> kept;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (is_extreme(all, i))
            kept.push_back(all[i]);
    return PolytopeNorm(RationalMatrix::from_rows(kept, points.empty() ? 0 : points.front().size()), std::move(name));
}

PolytopeNorm PolytopeNorm::from_name(std::string_view name)
{
    auto colon = name.find(':');
    if (colon == std::string_view::npos)
        throw ParseError("unknown norm '" + std::string(name) + "'");
    std::string kind(name.substr(0, colon));
    std::size_t k = parse_count(std::string(name.substr(colon + 1)), "norm dimension");
    if (k == 0)
        throw ParseError("norm dimension must be positive");
    if (kind == "linf")
        return linf(k);
    if (kind == "l1")
        return l1(k);
    throw ParseError("unknown norm '" + std::string(name) + "'");
}

PolytopeNorm PolytopeNorm::parse(std::istream& in, std::string name)
{
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(strip_comment(line));
        std::string tok;
        while (ls >> tok)
            tokens.push_back(tok);
    }
    if (tokens.size() < 2)
        throw ParseError("norm file: missing header 'r k'");
    const std::size_t r = parse_count(tokens[0], "row count");
    const std::size_t k = parse_count(tokens[1], "dimension");
    if (tokens.size() != 2 + r * k)
        throw ParseError("norm file: expected " + std::to_string(r * k) + " entries, found " +
                         std::to_string(tokens.size() - 2));
    RationalMatrix A(r, k);
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = 0; j < k; ++j)
            A(i, j) = parse_rational(tokens[2 + i * k + j]);
    try {
        return PolytopeNorm(std::move(A), std::move(name));
    }
    catch (const std::invalid_argument& e) {
        throw ParseError(std::string("norm file: ") + e.what());
    }
}

PolytopeNorm PolytopeNorm::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open norm file '" + path + "'");
    return parse(in, path);
}

PolytopeNorm PolytopeNorm::resolve(const std::string& spec)
{
    if (spec.starts_with("linf:") || spec.starts_with("l1:"))
        return from_name(spec);
    return load(spec);
}

std::uint64_t PolytopeNorm::hash() const
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    auto feed = [&](const std::string& s) {
        for (unsigned char c : s) {
            h ^= c;
            h *= 0x100000001b3ull;
        }
    };
    feed(std::to_string(size()) + " " + std::to_string(dim()) + "\n");
    for (std::size_t i = 0; i < size(); ++i) {
        for (std::size_t j = 0; j < dim(); ++j)
            feed(to_string(A_(i, j)) + (j + 1 < dim() ? " " : "\n"));
    }
    return h;
}

Rational norm_eval(const PolytopeNorm& N, std::span<const Rational> x)
{
    if (x.size() != N.dim())
        throw DimensionError();
    Rational best = dot(N.row(0), x);
    for (std::size_t i = 1; i < N.size(); ++i) {
        Rational v = dot(N.row(i), x);
        if (v > best)
            best = std::move(v);
    }
    return best;
}

std::vector<std::size_t> active_constraints(const PolytopeNorm& N, std::span<const Rational> x)
{
    if (x.size() != N.dim())
        throw DimensionError();
    if (is_zero(x))
        throw std::invalid_argument("active set undefined at origin");
    std::vector<Rational> values(N.size());
    Rational best;
    for (std::size_t i = 0; i < N.size(); ++i) {
        values[i] = dot(N.row(i), x);
        if (i == 0 || values[i] > best)
            best = values[i];
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < N.size(); ++i)
        if (values[i] == best)
            out.push_back(i);
    return out;
}

}   // namespace polymean
