#include "polymean/fourier_motzkin.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "polymean/lp.hpp"

namespace polymean {

namespace {

struct Row
{
    Vector a;
    Rational b;
};

// Scales a row to a primitive integer normal; false for a zero normal.
bool canonicalize(Row& row)
{
    if (is_zero(row.a))
        return false;
    Rational scale;
    auto ints = primitive_integer_vector(row.a, &scale);
    for (std::size_t j = 0; j < ints.size(); ++j)
        row.a[j] = Rational(ints[j]);
    row.b *= scale;
    return true;
}

HPolyhedron to_polyhedron(const std::vector<Row>& rows, std::size_t dim)
{
    HPolyhedron P(dim);
    for (const auto& r : rows)
        P.add(r.a, r.b);
    return P;
}

HPolyhedron empty_projection(std::size_t dim)
{
    HPolyhedron P(dim);
    P.add(Vector(dim), Rational(-1));
    return P;
}

// Row `i` is redundant iff max a_i.x over the other rows (capped) stays <= b_i.
bool is_redundant(const std::vector<Row>& rows, const std::vector<bool>& alive, std::size_t i, std::size_t dim)
{
    HPolyhedron P(dim);
    for (std::size_t j = 0; j < rows.size(); ++j)
        if (j != i && alive[j])
            P.add(rows[j].a, rows[j].b);
    P.add(rows[i].a, rows[i].b + 1);
    Vector obj(dim);
    for (std::size_t c = 0; c < dim; ++c)
        obj[c] = -rows[i].a[c];
    auto o = lp::minimize(P, obj);
    if (o.status != lp::Status::optimal)
        throw std::logic_error("redundancy test on an infeasible system");
    return -*o.value <= rows[i].b;
}

// Merges rows with equal normals (keeping the smallest rhs); order of first appearance kept.
std::vector<Row> dedupe(std::vector<Row> rows)
{
    std::map<Vector, std::size_t> seen;
    std::vector<Row> out;
    for (auto& r : rows) {
        auto [it, fresh] = seen.emplace(r.a, out.size());
        if (fresh)
            out.push_back(std::move(r));
        else if (r.b < out[it->second].b)
            out[it->second] = std::move(r);
    }
    return out;
}

// Removes redundant rows among indices >= first, treating earlier rows as fixed.
std::vector<Row> prune(std::vector<Row> rows, std::size_t first, std::size_t dim)
{
    std::vector<bool> alive(rows.size(), true);
    for (std::size_t i = first; i < rows.size(); ++i)
        if (is_redundant(rows, alive, i, dim))
            alive[i] = false;
    std::vector<Row> out;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (alive[i])
            out.push_back(std::move(rows[i]));
    return out;
}

}   // namespace

HPolyhedron remove_redundant(const HPolyhedron& P)
{
    const std::size_t d = P.dim();
    if (!lp::is_feasible(P))
        return empty_projection(d);
    std::vector<Row> rows;
    for (std::size_t i = 0; i < P.size(); ++i) {
        Row r{P.A().row_vector(i), P.rhs(i)};
        if (canonicalize(r))
            rows.push_back(std::move(r));
    }
    return to_polyhedron(prune(dedupe(std::move(rows)), 0, d), d);
}

HPolyhedron fourier_motzkin(const HPolyhedron& P, const std::vector<std::size_t>& eliminate,
                            const FourierMotzkinOptions& options)
{
    const std::size_t d = P.dim();
    std::vector<bool> drop(d, false);
    for (auto j : eliminate) {
        if (j >= d)
            throw std::invalid_argument("elimination index out of range");
        drop[j] = true;
    }
    std::vector<std::size_t> order;
    if (options.ascending) {
        for (std::size_t j = 0; j < d; ++j)
            if (drop[j])
                order.push_back(j);
    }
    else {
        for (auto j : eliminate)
            if (std::find(order.begin(), order.end(), j) == order.end())
                order.push_back(j);
    }
    if (order.size() == d)
        throw std::invalid_argument("fourier_motzkin must keep at least one coordinate");

    const std::size_t kept_dim = d - order.size();
    if (!lp::is_feasible(P))
        return empty_projection(kept_dim);

    // `cols` maps current column positions to original coordinates
    std::vector<std::size_t> cols(d);
    for (std::size_t j = 0; j < d; ++j)
        cols[j] = j;

    std::vector<Row> rows;
    for (std::size_t i = 0; i < P.size(); ++i) {
        Row r{P.A().row_vector(i), P.rhs(i)};
        if (canonicalize(r))
            rows.push_back(std::move(r));
    }
    rows = dedupe(std::move(rows));
    if (!options.assume_irredundant)
        rows = prune(std::move(rows), 0, d);

    for (std::size_t var : order) {
        const std::size_t c = static_cast<std::size_t>(std::find(cols.begin(), cols.end(), var) - cols.begin());
        std::vector<Row> pos, neg, next;
        for (auto& r : rows) {
            const int s = r.a[c].sign();
            if (s > 0)
                pos.push_back(std::move(r));
            else if (s < 0)
                neg.push_back(std::move(r));
            else
                next.push_back(std::move(r));
        }
        const std::size_t fixed = next.size();
        std::vector<Row> created;
        for (const auto& p : pos)
            for (const auto& n : neg) {
                const Rational fp = -n.a[c], fn = p.a[c];
                Row r{Vector(p.a.size()), fp * p.b + fn * n.b};
                for (std::size_t j = 0; j < r.a.size(); ++j)
                    r.a[j] = fp * p.a[j] + fn * n.a[j];
                r.a[c] = 0;
                if (!canonicalize(r)) {
                    if (r.b < 0)
                        return empty_projection(kept_dim);
                    continue;
                }
                created.push_back(std::move(r));
            }
        // drop the eliminated column
        for (auto* group : {&next, &created})
            for (auto& r : *group)
                r.a.erase(r.a.begin() + static_cast<std::ptrdiff_t>(c));
        cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(c));

        // kept rows stay irredundant after projection; only created rows need tests
        for (auto& r : created)
            next.push_back(std::move(r));
        auto merged = dedupe(std::move(next));
        const std::size_t first_new = std::min(fixed, merged.size());
        rows = prune(std::move(merged), first_new, cols.size());
    }
    return to_polyhedron(rows, kept_dim);
}

}   // namespace polymean
