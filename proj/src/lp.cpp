#include "polymean/lp.hpp"

#include <algorithm>
#include <cmath>

#include "polymean/linalg.hpp"

namespace polymean::lp {

const char* to_string(Status s)
{
    switch (s) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::unbounded: return "unbounded";
    }
    return "?";
}

Statistics& statistics()
{
    static Statistics stats;
    return stats;
}

namespace {

std::atomic<bool> g_float_hints{true};

// ---------------------------------------------------------------------------
// Standard form:  minimize cost.y  subject to  M y = q,  y >= 0.
// ---------------------------------------------------------------------------

struct StandardResult
{
    Status status = Status::infeasible;
    Vector y;                       // optimal structural values
    Vector multipliers;             // optimal: simplex multipliers; infeasible: Farkas vector
    std::vector<std::size_t> basis;
};

/**
 * Dense exact tableau with artificial columns kept for reading multipliers.
 * Columns: [0, N) structural, [N, N+p) artificial, N+p right-hand side.
 * Row p holds reduced costs and -objective.
 */
class ExactTableau
{
    public:
        ExactTableau(const RationalMatrix& M, const Vector& q)
            : p_(M.rows()), n_(M.cols()), width_(n_ + p_ + 1),
              cells_((p_ + 1) * width_), sign_(p_, 1), basis_(p_), redundant_(p_, false)
        {
            for (std::size_t i = 0; i < p_; ++i) {
                sign_[i] = q[i] < 0 ? -1 : 1;
                for (std::size_t j = 0; j < n_; ++j)
                    if (!M(i, j).is_zero())
                        at(i, j) = sign_[i] > 0 ? M(i, j) : Rational(-M(i, j));
                at(i, n_ + i) = 1;
                at(i, rhs()) = sign_[i] > 0 ? q[i] : Rational(-q[i]);
                basis_[i] = n_ + i;
            }
        }

        StandardResult run(const Vector& cost)
        {
            StandardResult out;
            // phase I: minimize the sum of artificials
            for (std::size_t j = 0; j < n_; ++j) {
                Rational s = 0;
                for (std::size_t i = 0; i < p_; ++i)
                    if (!at(i, j).is_zero())
                        s += at(i, j);
                at(p_, j) = -s;
            }
            {
                Rational s = 0;
                for (std::size_t i = 0; i < p_; ++i)
                    s += at(i, rhs());
                at(p_, rhs()) = -s;
            }
            iterate();
            if (at(p_, rhs()) < 0) {
                out.status = Status::infeasible;
                out.multipliers.resize(p_);
                for (std::size_t i = 0; i < p_; ++i) {
                    Rational pi = 1 - at(p_, n_ + i);
                    out.multipliers[i] = sign_[i] > 0 ? pi : Rational(-pi);
                }
                return out;
            }
            // drive remaining artificials out of the basis
            for (std::size_t r = 0; r < p_; ++r) {
                if (basis_[r] < n_)
                    continue;
                std::size_t s = n_;
                for (std::size_t j = 0; j < n_; ++j)
                    if (!at(r, j).is_zero()) {
                        s = j;
                        break;
                    }
                if (s == n_)
                    redundant_[r] = true;
                else
                    pivot(r, s);
            }
            // phase II
            for (std::size_t j = 0; j < width_; ++j)
                at(p_, j) = (j < n_) ? cost[j] : Rational(0);
            for (std::size_t i = 0; i < p_; ++i) {
                const std::size_t b = basis_[i];
                if (b >= n_ || cost[b].is_zero())
                    continue;
                const Rational cb = cost[b];
                for (std::size_t j = 0; j < width_; ++j)
                    if (!at(i, j).is_zero())
                        at(p_, j) -= cb * at(i, j);
            }
            if (!iterate()) {
                out.status = Status::unbounded;
                return out;
            }
            out.status = Status::optimal;
            out.y.assign(n_, Rational(0));
            for (std::size_t i = 0; i < p_; ++i)
                if (basis_[i] < n_)
                    out.y[basis_[i]] = at(i, rhs());
            out.multipliers.resize(p_);
            for (std::size_t i = 0; i < p_; ++i) {
                Rational pi = -at(p_, n_ + i);
                out.multipliers[i] = sign_[i] > 0 ? pi : Rational(-pi);
            }
            out.basis = basis_;
            return out;
        }

    private:
        std::size_t rhs() const { return width_ - 1; }
        Rational& at(std::size_t i, std::size_t j) { return cells_[i * width_ + j]; }

        // Bland's rule over structural columns; false if unbounded.
        bool iterate()
        {
            for (;;) {
                std::size_t s = n_;
                for (std::size_t j = 0; j < n_; ++j)
                    if (at(p_, j) < 0) {
                        s = j;
                        break;
                    }
                if (s == n_)
                    return true;
                std::size_t r = p_;
                Rational best;
                for (std::size_t i = 0; i < p_; ++i) {
                    if (redundant_[i] || at(i, s) <= 0)
                        continue;
                    Rational ratio = at(i, rhs()) / at(i, s);
                    if (r == p_ || ratio < best || (ratio == best && basis_[i] < basis_[r])) {
                        r = i;
                        best = std::move(ratio);
                    }
                }
                if (r == p_)
                    return false;
                pivot(r, s);
            }
        }

        void pivot(std::size_t r, std::size_t s)
        {
            ++statistics().pivots;
            const Rational inv = 1 / at(r, s);
            std::vector<std::size_t> nz;
            nz.reserve(width_);
            for (std::size_t j = 0; j < width_; ++j)
                if (!at(r, j).is_zero()) {
                    if (j != s)
                        at(r, j) *= inv;
                    nz.push_back(j);
                }
            at(r, s) = 1;
            for (std::size_t i = 0; i <= p_; ++i) {
                if (i == r || at(i, s).is_zero())
                    continue;
                const Rational f = at(i, s);
                for (std::size_t j : nz)
                    at(i, j) -= f * at(r, j);
            }
            basis_[r] = s;
        }

        std::size_t p_, n_, width_;
        std::vector<Rational> cells_;
        std::vector<int> sign_;
        std::vector<std::size_t> basis_;
        std::vector<bool> redundant_;
};

StandardResult solve_standard_exact(const RationalMatrix& M, const Vector& q, const Vector& cost)
{
    ++statistics().exact;
    ExactTableau t(M, q);
    return t.run(cost);
}

// ---------------------------------------------------------------------------
// Floating-point basis proposal. Any doubt => nullopt; never trusted directly.
// ---------------------------------------------------------------------------

std::optional<std::vector<std::size_t>> propose_basis(const RationalMatrix& M, const Vector& q, const Vector& cost)
{
    const std::size_t p = M.rows(), n = M.cols(), width = n + p + 1;
    if (p == 0 || n < p)
        return std::nullopt;
    constexpr double tol = 1e-9;

    // column scaling keeps the basis structure; rows are scaled with q
    std::vector<double> colscale(n, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        double m = std::abs(cost[j].convert_to<double>());
        for (std::size_t i = 0; i < p; ++i)
            m = std::max(m, std::abs(M(i, j).convert_to<double>()));
        if (m > 0 && std::isfinite(m))
            colscale[j] = 1.0 / m;
    }
    std::vector<double> T((p + 1) * width, 0.0);
    auto at = [&](std::size_t i, std::size_t j) -> double& { return T[i * width + j]; };
    for (std::size_t i = 0; i < p; ++i) {
        double rowmax = std::abs(q[i].convert_to<double>());
        for (std::size_t j = 0; j < n; ++j)
            rowmax = std::max(rowmax, std::abs(M(i, j).convert_to<double>() * colscale[j]));
        const double rs = rowmax > 0 ? 1.0 / rowmax : 1.0;
        const double sg = q[i] < 0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j)
            at(i, j) = sg * rs * M(i, j).convert_to<double>() * colscale[j];
        at(i, n + i) = 1.0;
        at(i, width - 1) = sg * rs * q[i].convert_to<double>();
    }
    std::vector<std::size_t> basis(p);
    for (std::size_t i = 0; i < p; ++i)
        basis[i] = n + i;

    auto do_pivot = [&](std::size_t r, std::size_t s) {
        const double inv = 1.0 / at(r, s);
        for (std::size_t j = 0; j < width; ++j)
            at(r, j) *= inv;
        at(r, s) = 1.0;
        for (std::size_t i = 0; i <= p; ++i) {
            if (i == r)
                continue;
            const double f = at(i, s);
            if (f == 0.0)
                continue;
            for (std::size_t j = 0; j < width; ++j)
                at(i, j) -= f * at(r, j);
            at(i, s) = 0.0;
        }
        basis[r] = s;
    };
    // Dantzig pricing, falling back to Bland after many iterations
    auto run = [&](std::size_t limit_cols) -> int {
        const std::size_t cap = 20 * (p + n) + 100;
        for (std::size_t it = 0; it < cap; ++it) {
            const bool bland = it > 4 * (p + n);
            std::size_t s = limit_cols;
            double best = -tol;
            for (std::size_t j = 0; j < limit_cols; ++j)
                if (at(p, j) < best) {
                    s = j;
                    if (bland)
                        break;
                    best = at(p, j);
                }
            if (s == limit_cols)
                return 0;       // optimal
            std::size_t r = p;
            double ratio = 0;
            for (std::size_t i = 0; i < p; ++i) {
                if (at(i, s) <= tol)
                    continue;
                const double rt = std::max(0.0, at(i, width - 1)) / at(i, s);
                if (r == p || rt < ratio - 1e-12 || (std::abs(rt - ratio) <= 1e-12 && at(i, s) > at(r, s))) {
                    r = i;
                    ratio = rt;
                }
            }
            if (r == p)
                return 1;       // unbounded
            do_pivot(r, s);
        }
        return 2;               // cycling or stalling
    };

    for (std::size_t j = 0; j < n; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < p; ++i)
            s += at(i, j);
        at(p, j) = -s;
    }
    {
        double s = 0;
        for (std::size_t i = 0; i < p; ++i)
            s += at(i, width - 1);
        at(p, width - 1) = -s;
    }
    if (run(n) != 0 || at(p, width - 1) < -1e-7)
        return std::nullopt;
    for (std::size_t r = 0; r < p; ++r) {
        if (basis[r] < n)
            continue;
        std::size_t s = n;
        double best = 1e-7;
        for (std::size_t j = 0; j < n; ++j)
            if (std::abs(at(r, j)) > best) {
                best = std::abs(at(r, j));
                s = j;
            }
        if (s == n)
            return std::nullopt;
        do_pivot(r, s);
    }
    for (std::size_t j = 0; j < width; ++j)
        at(p, j) = j < n ? cost[j].convert_to<double>() * colscale[j] : 0.0;
    {
        double cmax = 0;
        for (std::size_t j = 0; j < n; ++j)
            cmax = std::max(cmax, std::abs(at(p, j)));
        if (!std::isfinite(cmax))
            return std::nullopt;
        if (cmax > 0)
            for (std::size_t j = 0; j < n; ++j)
                at(p, j) /= cmax;
    }
    for (std::size_t i = 0; i < p; ++i) {
        const double cb = at(p, basis[i]);
        if (cb == 0.0)
            continue;
        for (std::size_t j = 0; j < width; ++j)
            at(p, j) -= cb * at(i, j);
    }
    if (run(n) != 0)
        return std::nullopt;
    std::sort(basis.begin(), basis.end());
    return basis;
}

// ---------------------------------------------------------------------------
// Inequality form  G x <= h  (x free), via the dual standard form.
// ---------------------------------------------------------------------------

struct InequalitySystem
{
    RationalMatrix G;   // m x d
    Vector h;
};

InequalitySystem stack(const LinearProgram& lp)
{
    InequalitySystem sys{lp.constraints.A(), lp.constraints.b()};
    const std::size_t d = lp.constraints.dim();
    for (std::size_t i = 0; i < lp.equality_matrix.rows(); ++i) {
        auto row = lp.equality_matrix.row(i);
        sys.G.append_row(row);
        sys.h.push_back(lp.equality_rhs[i]);
        Vector neg(d);
        for (std::size_t j = 0; j < d; ++j)
            neg[j] = -row[j];
        sys.G.append_row(neg);
        sys.h.push_back(-lp.equality_rhs[i]);
    }
    if (sys.G.cols() == 0 && sys.G.rows() == 0)
        sys.G = RationalMatrix(0, d);
    return sys;
}

// Exact acceptance test for a proposed set of d tight rows.
std::optional<Outcome> verify_basis(const InequalitySystem& sys, const Vector& c, const std::vector<std::size_t>& rows)
{
    const std::size_t d = c.size();
    RationalMatrix B(d, d);
    Vector hb(d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j)
            B(i, j) = sys.G(rows[i], j);
        hb[i] = sys.h[rows[i]];
    }
    // dual: B^T y = -c, y >= 0
    Vector negc(d);
    for (std::size_t j = 0; j < d; ++j)
        negc[j] = -c[j];
    auto y = solve_square(B.transpose(), negc);
    if (!y)
        return std::nullopt;
    for (const auto& v : *y)
        if (v < 0)
            return std::nullopt;
    auto x = solve_square(B, hb);
    if (!x)
        return std::nullopt;
    for (std::size_t i = 0; i < sys.G.rows(); ++i)
        if (dot(sys.G.row(i), *x) > sys.h[i])
            return std::nullopt;
    Outcome out;
    out.status = Status::optimal;
    out.value = dot(c, *x);
    out.point = std::move(*x);
    out.multipliers.assign(sys.G.rows(), Rational(0));
    for (std::size_t i = 0; i < d; ++i)
        out.multipliers[rows[i]] = (*y)[i];
    ++statistics().hinted;
    return out;
}

}   // namespace

void set_float_hints(bool enabled) { g_float_hints = enabled; }
bool float_hints() { return g_float_hints; }

Outcome solve(const LinearProgram& lp)
{
    ++statistics().solves;
    const std::size_t d = lp.constraints.dim();
    if (lp.objective.size() != d || lp.constraints.b().size() != lp.constraints.size())
        throw DimensionError("dimension mismatch");
    if (lp.equality_matrix.rows() > 0 && lp.equality_matrix.cols() != d)
        throw DimensionError("dimension mismatch");
    if (lp.equality_rhs.size() != lp.equality_matrix.rows())
        throw DimensionError("dimension mismatch");

    const InequalitySystem sys = stack(lp);
    const std::size_t m = sys.G.rows();
    const Vector& c = lp.objective;

    if (d == 0) {
        Outcome out;
        for (std::size_t i = 0; i < m; ++i)
            if (sys.h[i] < 0) {
                out.status = Status::infeasible;
                return out;
            }
        out.status = Status::optimal;
        out.point = Vector{};
        out.value = Rational(0);
        out.multipliers.assign(m, Rational(0));
        return out;
    }

    // dual standard form: M = G^T (d x m), q = -c, cost = h
    RationalMatrix M = sys.G.transpose();
    Vector q(d);
    for (std::size_t j = 0; j < d; ++j)
        q[j] = -c[j];

    if (g_float_hints && m >= d) {
        if (auto basis = propose_basis(M, q, sys.h))
            if (auto verified = verify_basis(sys, c, *basis))
                return *verified;
    }

    StandardResult r = solve_standard_exact(M, q, sys.h);
    Outcome out;
    if (r.status == Status::optimal) {
        out.status = Status::optimal;
        out.point = r.multipliers;
        out.value = dot(c, *out.point);
        out.multipliers = std::move(r.y);
        return out;
    }
    if (r.status == Status::unbounded) {
        out.status = Status::infeasible;
        return out;
    }
    // Dual infeasible: the primal is unbounded if it is feasible at all.
    // Farkas test: y >= 0, G^T y = 0, 1.y = 1 with h.y < 0 proves emptiness.
    RationalMatrix F(d + 1, m);
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < m; ++j)
            F(i, j) = M(i, j);
    for (std::size_t j = 0; j < m; ++j)
        F(d, j) = 1;
    Vector fq(d + 1);
    fq[d] = 1;
    if (m == 0) {
        out.status = Status::unbounded;
        out.ray = q;
        return out;
    }
    StandardResult feas = solve_standard_exact(F, fq, sys.h);
    if (feas.status == Status::optimal && dot(sys.h, feas.y) < 0) {
        out.status = Status::infeasible;
        return out;
    }
    out.status = Status::unbounded;
    out.ray = r.multipliers;
    return out;
}

Outcome minimize(const HPolyhedron& P, const Vector& c)
{
    LinearProgram lp{c, P, RationalMatrix(0, P.dim()), {}};
    return solve(lp);
}

bool is_feasible(const HPolyhedron& P)
{
    return minimize(P, Vector(P.dim(), Rational(0))).status != Status::infeasible;
}

namespace {

SlackPoint slack_point_given(const HPolyhedron& P, const std::vector<std::size_t>& equalities)
{
    const std::size_t d = P.dim();
    std::vector<bool> is_eq(P.size(), false);
    for (auto i : equalities)
        is_eq[i] = true;

    // variables (x, t)
    HPolyhedron lifted(d + 1);
    RationalMatrix E(0, d + 1);
    Vector f;
    Vector row(d + 1);
    bool any_free = false;
    for (std::size_t i = 0; i < P.size(); ++i) {
        auto a = P.normal(i);
        std::copy(a.begin(), a.end(), row.begin());
        if (is_eq[i]) {
            row[d] = 0;
            E.append_row(row);
            f.push_back(P.rhs(i));
        }
        else {
            row[d] = 1;
            lifted.add(row, P.rhs(i));
            any_free = true;
        }
    }
    Vector obj(d + 1);
    obj[d] = -1;
    if (!any_free) {
        // only equalities: any feasible point, slack 0
        obj[d] = 0;
        Vector zero_t(d + 1);
        zero_t[d] = 1;
        lifted.add(zero_t, 0);
        zero_t[d] = -1;
        lifted.add(zero_t, 0);
    }
    LinearProgram lp{obj, lifted, E, f};
    Outcome o = solve(lp);
    if (o.status == Status::infeasible)
        throw EmptyPolyhedron();
    if (o.status == Status::unbounded) {
        Vector cap(d + 1);
        cap[d] = 1;
        lp.constraints.add(cap, 1);
        o = solve(lp);
    }
    SlackPoint sp;
    sp.point.assign(o.point->begin(), o.point->begin() + static_cast<std::ptrdiff_t>(d));
    sp.slack = any_free ? (*o.point)[d] : Rational(0);
    if (sp.slack < 0)
        throw EmptyPolyhedron();
    return sp;
}

}   // namespace

std::pair<std::vector<std::size_t>, SlackPoint> affine_hull_and_slack_point(const HPolyhedron& P)
{
    // One slack LP settles the full-dimensional case.
    SlackPoint first = slack_point_given(P, {});
    if (first.slack > 0)
        return {{}, std::move(first)};

    // Candidates are the rows tight at a feasible point; each is decided by
    // min a_i.x, whose optimizer also clears other candidates it leaves slack.
    const std::size_t m = P.size();
    std::vector<int> state(m, 0);   // 0 unknown, 1 implicit, -1 not implicit
    for (std::size_t i = 0; i < m; ++i)
        if (P.excess(i, first.point) < 0)
            state[i] = -1;
    for (std::size_t i = 0; i < m; ++i) {
        if (state[i] != 0)
            continue;
        auto a = P.normal(i);
        Outcome o = minimize(P, Vector(a.begin(), a.end()));
        if (o.status == Status::infeasible)
            throw EmptyPolyhedron();
        if (o.status == Status::optimal && *o.value == P.rhs(i)) {
            state[i] = 1;
            continue;
        }
        state[i] = -1;
        if (o.point)
            for (std::size_t j = i + 1; j < m; ++j)
                if (state[j] == 0 && P.excess(j, *o.point) < 0)
                    state[j] = -1;
    }
    std::vector<std::size_t> eq;
    for (std::size_t i = 0; i < m; ++i)
        if (state[i] == 1)
            eq.push_back(i);
    SlackPoint sp = slack_point_given(P, eq);
    return {std::move(eq), std::move(sp)};
}

std::vector<std::size_t> implicit_equalities(const HPolyhedron& P)
{
    return affine_hull_and_slack_point(P).first;
}

SlackPoint max_slack_point(const HPolyhedron& P)
{
    return affine_hull_and_slack_point(P).second;
}

}   // namespace polymean::lp
