#include "polymean/frechet.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "polymean/fourier_motzkin.hpp"
#include "polymean/linalg.hpp"
#include "polymean/lp.hpp"

namespace polymean {

FrechetStatistics& frechet_statistics()
{
    static FrechetStatistics stats;
    return stats;
}

namespace {

std::size_t parse_count(const std::string& tok, const char* what)
{
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size())
        throw ParseError(std::string("malformed ") + what + " '" + tok + "'");
    return v;
}

void check_sample(const PolytopeNorm& N, const Sample& S)
{
    if (S.points.empty())
        throw std::invalid_argument("empty sample");
    for (const auto& p : S.points)
        if (p.size() != N.dim())
            throw DimensionError();
}

std::size_t bit_size(const Rational& x)
{
    using boost::multiprecision::denominator;
    using boost::multiprecision::numerator;
    const Integer n = numerator(x), d = denominator(x);
    return mpz_sizeinbase(n.backend().data(), 2) + mpz_sizeinbase(d.backend().data(), 2);
}

// argmin over P of c.s; nullopt if unbounded
std::optional<Vector> linear_oracle(const HPolyhedron& P, const Vector& c)
{
    auto o = lp::minimize(P, c);
    if (o.status == lp::Status::infeasible)
        throw SolverError("infeasible");
    if (o.status == lp::Status::unbounded)
        return std::nullopt;
    return std::move(*o.point);
}

// Wolfe's minimum-norm-point method over a polytope given by a linear oracle.
Vector wolfe_min_norm_point(const HPolyhedron& P, Vector start, std::size_t& iterations)
{
    std::vector<Vector> corral{start};
    Vector lambda{Rational(1)};
    Vector x = std::move(start);
    for (;;) {
        ++iterations;
        auto s = linear_oracle(P, x);
        if (!s)
            throw SolverError("minimum-norm oracle unbounded");
        const Rational xx = dot(x, x);
        if (dot(*s, x) >= xx)
            return x;
        if (std::find(corral.begin(), corral.end(), *s) != corral.end())
            throw SolverError("minimum-norm corral stalled");
        corral.push_back(std::move(*s));
        lambda.push_back(0);
        for (;;) {
            // affine minimum-norm point of the corral
            const std::size_t m = corral.size();
            RationalMatrix K(m + 1, m + 1);
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = i; j < m; ++j)
                    K(i, j) = K(j, i) = dot(corral[i], corral[j]);
                K(i, m) = K(m, i) = 1;
            }
            Vector rhs(m + 1);
            rhs[m] = 1;
            auto sol = solve_square(K, rhs);
            if (!sol)
                throw SolverError("minimum-norm corral lost affine independence");
            Vector mu(sol->begin(), sol->begin() + static_cast<std::ptrdiff_t>(m));
            bool interior = true;
            for (const auto& v : mu)
                interior = interior && v > 0;
            if (interior) {
                lambda = std::move(mu);
                break;
            }
            // move toward mu until a weight hits zero, then drop those points
            Rational theta = 1;
            for (std::size_t i = 0; i < m; ++i)
                if (mu[i] <= 0 && lambda[i] - mu[i] > 0)
                    theta = std::min(theta, Rational(lambda[i] / (lambda[i] - mu[i])));
            std::vector<Vector> kept;
            Vector kept_lambda;
            for (std::size_t i = 0; i < m; ++i) {
                Rational l = (1 - theta) * lambda[i] + theta * mu[i];
                if (l > 0) {
                    kept.push_back(std::move(corral[i]));
                    kept_lambda.push_back(std::move(l));
                }
            }
            if (kept.size() == m)
                throw SolverError("minimum-norm minor cycle made no progress");
            corral = std::move(kept);
            lambda = std::move(kept_lambda);
        }
        x.assign(x.size(), Rational(0));
        for (std::size_t i = 0; i < corral.size(); ++i)
            for (std::size_t j = 0; j < x.size(); ++j)
                x[j] += lambda[i] * corral[i][j];
    }
}

std::string strip_comment(const std::string& line)
{
    auto pos = line.find('#');
    return pos == std::string::npos ? line : line.substr(0, pos);
}

}   // namespace

Sample Sample::parse(std::istream& in)
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
        throw ParseError("sample file: missing header 'n k'");
    const std::size_t n = parse_count(tokens[0], "sample size");
    const std::size_t k = parse_count(tokens[1], "dimension");
    if (n == 0 || k == 0)
        throw ParseError("sample file: n and k must be positive");
    if (tokens.size() != 2 + n * k)
        throw ParseError("sample file: expected " + std::to_string(n * k) + " entries, found " +
                         std::to_string(tokens.size() - 2));
    Sample S;
    for (std::size_t i = 0; i < n; ++i) {
        Vector p(k);
        for (std::size_t j = 0; j < k; ++j)
            p[j] = parse_rational(tokens[2 + i * k + j]);
        S.points.push_back(std::move(p));
    }
    return S;
}

Sample Sample::load(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open sample file '" + path + "'");
    return parse(in);
}

HPolyhedron build_lifted_polyhedron(const PolytopeNorm& N, const Sample& S)
{
    check_sample(N, S);
    const std::size_t k = N.dim(), n = S.size();
    HPolyhedron Q(k + n);
    Vector row(k + n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < N.size(); ++j) {
            std::fill(row.begin(), row.end(), Rational(0));
            for (std::size_t c = 0; c < k; ++c)
                row[c] = -N.row(j)[c];
            row[k + i] = -1;
            Q.add(row, -dot(N.row(j), S.points[i]));
        }
    return Q;
}

bool certify_min_norm_point(const HPolyhedron& Qp, const Vector& d)
{
    if (d.size() != Qp.dim() || !Qp.contains(d))
        return false;
    auto o = lp::minimize(Qp, d);
    return o.status == lp::Status::optimal && *o.value >= dot(d, d);
}

Vector min_norm_point(const HPolyhedron& Qp, const MinNormOptions& options, MinNormReport* report)
{
    MinNormReport local;
    MinNormReport& rep = report ? *report : local;
    rep = {};
    const std::size_t n = Qp.dim();

    auto first = lp::minimize(Qp, Vector(n, Rational(1)));
    if (first.status == lp::Status::infeasible)
        throw SolverError("infeasible");
    if (first.status == lp::Status::unbounded)
        throw SolverError("projection is not inside the nonnegative orthant");
    const Vector d0 = *first.point;
    const Rational D = *first.value;
    if (D == 0) {
        rep.frank_wolfe_certified = true;
        return d0;
    }

    // the minimum-norm point lies in the box [0, 2D]^n since ||d*|| <= ||d0|| <= 1.d0
    HPolyhedron boxed = Qp;
    for (std::size_t j = 0; j < n; ++j) {
        Vector e(n);
        e[j] = 1;
        boxed.add(e, 2 * D);
        e[j] = -1;
        boxed.add(e, 0);
    }

    const std::size_t cap = options.cap ? options.cap : 4 * n;
    Vector d = d0;
    for (std::size_t t = 0; t < cap; ++t) {
        auto s = linear_oracle(boxed, d);
        ++rep.frank_wolfe_iterations;
        const Vector u = *s - d;
        const Rational slope = dot(u, d);       // directional derivative / 2
        if (slope >= 0)
            break;
        Rational eta = -slope / dot(u, u);
        if (eta > 1)
            eta = 1;
        for (std::size_t j = 0; j < n; ++j)
            d[j] += eta * u[j];
        std::size_t bits = 0;
        for (const auto& x : d)
            bits = std::max(bits, bit_size(x));
        if (bits > options.bit_limit) {
            rep.bit_limit_hit = true;
            break;
        }
    }
    if (certify_min_norm_point(Qp, d)) {
        rep.frank_wolfe_certified = true;
        return d;
    }
    if (!options.allow_fallback)
        throw SolverError("frank-wolfe did not certify; increase cap");
    rep.fallback_used = true;
    Vector w = wolfe_min_norm_point(boxed, d0, rep.fallback_iterations);
    if (!certify_min_norm_point(Qp, w))
        throw SolverError("minimum-norm fallback failed its certificate");
    return w;
}

FMSetResult fm_set(const PolytopeNorm& N, const Sample& S, const MinNormOptions& options)
{
    check_sample(N, S);
    const std::size_t k = N.dim(), n = S.size();
    auto& stats = frechet_statistics();
    ++stats.solves;

    const HPolyhedron Q = build_lifted_polyhedron(N, S);
    std::vector<std::size_t> theta(k);
    for (std::size_t j = 0; j < k; ++j)
        theta[j] = j;
    FourierMotzkinOptions fmo;
    fmo.assume_irredundant = true;      // each lifted row is exposed by a polar vertex
    const HPolyhedron Qp = fourier_motzkin(Q, theta, fmo);

    FMSetResult R;
    R.distances = min_norm_point(Qp, options, &R.solver);
    if (R.solver.frank_wolfe_certified)
        ++stats.frank_wolfe_certified;
    if (R.solver.fallback_used)
        ++stats.fallbacks;
    if (R.solver.bit_limit_hit)
        ++stats.bit_limit_hits;

    R.fm_hrep = HPolyhedron(k);
    for (std::size_t j = 0; j < N.size(); ++j) {
        Rational rhs;
        for (std::size_t i = 0; i < n; ++i) {
            Rational v = R.distances[i] - dot(N.row(j), S.points[i]);
            if (i == 0 || v < rhs)
                rhs = std::move(v);
        }
        Vector a(k);
        for (std::size_t c = 0; c < k; ++c)
            a[c] = -N.row(j)[c];
        R.fm_hrep.add(a, rhs);
    }

    try {
        auto [eq, sp] = lp::affine_hull_and_slack_point(R.fm_hrep);
        R.implicit_rows = std::move(eq);
        R.witness = std::move(sp.point);
    }
    catch (const lp::EmptyPolyhedron&) {
        throw SolverError("Fréchet mean set is empty");
    }
    std::vector<Vector> normals;
    for (auto i : R.implicit_rows)
        normals.push_back(R.fm_hrep.A().row_vector(i));
    R.fm_dim = k - rank(normals);
    R.unique = R.fm_dim == 0;

    for (std::size_t i = 0; i < n; ++i)
        if (norm_eval(N, S.points[i] - R.witness) != R.distances[i])
            throw SolverError("witness distance does not match the minimum-norm point");

    bool positive = true;
    for (const auto& d : R.distances)
        positive = positive && d > 0;
    if (positive)
        R.face_type = face_type_of_sample(N, S, R);
    return R;
}

std::vector<PolarFace> face_type_of_sample(const PolytopeNorm& N, const Sample& S, const FMSetResult& R)
{
    check_sample(N, S);
    std::vector<PolarFace> out;
    for (std::size_t i = 0; i < S.size(); ++i) {
        if (R.distances.at(i) <= 0)
            throw std::invalid_argument("face type undefined: data point is a Fréchet mean");
        out.push_back(make_polar_face(N, active_constraints(N, R.witness - S.points[i])));
    }
    return out;
}

bool subgradient_certificate(const PolytopeNorm& N, const Vector& distances, const std::vector<PolarFace>& faces)
{
    const std::size_t k = N.dim();
    if (distances.size() != faces.size())
        throw DimensionError();
    std::size_t vars = 0;
    for (const auto& G : faces)
        vars += G.vertex_indices.size();
    HPolyhedron P(vars);
    RationalMatrix E(0, vars);
    Vector f;
    for (std::size_t v = 0; v < vars; ++v) {
        Vector row(vars);
        row[v] = -1;
        P.add(row, 0);
    }
    std::size_t col = 0;
    std::vector<Vector> balance(k, Vector(vars));
    for (std::size_t i = 0; i < faces.size(); ++i) {
        Vector sum(vars);
        for (auto j : faces[i].vertex_indices) {
            sum[col] = 1;
            for (std::size_t c = 0; c < k; ++c)
                balance[c][col] = distances[i] * N.row(j)[c];
            ++col;
        }
        E.append_row(sum);
        f.push_back(1);
    }
    for (const auto& row : balance) {
        E.append_row(row);
        f.push_back(0);
    }
    return lp::solve({Vector(vars), P, E, f}).status == lp::Status::optimal;
}

Rational frechet_function(const PolytopeNorm& N, const Sample& S, std::span<const Rational> theta)
{
    Rational total = 0;
    Vector diff(theta.size());
    for (const auto& x : S.points) {
        for (std::size_t j = 0; j < diff.size(); ++j)
            diff[j] = x[j] - theta[j];
        Rational d = norm_eval(N, diff);
        total += d * d;
    }
    return total;
}

std::vector<Vector> brute_force_fm_oracle(const PolytopeNorm& N, const Sample& S, const GridBox& box,
                                          const Rational& step, std::size_t max_points)
{
    check_sample(N, S);
    const std::size_t k = N.dim();
    if (step <= 0)
        throw std::invalid_argument("grid step must be positive");
    if (box.lo.size() != k || box.hi.size() != k)
        throw DimensionError();
    std::vector<std::size_t> counts(k);
    double total = 1;
    for (std::size_t j = 0; j < k; ++j) {
        if (box.hi[j] < box.lo[j])
            throw std::invalid_argument("empty grid box");
        Rational span = (box.hi[j] - box.lo[j]) / step;
        const double c = std::floor(span.convert_to<double>()) + 1;
        total *= c;
        if (total > static_cast<double>(max_points))
            throw std::invalid_argument("grid size guard exceeded");
        counts[j] = static_cast<std::size_t>(c);
    }
    std::vector<std::size_t> idx(k, 0);
    Vector theta = box.lo;
    std::vector<Vector> best;
    Rational best_value;
    for (;;) {
        Rational v = frechet_function(N, S, theta);
        if (best.empty() || v < best_value) {
            best_value = v;
            best.clear();
        }
        if (v == best_value)
            best.push_back(theta);
        std::size_t j = 0;
        while (j < k) {
            if (++idx[j] < counts[j]) {
                theta[j] += step;
                break;
            }
            idx[j] = 0;
            theta[j] = box.lo[j];
            ++j;
        }
        if (j == k)
            break;
    }
    return best;
}

std::vector<std::string> oracle_check(const PolytopeNorm& N, const Sample& S, const FMSetResult& R, const GridBox& box,
                                      const Rational& step)
{
    std::vector<std::string> failed;
    const auto grid = brute_force_fm_oracle(N, S, box, step);
    bool contained = true;
    for (const auto& g : grid)
        contained = contained && R.fm_hrep.contains(g);
    if (!contained)
        failed.emplace_back("grid_containment");
    if (!grid.empty() && frechet_function(N, S, grid.front()) < dot(R.distances, R.distances))
        failed.emplace_back("grid_lower_bound");
    if (!R.fm_hrep.contains(R.witness))
        failed.emplace_back("witness_in_set");
    bool equidistant = true;
    auto same_distances = [&](const Vector& p) {
        for (std::size_t i = 0; i < S.size(); ++i)
            if (norm_eval(N, S.points[i] - p) != R.distances[i])
                return false;
        return true;
    };
    equidistant = same_distances(R.witness);
    for (const auto& g : grid)
        if (R.fm_hrep.contains(g))
            equidistant = equidistant && same_distances(g);
    if (!equidistant)
        failed.emplace_back("equidistance");
    if (R.face_type && !subgradient_certificate(N, R.distances, *R.face_type))
        failed.emplace_back("subgradient");
    return failed;
}

}   // namespace polymean
