#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "polymean/faces.hpp"
#include "polymean/fourier_motzkin.hpp"
#include "polymean/linalg.hpp"
#include "polymean/lp.hpp"
#include "polymean/norm.hpp"
#include "test_helpers.hpp"

using namespace polymean;
using testing::hpoly;
using testing::q;
using testing::vec;

namespace {

std::size_t row_index(const PolytopeNorm& N, const Vector& v)
{
    for (std::size_t i = 0; i < N.size(); ++i)
        if (N.row_vector(i) == v)
            return i;
    FAIL("row not found");
    return 0;
}

}   // namespace

TEST_CASE("built-in norms and row orders")
{
    auto linf = PolytopeNorm::linf(2);
    REQUIRE(linf.size() == 4);
    CHECK(linf.row_vector(0) == vec({1, 0}));
    CHECK(linf.row_vector(1) == vec({-1, 0}));
    CHECK(linf.row_vector(2) == vec({0, 1}));
    CHECK(linf.row_vector(3) == vec({0, -1}));
    auto l1 = PolytopeNorm::l1(2);
    REQUIRE(l1.size() == 4);
    CHECK(l1.row_vector(0) == vec({1, 1}));
    CHECK(l1.row_vector(1) == vec({-1, 1}));
    CHECK(l1.row_vector(2) == vec({-1, -1}));
    CHECK(l1.row_vector(3) == vec({1, -1}));
    CHECK(PolytopeNorm::l1(4).size() == 16);
    for (std::size_t i = 0; i < l1.size(); ++i)
        CHECK(l1.row_vector(l1.opposite(i)) == Rational(-1) * l1.row_vector(i));
    CHECK(PolytopeNorm::from_name("linf:3").size() == 6);
    CHECK_THROWS_AS(PolytopeNorm::from_name("l2:3"), ParseError);
    CHECK_THROWS_AS(PolytopeNorm::from_name("linf:x"), ParseError);
}

TEST_CASE("norm invariants are enforced")
{
    CHECK_THROWS_AS(PolytopeNorm(RationalMatrix::from_rows({vec({1, 0}), vec({0, 1}), vec({-1, 0})})),
                    std::invalid_argument);
    CHECK_THROWS_AS(PolytopeNorm(RationalMatrix::from_rows({vec({1, 0}), vec({-1, 0})})), std::invalid_argument);
    CHECK_THROWS_AS(PolytopeNorm(RationalMatrix::from_rows({vec({1, 0}), vec({-1, 0}), vec({1, 0}), vec({-1, 0})})),
                    std::invalid_argument);
    // (1,0) is the midpoint of (1,1) and (1,-1)
    CHECK_THROWS_AS(PolytopeNorm(RationalMatrix::from_rows({vec({1, 1}), vec({-1, -1}), vec({1, -1}), vec({-1, 1}),
                                                            vec({1, 0}), vec({-1, 0})})),
                    std::invalid_argument);
    auto N = PolytopeNorm::from_symmetric_points({vec({1, 1}), vec({1, -1}), vec({1, 0})});
    CHECK(N.size() == 4);
}

TEST_CASE("norm file parsing")
{
    std::istringstream good("# hexagon\n6 2\n2/2 0\n-1 0\n0 1\n0 -1\n1 1 # corner\n-1 \xe2\x88\x92" "1\n");
    auto N = PolytopeNorm::parse(good, "hex");
    CHECK(N.size() == 6);
    CHECK(N.row_vector(0) == vec({1, 0}));
    CHECK(N.row_vector(5) == vec({-1, -1}));
    std::istringstream short_file("4 2\n1 0\n-1 0\n0 1\n");
    CHECK_THROWS_AS(PolytopeNorm::parse(short_file), ParseError);
    std::istringstream bad_number("2 1\n1\nabc\n");
    CHECK_THROWS_AS(PolytopeNorm::parse(bad_number), ParseError);
    std::istringstream asym("2 1\n1\n2\n");
    CHECK_THROWS_AS(PolytopeNorm::parse(asym), ParseError);
}

TEST_CASE("norm_eval")
{
    auto linf = PolytopeNorm::linf(2);
    auto l1 = PolytopeNorm::l1(2);
    CHECK(norm_eval(linf, vec({2, 1})) == 2);
    CHECK(norm_eval(l1, vec({2, 1})) == 3);
    CHECK(norm_eval(linf, vec({-4, -4})) == 4);
    CHECK(norm_eval(linf, vec({0, 0})) == 0);
    CHECK_THROWS_AS(norm_eval(linf, vec({1})), DimensionError);

    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
    auto rnd = [&](std::size_t k) {
        Vector v(k);
        for (auto& x : v)
            x = q(num(rng), den(rng));
        return v;
    };
    for (const auto& N : {PolytopeNorm::linf(3), PolytopeNorm::l1(3)})
        for (int t = 0; t < 100; ++t) {
            Vector x = rnd(3), y = rnd(3);
            Rational s = q(num(rng), den(rng));
            CHECK(norm_eval(N, s * x) == abs(s) * norm_eval(N, x));
            CHECK(norm_eval(N, x + y) <= norm_eval(N, x) + norm_eval(N, y));
            CHECK(norm_eval(N, x) >= 0);
        }
}

TEST_CASE("active_constraints")
{
    auto linf = PolytopeNorm::linf(2);
    auto l1 = PolytopeNorm::l1(2);
    CHECK(active_constraints(linf, vec({1, 0})) == std::vector<std::size_t>{0});
    CHECK(active_constraints(linf, vec({1, 1})) == std::vector<std::size_t>{0, 2});
    // l1 rows: (1,1)=2+1=3, (-1,1)=-1, (-1,-1)=-3, (1,-1)=1
    CHECK(active_constraints(l1, vec({2, 1})) == std::vector<std::size_t>{0});
    CHECK_THROWS_WITH(active_constraints(linf, vec({0, 0})), "active set undefined at origin");
}

TEST_CASE("is_polar_face")
{
    auto l1 = PolytopeNorm::l1(2);
    auto i11 = row_index(l1, vec({1, 1})), i1m = row_index(l1, vec({1, -1})), imm = row_index(l1, vec({-1, -1}));
    CHECK(is_polar_face(l1, {i11, i1m}));
    CHECK_FALSE(is_polar_face(l1, {i11, imm}));
    auto linf3 = PolytopeNorm::linf(3);
    CHECK(is_polar_face(linf3, {row_index(linf3, vec({1, 0, 0})), row_index(linf3, vec({0, -1, 0}))}));
    CHECK_FALSE(is_polar_face(linf3, {row_index(linf3, vec({1, 0, 0})), row_index(linf3, vec({-1, 0, 0}))}));
    CHECK(is_polar_face(linf3, {0}));
}

TEST_CASE("enumerate_polar_faces")
{
    auto count_by_dim = [](const std::vector<PolarFace>& fs, std::size_t k) {
        std::vector<std::size_t> c(k, 0);
        for (const auto& f : fs)
            ++c[f.dim];
        return c;
    };
    auto sq = enumerate_polar_faces(PolytopeNorm::l1(2));
    CHECK(sq.size() == 8);
    CHECK(count_by_dim(sq, 2) == std::vector<std::size_t>{4, 4});
    auto oct = enumerate_polar_faces(PolytopeNorm::linf(3));
    CHECK(count_by_dim(oct, 3) == std::vector<std::size_t>{6, 12, 8});
    auto cube = enumerate_polar_faces(PolytopeNorm::l1(3));
    CHECK(count_by_dim(cube, 3) == std::vector<std::size_t>{8, 12, 6});
    CHECK(enumerate_polar_faces(PolytopeNorm::l1(3), 1).size() == 20);
    CHECK(std::is_sorted(cube.begin(), cube.end(), canonical_less));
    CHECK_THROWS_WITH(enumerate_polar_faces(PolytopeNorm::l1(5)), "face enumeration too large");
    CHECK(ball_vertices(PolytopeNorm::linf(3)).size() == 8);
    CHECK(ball_vertices(PolytopeNorm::l1(3)).size() == 6);
}

TEST_CASE("face fan partitions space")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> num(-3, 3);
    for (const auto& N : {PolytopeNorm::linf(3), PolytopeNorm::l1(3)}) {
        auto faces = enumerate_polar_faces(N);
        for (int t = 0; t < 200; ++t) {
            Vector x = vec({num(rng), num(rng), num(rng)});
            if (is_zero(x))
                continue;
            auto act = active_constraints(N, x);
            int hits = 0;
            for (const auto& f : faces)
                hits += f.vertex_indices == act;
            CHECK(hits == 1);
        }
    }
}

TEST_CASE("polar duality on facets")
{
    // every ball vertex determines a polar facet, and every polar vertex a ball facet
    for (const auto& N : {PolytopeNorm::linf(3), PolytopeNorm::l1(3)}) {
        auto faces = enumerate_polar_faces(N);
        for (const auto& v : ball_vertices(N)) {
            auto act = active_constraints(N, v);
            auto it = std::find_if(faces.begin(), faces.end(), [&](const PolarFace& f) { return f.vertex_indices == act; });
            REQUIRE(it != faces.end());
            CHECK(it->dim == N.dim() - 1);
        }
        std::size_t vertices = 0;
        for (const auto& f : faces)
            vertices += f.dim == 0;
        CHECK(vertices == N.size());
    }
}

TEST_CASE("minkowski_dim_of_affine_sum")
{
    auto linf3 = PolytopeNorm::linf(3);
    CHECK(minkowski_dim_of_affine_sum({make_polar_face(linf3, {0})}, linf3) == 0);
    std::vector<PolarFace> cyc;
    for (std::size_t i = 0; i < 3; ++i) {
        Vector e(3), f(3);
        e[i] = 1;
        f[(i + 1) % 3] = -1;
        cyc.push_back(make_polar_face(linf3, {row_index(linf3, e), row_index(linf3, f)}));
    }
    CHECK(minkowski_dim_of_affine_sum(cyc, linf3) == 3);

    auto l13 = PolytopeNorm::l1(3);
    std::vector<std::size_t> facet;
    for (std::size_t i = 0; i < l13.size(); ++i)
        if (l13.row(i)[0] == -1)
            facet.push_back(i);
    std::vector<PolarFace> cross = {
        make_polar_face(l13, facet),
        make_polar_face(l13, {row_index(l13, vec({1, 1, 1}))}),
        make_polar_face(l13, {row_index(l13, vec({1, -1, -1})), row_index(l13, vec({-1, -1, -1}))}),
    };
    CHECK(cross[0].dim == 2);
    CHECK(minkowski_dim_of_affine_sum(cross, l13) == 3);
}

TEST_CASE("fourier_motzkin: small cases")
{
    // x - y <= 0, y <= 1  ->  x <= 1
    auto P = hpoly({{1, -1, 0}, {0, 1, 1}});
    auto R = fourier_motzkin(P, {1});
    REQUIRE(R.size() == 1);
    CHECK(R.normal(0)[0] == 1);
    CHECK(R.rhs(0) == 1);

    auto cube = hpoly({{1, 0, 0, 1}, {-1, 0, 0, 0}, {0, 1, 0, 1}, {0, -1, 0, 0}, {0, 0, 1, 1}, {0, 0, -1, 0}});
    auto sq = fourier_motzkin(cube, {2});
    CHECK(sq.size() == 4);
    CHECK(sq.dim() == 2);
    CHECK(oracle::vertices(sq) == std::vector<Vector>{vec({0, 0}), vec({0, 1}), vec({1, 0}), vec({1, 1})});

    auto empty = hpoly({{1, 1, 0}, {-1, 0, -1}, {0, -1, 0}});
    auto E = fourier_motzkin(empty, {0});
    REQUIRE(E.size() == 1);
    CHECK(E.rhs(0) == -1);
    CHECK_FALSE(lp::is_feasible(E));

    CHECK_THROWS_AS(fourier_motzkin(P, {0, 1}), std::invalid_argument);
}

TEST_CASE("fourier_motzkin: 2-point linf lifted polyhedron")
{
    // variables (t1, t2, d1, d2), x1 = (0,0), x2 = (2,1)
    auto N = PolytopeNorm::linf(2);
    const std::vector<Vector> pts = {vec({0, 0}), vec({2, 1})};
    HPolyhedron Q(4);
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t r = 0; r < N.size(); ++r) {
            Vector row = {-N.row(r)[0], -N.row(r)[1], 0, 0};
            row[2 + i] = -1;
            Q.add(row, -dot(N.row(r), pts[i]));
        }
    auto Qp = fourier_motzkin(Q, {0, 1});
    CHECK(Qp.dim() == 2);
    // grid oracle: max distances from theta in [-1,3]^2 step 1/4; d1 + d2 >= 2 with equality at (1,1)
    Rational best = -1;
    for (Rational a = -1; a <= 3; a += q(1, 4))
        for (Rational b = -1; b <= 3; b += q(1, 4)) {
            Vector th{a, b};
            Rational s = oracle::norm({vec({1, 0}), vec({-1, 0}), vec({0, 1}), vec({0, -1})}, pts[0] - th) +
                         oracle::norm({vec({1, 0}), vec({-1, 0}), vec({0, 1}), vec({0, -1})}, pts[1] - th);
            if (best < 0 || s < best)
                best = s;
        }
    CHECK(best == 2);
    auto o = lp::minimize(Qp, vec({1, 1}));
    CHECK(*o.value == best);
    CHECK(Qp.contains(vec({1, 1})));
    CHECK_FALSE(Qp.contains(Vector{q(1), q(99, 100)}));
}

TEST_CASE("fourier_motzkin agrees with vertex projection")
{
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> coef(-5, 5), rhs(1, 9), dimd(2, 4), den(1, 4);
    int checked = 0;
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t d = dimd(rng);
        HPolyhedron P(d);
        // bounding box keeps P bounded, random cuts through a neighborhood of the origin
        for (std::size_t j = 0; j < d; ++j) {
            Vector e(d);
            e[j] = 1;
            P.add(e, q(rhs(rng)));
            e[j] = -1;
            P.add(e, q(rhs(rng)));
        }
        const std::size_t extra = std::min<std::size_t>(10 - 2 * d, 3);
        for (std::size_t i = 0; i < extra; ++i) {
            Vector a(d);
            for (auto& x : a)
                x = q(coef(rng), den(rng));
            P.add(a, q(rhs(rng), den(rng)));
        }
        std::vector<std::size_t> elim;
        for (std::size_t j = 0; j < d; ++j)
            if (j % 2 == 1 || (j == d - 1 && elim.empty()))
                elim.push_back(j);
        auto R = fourier_motzkin(P, elim);
        auto V = oracle::vertices(P);
        REQUIRE_FALSE(V.empty());
        std::vector<Vector> proj;
        for (const auto& v : V) {
            Vector p;
            for (std::size_t j = 0; j < d; ++j)
                if (std::find(elim.begin(), elim.end(), j) == elim.end())
                    p.push_back(v[j]);
            proj.push_back(p);
        }
        for (int dir = 0; dir < 10; ++dir) {
            Vector c(R.dim());
            for (auto& x : c)
                x = q(coef(rng), den(rng));
            auto o = lp::minimize(R, Rational(-1) * c);
            REQUIRE(o.status == lp::Status::optimal);
            CHECK(-*o.value == oracle::support(proj, c));
            ++checked;
        }
    }
    CHECK(checked == 150);
}
