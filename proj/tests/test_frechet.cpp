#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "polymean/frechet.hpp"
#include "polymean/fourier_motzkin.hpp"
#include "polymean/linalg.hpp"
#include "polymean/lp.hpp"
#include "test_helpers.hpp"

using namespace polymean;
using testing::hpoly;
using testing::q;
using testing::vec;

namespace {

std::vector<Vector> rows_of(const PolytopeNorm& N)
{
    std::vector<Vector> r;
    for (std::size_t i = 0; i < N.size(); ++i)
        r.push_back(N.row_vector(i));
    return r;
}

std::vector<std::size_t> indices_of(const PolytopeNorm& N, const std::vector<Vector>& vs)
{
    std::vector<std::size_t> out;
    for (const auto& v : vs)
        for (std::size_t i = 0; i < N.size(); ++i)
            if (N.row_vector(i) == v)
                out.push_back(i);
    std::sort(out.begin(), out.end());
    return out;
}

}   // namespace

TEST_CASE("sample parsing")
{
    std::istringstream in("# two points\n2 2\n0 0\n2 1\n");
    auto S = Sample::parse(in);
    CHECK(S.size() == 2);
    CHECK(S.points[1] == vec({2, 1}));
    std::istringstream bad("2 2\n0 0\n2\n");
    CHECK_THROWS_AS(Sample::parse(bad), ParseError);
    std::istringstream junk("2 2\n0 0\n2 x\n");
    CHECK_THROWS_AS(Sample::parse(junk), ParseError);
}

TEST_CASE("build_lifted_polyhedron")
{
    auto N = PolytopeNorm::linf(2);
    auto Q1 = build_lifted_polyhedron(N, Sample{{vec({0, 0})}});
    CHECK(Q1.size() == 4);
    CHECK(Q1.contains(vec({0, 0, 0})));
    CHECK(build_lifted_polyhedron(N, Sample{{vec({0, 0}), vec({2, 1})}}).size() == 8);
    CHECK(build_lifted_polyhedron(PolytopeNorm::l1(2), Sample{{vec({-4, -4}), vec({1, 2}), vec({2, -1})}}).size() == 12);
    CHECK_THROWS_AS(build_lifted_polyhedron(N, Sample{{vec({0, 0, 1})}}), DimensionError);
}

TEST_CASE("min_norm_point")
{
    // d1 + d2 >= 2, d >= 0
    auto P = hpoly({{-1, -1, -2}, {-1, 0, 0}, {0, -1, 0}});
    CHECK(min_norm_point(P) == vec({1, 1}));
    auto E = hpoly({{1, 0, -1}, {-1, 0, 0}, {0, -1, 0}});
    CHECK_THROWS_WITH(min_norm_point(E), "infeasible");
    // a long, thin face forces many Frank–Wolfe steps
    auto T = hpoly({{-1, -5, -7}, {-5, -1, -7}, {-1, 0, 0}, {0, -1, 0}});
    MinNormOptions strict;
    strict.cap = 1;
    strict.allow_fallback = false;
    MinNormReport rep;
    Vector d = min_norm_point(T, {}, &rep);
    CHECK(d == Vector{q(7, 6), q(7, 6)});
    CHECK(certify_min_norm_point(T, d));
    CHECK_FALSE(certify_min_norm_point(T, vec({2, 2})));
}

TEST_CASE("fm_set: two points under linf")
{
    auto N = PolytopeNorm::linf(2);
    Sample S{{vec({0, 0}), vec({2, 1})}};
    auto R = fm_set(N, S);
    CHECK(R.distances == vec({1, 1}));
    CHECK(R.fm_dim == 1);
    CHECK_FALSE(R.unique);
    CHECK(R.witness == Vector{q(1), q(1, 2)});
    // oracle: vertices of the H-rep are (1,0), (1,1)
    CHECK(oracle::vertices(R.fm_hrep) == std::vector<Vector>{vec({1, 0}), vec({1, 1})});
    // the implicit equalities are exactly the two rows pinning theta_1 = 1
    REQUIRE(R.implicit_rows.size() == 2);
    for (auto i : R.implicit_rows) {
        CHECK(R.fm_hrep.normal(i)[1] == 0);
        CHECK(abs(R.fm_hrep.rhs(i)) == 1);
    }
    REQUIRE(R.face_type);
    CHECK((*R.face_type)[0].vertex_indices == indices_of(N, {vec({1, 0})}));
    CHECK((*R.face_type)[1].vertex_indices == indices_of(N, {vec({-1, 0})}));

    auto grid = brute_force_fm_oracle(N, S, {vec({-1, -1}), vec({3, 3})}, q(1, 4));
    auto indep = oracle::grid_minimizers(rows_of(N), S.points, -1, 3, -1, 3, q(1, 4));
    CHECK(grid == indep);
    CHECK(grid.size() == 5);
    for (const auto& g : grid) {
        CHECK(g[0] == 1);
        CHECK(R.fm_hrep.contains(g));
    }
}

TEST_CASE("fm_set: three points under linf")
{
    auto N = PolytopeNorm::linf(2);
    Sample S{{vec({-4, -4}), vec({1, 2}), vec({2, -1})}};
    auto R = fm_set(N, S);
    CHECK(R.distances == vec({4, 2, 2}));
    CHECK(R.unique);
    CHECK(R.fm_dim == 0);
    CHECK(R.witness == vec({0, 0}));
    REQUIRE(R.face_type);
    CHECK((*R.face_type)[0].vertex_indices == indices_of(N, {vec({1, 0}), vec({0, 1})}));
    CHECK((*R.face_type)[1].vertex_indices == indices_of(N, {vec({0, -1})}));
    CHECK((*R.face_type)[2].vertex_indices == indices_of(N, {vec({-1, 0})}));
    CHECK(subgradient_certificate(N, R.distances, *R.face_type));
}

TEST_CASE("fm_set: four points under linf, non-unique")
{
    auto N = PolytopeNorm::linf(2);
    Sample S{{vec({0, 0}), vec({4, 2}), vec({-4, 1}), vec({8, -1})}};
    auto R = fm_set(N, S);
    CHECK(R.distances == vec({2, 2, 6, 6}));
    CHECK(R.fm_dim == 1);
    CHECK(oracle::vertices(R.fm_hrep) == std::vector<Vector>{vec({2, 0}), vec({2, 2})});
    auto grid = oracle::grid_minimizers(rows_of(N), S.points, -6, 10, -4, 4, q(1, 8));
    CHECK(grid.size() == 17);
    for (const auto& g : grid)
        CHECK(R.fm_hrep.contains(g));
    // grid minimum is attained on the segment, so it equals the exact optimum
    CHECK(frechet_function(N, S, grid.front()) == dot(R.distances, R.distances));
}

TEST_CASE("fm_set: single point and degenerate face types")
{
    auto N = PolytopeNorm::l1(3);
    Sample S{{Vector{q(1, 3), q(-2), q(5, 7)}}};
    auto R = fm_set(N, S);
    CHECK(R.unique);
    CHECK(R.witness == S.points[0]);
    CHECK(R.distances == vec({0}));
    CHECK_FALSE(R.face_type);
    CHECK_THROWS_WITH(face_type_of_sample(N, S, R), "face type undefined: data point is a Fréchet mean");
}

TEST_CASE("brute_force_fm_oracle guards")
{
    auto N = PolytopeNorm::l1(2);
    Sample S{{vec({0, 0}), vec({2, 0})}};
    CHECK_THROWS_WITH(brute_force_fm_oracle(N, S, {vec({-100, -100}), vec({100, 100})}, q(1, 64)),
                      "grid size guard exceeded");
    auto R = fm_set(N, S);
    auto grid = brute_force_fm_oracle(N, S, {vec({-1, -2}), vec({3, 2})}, q(1, 4));
    CHECK(grid == oracle::grid_minimizers(rows_of(N), S.points, -1, 3, -2, 2, q(1, 4)));
    for (const auto& g : grid)
        CHECK(R.fm_hrep.contains(g));
    CHECK(brute_force_fm_oracle(N, Sample{{vec({1, 1})}}, {vec({0, 0}), vec({2, 2})}, q(1, 2)) ==
          std::vector<Vector>{vec({1, 1})});
}

TEST_CASE("two random points give a mean set of dimension k - 1")
{
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> num(-1000, 1000);
    for (const auto& N : {PolytopeNorm::linf(2), PolytopeNorm::linf(3), PolytopeNorm::l1(3)})
        for (int t = 0; t < 5; ++t) {
            Sample S;
            for (int i = 0; i < 2; ++i) {
                Vector p(N.dim());
                for (auto& x : p)
                    x = q(num(rng), 997);
                S.points.push_back(p);
            }
            auto R = fm_set(N, S);
            CHECK(R.fm_dim == N.dim() - 1);
        }
}

TEST_CASE("oracle_check passes on solver output and names corrupted invariants")
{
    auto N = PolytopeNorm::linf(2);
    Sample S{{vec({0, 0}), vec({4, 2}), vec({-4, 1}), vec({8, -1})}};
    auto R = fm_set(N, S);
    GridBox box{vec({-6, -4}), vec({10, 4})};
    CHECK(oracle_check(N, S, R, box, q(1, 4)).empty());

    // shrink the set to theta_2 <= 1: grid minimizers with theta_2 > 1 fall outside
    auto bad = R;
    bad.fm_hrep.add(vec({0, 1}), 1);
    auto failed = oracle_check(N, S, bad, box, q(1, 4));
    REQUIRE_FALSE(failed.empty());
    CHECK(failed.front() == "grid_containment");

    auto wrong_d = R;
    wrong_d.distances[0] += 1;
    failed = oracle_check(N, S, wrong_d, box, q(1, 4));
    CHECK(std::find(failed.begin(), failed.end(), "equidistance") != failed.end());
}
