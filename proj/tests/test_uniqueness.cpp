#include <doctest.h>

#include <algorithm>
#include <random>

#include "polymean/linalg.hpp"
#include "polymean/uniqueness.hpp"
#include "test_helpers.hpp"

using namespace polymean;
using testing::vec;

namespace {

PolarFace face(const PolytopeNorm& N, const std::vector<Vector>& vs)
{
    std::vector<std::size_t> idx;
    for (const auto& v : vs)
        for (std::size_t i = 0; i < N.size(); ++i)
            if (N.row_vector(i) == v)
                idx.push_back(i);
    REQUIRE(idx.size() == vs.size());
    return make_polar_face(N, idx);
}

Vector e(std::size_t k, std::size_t i, int s = 1)
{
    Vector v(k);
    v[i] = s;
    return v;
}

std::vector<PolarFace> linf_cyclic(const PolytopeNorm& N)
{
    const std::size_t k = N.dim();
    std::vector<PolarFace> out;
    for (std::size_t i = 0; i < k; ++i)
        out.push_back(face(N, {e(k, i), e(k, (i + 1) % k, -1)}));
    return out;
}

std::vector<PolarFace> l1_construction(const PolytopeNorm& N)
{
    const std::size_t k = N.dim();
    std::vector<Vector> facet;
    for (std::size_t i = 0; i < N.size(); ++i)
        if (N.row(i)[0] == -1)
            facet.push_back(N.row_vector(i));
    Vector ones(k, Rational(1)), lo(k, Rational(-1)), hi(k, Rational(-1));
    hi[0] = 1;
    return {face(N, facet), face(N, {ones}), face(N, {hi, lo})};
}

}   // namespace

TEST_CASE("check_possible")
{
    auto N = PolytopeNorm::linf(3);
    CHECK_FALSE(check_possible(N, {face(N, {e(3, 0)})}));
    CHECK(check_possible(N, {face(N, {e(3, 0)}), face(N, {e(3, 0, -1)})}));
    auto C = PolytopeNorm::l1(3);
    CHECK(check_possible(C, l1_construction(C)));
}

TEST_CASE("check_positive_probability")
{
    auto N = PolytopeNorm::linf(3);
    CHECK(check_positive_probability(N, {face(N, {e(3, 0)}), face(N, {e(3, 1)}), face(N, {e(3, 2, -1)})}));
    CHECK(check_positive_probability(N, linf_cyclic(N)));
    auto M = PolytopeNorm::linf(2);
    // directions e1 + e2 twice: rank 1 < 2
    CHECK_FALSE(check_positive_probability(M, {face(M, {e(2, 0), e(2, 1, -1)}), face(M, {e(2, 1), e(2, 0, -1)})}));
}

TEST_CASE("check_unique")
{
    auto M = PolytopeNorm::linf(2);
    CHECK_FALSE(check_unique(M, {face(M, {e(2, 0)}), face(M, {e(2, 0, -1)})}));
    CHECK(check_unique(M, {face(M, {e(2, 0, -1)}), face(M, {e(2, 1, -1)}), face(M, {e(2, 0), e(2, 1)})}));
    auto C = PolytopeNorm::l1(3);
    CHECK(check_unique(C, l1_construction(C)));
}

TEST_CASE("condition_report")
{
    auto N = PolytopeNorm::linf(3);
    CHECK(condition_report(N, linf_cyclic(N)) == ConditionReport{true, true, true, 0});
    auto C = PolytopeNorm::l1(3);
    CHECK(condition_report(C, l1_construction(C)) == ConditionReport{true, true, true, 0});
    for (const auto& P : {PolytopeNorm::linf(3), PolytopeNorm::l1(3)})
        for (std::size_t i = 0; i < P.size(); ++i) {
            auto r = condition_report(P, {make_polar_face(P, {i}), make_polar_face(P, {P.opposite(i)})});
            CHECK(r == ConditionReport{true, true, false, 2});
        }
}

TEST_CASE("condition_report is symmetric under permutation")
{
    auto C = PolytopeNorm::l1(3);
    auto faces = l1_construction(C);
    faces.push_back(face(C, {vec({1, -1, 1})}));
    const auto ref = condition_report(C, faces);
    std::sort(faces.begin(), faces.end(), canonical_less);
    do {
        CHECK(condition_report(C, faces) == ref);
    } while (std::next_permutation(faces.begin(), faces.end(), canonical_less));
}

TEST_CASE("check_inductive_extension")
{
    auto N = PolytopeNorm::linf(3);
    auto cyc = linf_cyclic(N);
    for (auto v : cyc[0].vertex_indices)
        CHECK(check_inductive_extension(N, cyc, make_polar_face(N, {v})));
    auto C = PolytopeNorm::l1(3);
    auto cons = l1_construction(C);
    CHECK(check_inductive_extension(C, cons, face(C, {vec({-1, 1, 1})})));
    // failing tuple: vacuous
    CHECK(check_inductive_extension(N, {face(N, {e(3, 0)})}, face(N, {e(3, 0)})));
    CHECK_THROWS_WITH(check_inductive_extension(N, cyc, face(N, {e(3, 2)})), "not a facet extension");
    CHECK_THROWS_WITH(check_inductive_extension(N, cyc, cyc[0]), "not a facet extension");
}

TEST_CASE("the even-k cyclic edge tuple fails positive probability; another witness exists")
{
    auto N = PolytopeNorm::linf(4);
    auto cyc = linf_cyclic(N);
    // e1+e2, e2+e3, e3+e4, e4+e1 are dependent
    CHECK(minkowski_dim_of_affine_sum(cyc, N) == 3);
    CHECK_FALSE(condition_report(N, cyc).passes());
    std::vector<PolarFace> alt = {face(N, {e(4, 0), e(4, 1, -1), e(4, 2)}), face(N, {e(4, 0, -1), e(4, 3)}),
                                  face(N, {e(4, 2, -1), e(4, 3, -1)}), face(N, {e(4, 1)})};
    CHECK(condition_report(N, alt).passes());
}

TEST_CASE("threshold_search on small built-ins")
{
    auto c2 = threshold_search(PolytopeNorm::linf(2), 4);
    CHECK(c2.N == 3);
    CHECK(condition_report(PolytopeNorm::linf(2), c2.witness_faces).passes());
    REQUIRE(c2.refutations.size() == 1);
    CHECK(c2.refutations[0].total == binomial(8 + 1, 2));
    CHECK(c2.refutations[0].rejected() == c2.refutations[0].total);
    CHECK(threshold_search(PolytopeNorm::linf(3), 4).N == 3);
    CHECK(threshold_search(PolytopeNorm::l1(2), 4).N == 3);
    CHECK(threshold_search(PolytopeNorm::l1(3), 4).N == 3);

    try {
        threshold_search(PolytopeNorm::linf(4), 3);
        FAIL("expected ThresholdNotFound");
    }
    catch (const ThresholdNotFound& e) {
        REQUIRE(e.partial().refutations.size() == 2);
        CHECK(e.partial().refutations[1].n == 3);
        CHECK(e.partial().refutations[1].rejected() == binomial(80 + 2, 3));
    }
    auto text = to_text(c2, PolytopeNorm::linf(2));
    CHECK(text.find("N = 3") != std::string::npos);
    CHECK(text.find("refuted n=2 total=36") != std::string::npos);
}

TEST_CASE("binomial")
{
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(3, 5) == 0);
    CHECK(binomial(245, 4) == 146475945ull);
    CHECK_THROWS_AS(binomial(200, 100), std::overflow_error);
}

TEST_CASE("no 2-tuple passes for built-ins up to k = 3")
{
    for (std::size_t k = 2; k <= 3; ++k)
        for (const auto& N : {PolytopeNorm::linf(k), PolytopeNorm::l1(k)}) {
            auto r = count_tuples(N, 2);
            CHECK(r.passing == 0);
            CHECK(r.rejected() == r.total);
            // cross-check the search against direct evaluation of every pair
            auto faces = enumerate_polar_faces(N);
            std::uint64_t pairs = 0, passing = 0;
            for (std::size_t i = 0; i < faces.size(); ++i)
                for (std::size_t j = i; j < faces.size(); ++j) {
                    ++pairs;
                    passing += condition_report(N, {faces[i], faces[j]}).passes();
                }
            CHECK(pairs == r.total);
            CHECK(passing == 0);
        }
}

TEST_CASE("appending a contained facet keeps passing tuples passing")
{
    for (const auto& N : {PolytopeNorm::linf(3), PolytopeNorm::l1(3), PolytopeNorm::linf(2)}) {
        std::size_t seen = 0;
        ThresholdOptions opt;
        opt.on_pass = [&](const std::vector<PolarFace>& tuple) {
            ++seen;
            for (const auto& first : tuple) {
                std::vector<PolarFace> rotated = {first};
                bool skipped = false;
                for (const auto& G : tuple) {
                    if (!skipped && G == first) {
                        skipped = true;
                        continue;
                    }
                    rotated.push_back(G);
                }
                for (auto v : first.vertex_indices)
                    CHECK(check_inductive_extension(N, rotated, make_polar_face(N, {v})));
            }
        };
        auto cert = threshold_search(N, 4, opt);
        CHECK(cert.N == 3);
        CHECK(seen > 0);
    }
}

TEST_CASE("search agrees with direct evaluation at the threshold level")
{
    auto N = PolytopeNorm::linf(2);
    auto faces = enumerate_polar_faces(N);
    std::uint64_t direct = 0;
    for (std::size_t a = 0; a < faces.size(); ++a)
        for (std::size_t b = a; b < faces.size(); ++b)
            for (std::size_t c = b; c < faces.size(); ++c)
                direct += condition_report(N, {faces[a], faces[b], faces[c]}).passes();
    auto r = count_tuples(N, 3);
    CHECK(r.passing == direct);
    CHECK(r.passing + r.rejected() == r.total);
}
