#include "polymean/faces.hpp"

#include <algorithm>
#include <set>

#include "polymean/hpolyhedron.hpp"
#include "polymean/linalg.hpp"
#include "polymean/lp.hpp"

namespace polymean {

bool canonical_less(const PolarFace& a, const PolarFace& b)
{
    if (a.dim != b.dim)
        return a.dim < b.dim;
    return a.vertex_indices < b.vertex_indices;
}

std::vector<Vector> face_vertices(const PolytopeNorm& N, const PolarFace& G)
{
    std::vector<Vector> out;
    out.reserve(G.vertex_indices.size());
    for (auto i : G.vertex_indices)
        out.push_back(N.row_vector(i));
    return out;
}

PolarFace make_polar_face(const PolytopeNorm& N, std::vector<std::size_t> indices)
{
    std::sort(indices.begin(), indices.end());
    indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
    if (indices.empty())
        throw std::invalid_argument("empty face");
    if (indices.back() >= N.size())
        throw std::invalid_argument("face index out of range");
    PolarFace G{std::move(indices), 0};
    G.dim = affine_dim(face_vertices(N, G));
    return G;
}

bool is_polar_face(const PolytopeNorm& N, const std::vector<std::size_t>& S)
{
    const std::size_t k = N.dim();
    if (S.empty())
        throw std::invalid_argument("empty index set");
    std::vector<bool> in(N.size(), false);
    for (auto i : S) {
        if (i >= N.size())
            throw std::invalid_argument("face index out of range");
        in[i] = true;
    }
    // variables (c_1..c_k, c0, t): maximize t
    HPolyhedron P(k + 2);
    RationalMatrix E(0, k + 2);
    Vector f;
    for (std::size_t i = 0; i < N.size(); ++i) {
        Vector row(k + 2);
        for (std::size_t j = 0; j < k; ++j)
            row[j] = N.row(i)[j];
        row[k] = -1;
        if (in[i]) {
            E.append_row(row);
            f.push_back(0);
        }
        else {
            row[k + 1] = 1;
            P.add(row, 0);
        }
    }
    Vector cap(k + 2);
    cap[k + 1] = 1;
    P.add(cap, 1);
    Vector obj(k + 2);
    obj[k + 1] = -1;
    auto o = lp::solve({obj, P, E, f});
    return o.status == lp::Status::optimal && (*o.point)[k + 1] > 0;
}

std::vector<Vector> ball_vertices(const PolytopeNorm& N)
{
    const std::size_t r = N.size(), k = N.dim();
    std::set<Vector> found;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i)
        idx[i] = i;
    const Vector ones(k, Rational(1));
    while (true) {
        RationalMatrix M(k, k);
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                M(i, j) = N.row(idx[i])[j];
        if (auto x = solve_square(M, ones)) {
            bool inside = true;
            for (std::size_t i = 0; i < r && inside; ++i)
                inside = dot(N.row(i), *x) <= 1;
            if (inside)
                found.insert(std::move(*x));
        }
        // next k-subset in lexicographic order
        std::size_t p = k;
        while (p > 0 && idx[p - 1] == r - k + p - 1)
            --p;
        if (p == 0)
            break;
        ++idx[p - 1];
        for (std::size_t i = p; i < k; ++i)
            idx[i] = idx[i - 1] + 1;
    }
    return {found.begin(), found.end()};
}

std::vector<PolarFace> enumerate_polar_faces(const PolytopeNorm& N, std::optional<std::size_t> max_dim, bool force)
{
    const std::size_t r = N.size();
    if (r > 64 || (r > face_enumeration_row_limit && !force))
        throw FaceEnumerationTooLarge();
    using Mask = std::uint64_t;
    const Mask full = r == 64 ? ~Mask{0} : (Mask{1} << r) - 1;

    // facets of the polar are the vertex sets {j : a_j . v = 1} for vertices v of B
    std::set<Mask> faces;
    std::vector<Mask> facets;
    for (const auto& v : ball_vertices(N)) {
        Mask m = 0;
        for (std::size_t j = 0; j < r; ++j)
            if (dot(N.row(j), v) == 1)
                m |= Mask{1} << j;
        if (faces.insert(m).second)
            facets.push_back(m);
    }
    // every nonempty face is an intersection of facets
    std::vector<Mask> frontier(facets.begin(), facets.end());
    while (!frontier.empty()) {
        std::vector<Mask> next;
        for (Mask a : frontier)
            for (Mask b : facets) {
                Mask c = a & b;
                if (c != 0 && faces.insert(c).second)
                    next.push_back(c);
            }
        frontier = std::move(next);
    }
    std::vector<PolarFace> out;
    for (Mask m : faces) {
        if (m == full)
            continue;
        std::vector<std::size_t> idx;
        for (std::size_t j = 0; j < r; ++j)
            if ((m >> j) & 1)
                idx.push_back(j);
        PolarFace G = make_polar_face(N, std::move(idx));
        if (max_dim && G.dim > *max_dim)
            continue;
        if (!is_polar_face(N, G.vertex_indices))
            throw std::logic_error("face enumeration produced a non-face");
        out.push_back(std::move(G));
    }
    std::sort(out.begin(), out.end(), canonical_less);
    return out;
}

std::size_t minkowski_dim_of_affine_sum(const std::vector<PolarFace>& faces, const PolytopeNorm& N)
{
    std::vector<Vector> dirs;
    for (const auto& G : faces) {
        const auto v0 = N.row_vector(G.vertex_indices.front());
        for (std::size_t i = 1; i < G.vertex_indices.size(); ++i)
            dirs.push_back(N.row_vector(G.vertex_indices[i]) - v0);
    }
    if (dirs.empty())
        return 0;
    return rank(dirs);
}

}   // namespace polymean
