/**
 * Faces of the polar polytope conv(rows of A), identified by the sorted set of
 * row indices they contain. A polar face G determines the face
 * {x in B : a.x = 1 for all a in G} of the unit ball.
 */

#ifndef POLYMEAN_FACES_HPP
#define POLYMEAN_FACES_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "polymean/norm.hpp"

namespace polymean {

struct PolarFace
{
    std::vector<std::size_t> vertex_indices;    // ascending
    std::size_t dim = 0;

    bool operator==(const PolarFace&) const = default;
};

/** Canonical order: by dimension, then lexicographically on vertex indices. */
bool canonical_less(const PolarFace& a, const PolarFace& b);

/** Builds a face from indices (sorted, deduplicated) with its affine dimension. */
PolarFace make_polar_face(const PolytopeNorm& N, std::vector<std::size_t> indices);

/** Rows of A indexed by the face. */
std::vector<Vector> face_vertices(const PolytopeNorm& N, const PolarFace& G);

/**
 * True iff some hyperplane c.x = c0 contains exactly the indexed rows while all
 * other rows satisfy c.w < c0. Throws std::invalid_argument on empty or
 * out-of-range input.
 */
bool is_polar_face(const PolytopeNorm& N, const std::vector<std::size_t>& S);

class FaceEnumerationTooLarge : public std::runtime_error
{
    public:
        FaceEnumerationTooLarge() : std::runtime_error("face enumeration too large") {}
};

/** Row count above which enumeration refuses to run without `force`. */
inline constexpr std::size_t face_enumeration_row_limit = 24;

/** Vertices of the unit ball B, in lexicographic order. */
std::vector<Vector> ball_vertices(const PolytopeNorm& N);

/**
 * All nonempty proper faces of the polar polytope with dim <= max_dim, each
 * certified by is_polar_face, in canonical order.
 */
std::vector<PolarFace> enumerate_polar_faces(const PolytopeNorm& N, std::optional<std::size_t> max_dim = std::nullopt,
                                             bool force = false);

/** dim of aff G_1 + ... + aff G_n: rank of all directions v - v0 within each face. */
std::size_t minkowski_dim_of_affine_sum(const std::vector<PolarFace>& faces, const PolytopeNorm& N);

}   // namespace polymean

#endif
