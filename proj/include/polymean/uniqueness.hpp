/**
 * Combinatorial conditions on tuples of polar faces (G_1, ..., G_n):
 *
 *   possible              0 in relint conv(G_1 u ... u G_n)
 *   positive_probability  sum dim G_i = dim (aff G_1 + ... + aff G_n)
 *   unique                dim conv(G_1 u ... u G_n) = k
 *
 * A face type occurs with positive probability iff the first two hold, and
 * then forces a unique mean iff the third holds.
 */

#ifndef POLYMEAN_UNIQUENESS_HPP
#define POLYMEAN_UNIQUENESS_HPP

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polymean/faces.hpp"
#include "polymean/norm.hpp"

namespace polymean {

/** Exact LP: max t with M_G x = 0, x >= t, 1.x = 1 over all face vertices; true iff t > 0. */
bool check_possible(const PolytopeNorm& N, const std::vector<PolarFace>& faces);
bool check_positive_probability(const PolytopeNorm& N, const std::vector<PolarFace>& faces);
bool check_unique(const PolytopeNorm& N, const std::vector<PolarFace>& faces);

struct ConditionReport
{
    bool possible = false;
    bool positive_probability = false;
    bool unique = false;
    std::size_t predicted_fm_dim = 0;   // k - dim conv(union of faces)

    bool passes() const { return possible && positive_probability && unique; }
    bool operator==(const ConditionReport&) const = default;
};

ConditionReport condition_report(const PolytopeNorm& N, const std::vector<PolarFace>& faces);

/**
 * If `faces` passes all three conditions, so does faces + new_facet, where
 * new_facet is a single polar vertex lying in faces[0]. Returns the truth of
 * that implication. Throws std::invalid_argument("not a facet extension") when
 * new_facet is not such a vertex.
 */
bool check_inductive_extension(const PolytopeNorm& N, const std::vector<PolarFace>& faces, const PolarFace& new_facet);

/**
 * Per-n record of an exhaustive search. Every multiset of n proper faces is
 * counted exactly once, under the first reason it was rejected:
 *   positive_probability  directions of the chosen faces are dependent
 *   dimension_bound       every completion fails positive_probability or unique
 *   unique                union of vertices is not full-dimensional
 *   possible              0 is not in the relative interior of the union's hull
 * At the threshold n, `passing` counts accepted tuples seen before the search stopped.
 */
struct RefutationCounts
{
    std::size_t n = 0;
    std::uint64_t total = 0;            // C(F + n - 1, n)
    std::uint64_t positive_probability = 0;
    std::uint64_t dimension_bound = 0;
    std::uint64_t unique = 0;
    std::uint64_t possible = 0;
    std::uint64_t passing = 0;

    std::uint64_t rejected() const { return positive_probability + dimension_bound + unique + possible; }
};

struct ThresholdCertificate
{
    std::string norm_name;
    std::uint64_t norm_hash = 0;
    std::size_t face_count = 0;
    std::size_t N = 0;
    std::vector<PolarFace> witness_faces;
    std::vector<RefutationCounts> refutations;  // one per n < N, ascending
};

/** Plain-text report: norm, hash, N, witness vertex sets, refutation counts. */
std::string to_text(const ThresholdCertificate& cert, const PolytopeNorm& N);

class ThresholdNotFound : public std::runtime_error
{
    public:
        ThresholdNotFound(const std::string& what, ThresholdCertificate partial)
            : std::runtime_error(what), partial_(std::move(partial)) {}
        const ThresholdCertificate& partial() const { return partial_; }

    private:
        ThresholdCertificate partial_;
};

struct ThresholdOptions
{
    bool force = false;     // lift the face-enumeration scale guard
    // Called with every passing tuple at the threshold; when set, the search
    // enumerates the whole threshold level instead of stopping at the first hit.
    std::function<void(const std::vector<PolarFace>&)> on_pass;
};

/**
 * Smallest n in [2, n_max] for which some multiset of n proper polar faces
 * passes all three conditions; the first hit in canonical order is the witness.
 * Throws ThresholdNotFound (carrying the refutations) when none exists up to n_max.
 */
ThresholdCertificate threshold_search(const PolytopeNorm& N, std::size_t n_max, const ThresholdOptions& options = {});

/** Exhaustive search at a single n; returns the per-reason counts. */
RefutationCounts count_tuples(const PolytopeNorm& N, std::size_t n, const ThresholdOptions& options = {});

/** C(n, r) in 64 bits; throws std::overflow_error if it does not fit. */
std::uint64_t binomial(std::uint64_t n, std::uint64_t r);

}   // namespace polymean

#endif
