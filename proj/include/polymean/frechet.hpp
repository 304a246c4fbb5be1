/**
 * Exact Fréchet mean sets of finite samples under polytope norms.
 *
 * Pipeline: lift to Q = {(theta, d) : a.x_i - a.theta - d_i <= 0}, project out
 * theta by Fourier–Motzkin, find the minimum-norm point d' of the projection,
 * and read the mean set off as {theta : a.theta >= a.x_i - d'_i}.
 */

#ifndef POLYMEAN_FRECHET_HPP
#define POLYMEAN_FRECHET_HPP

#include <atomic>
#include <cstdint>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polymean/faces.hpp"
#include "polymean/hpolyhedron.hpp"
#include "polymean/norm.hpp"

namespace polymean {

struct Sample
{
    std::vector<Vector> points;

    std::size_t size() const { return points.size(); }
    std::size_t dim() const { return points.empty() ? 0 : points.front().size(); }

    /** Sample file: "n k" then n rows of k rationals; '#' starts a comment. */
    static Sample parse(std::istream& in);
    static Sample load(const std::string& path);
};

/** An internal step produced an impossible state (empty mean set, failed certificate). */
class SolverError : public std::runtime_error
{
    public:
        explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/** Q over (theta_1..theta_k, d_1..d_n); row (i, j) is a_j.x_i - a_j.theta - d_i <= 0. */
HPolyhedron build_lifted_polyhedron(const PolytopeNorm& N, const Sample& S);

struct MinNormOptions
{
    std::size_t cap = 0;                // Frank–Wolfe iterations; 0 means 4 * dim
    std::size_t bit_limit = 1024;       // stop Frank–Wolfe once an iterate entry needs more bits
    bool allow_fallback = true;
};

struct MinNormReport
{
    std::size_t frank_wolfe_iterations = 0;
    bool frank_wolfe_certified = false;
    bool bit_limit_hit = false;
    bool fallback_used = false;
    std::size_t fallback_iterations = 0;
};

/**
 * argmin ||d||_2 over Qp (assumed inside the nonnegative orthant), certified
 * exactly: d in Qp and min over Qp of s.d equals d.d.
 * Throws SolverError("infeasible") for empty Qp and
 * SolverError("frank-wolfe did not certify; increase cap") when the fallback is disabled.
 */
Vector min_norm_point(const HPolyhedron& Qp, const MinNormOptions& options = {}, MinNormReport* report = nullptr);

/** The exact optimality check used by min_norm_point. */
bool certify_min_norm_point(const HPolyhedron& Qp, const Vector& d);

struct FMSetResult
{
    Vector distances;
    HPolyhedron fm_hrep;                    // one row -a.theta <= min_i (d_i - a.x_i) per polar vertex a
    std::size_t fm_dim = 0;
    bool unique = false;
    Vector witness;                          // max-slack relative-interior point
    std::vector<std::size_t> implicit_rows;  // rows of fm_hrep holding with equality on the set
    std::optional<std::vector<PolarFace>> face_type;
    MinNormReport solver;
};

FMSetResult fm_set(const PolytopeNorm& N, const Sample& S, const MinNormOptions& options = {});

/**
 * G_i = conv of the rows active at witness - x_i, the subgradient of
 * ||x_i - .|| at the witness. Throws
 * std::invalid_argument("face type undefined: data point is a Fréchet mean") if some d_i = 0.
 */
std::vector<PolarFace> face_type_of_sample(const PolytopeNorm& N, const Sample& S, const FMSetResult& R);

/** Exact LP check of 0 in sum_i d_i conv(G_i). */
bool subgradient_certificate(const PolytopeNorm& N, const Vector& distances, const std::vector<PolarFace>& faces);

/** Axis-aligned grid over [lo, hi] with spacing `step`. */
struct GridBox
{
    Vector lo;
    Vector hi;
};

/**
 * All grid points attaining the smallest value of sum_i ||x_i - theta||^2 on
 * the grid. Throws std::invalid_argument("grid size guard exceeded") above
 * `max_points` grid points.
 */
std::vector<Vector> brute_force_fm_oracle(const PolytopeNorm& N, const Sample& S, const GridBox& box,
                                          const Rational& step, std::size_t max_points = 4000000);

/** Sample Fréchet function sum_i ||x_i - theta||^2. */
Rational frechet_function(const PolytopeNorm& N, const Sample& S, std::span<const Rational> theta);

/**
 * Cross-checks a computed mean set against the grid oracle. Returns the names
 * of violated invariants, in check order (empty on success):
 *   grid_containment       every grid minimizer satisfies fm_hrep
 *   grid_lower_bound       grid minimum >= sum d_i^2
 *   witness_in_set         the witness satisfies fm_hrep
 *   equidistance           ||x_i - p|| = d_i for the witness and every grid minimizer in the set
 *   subgradient            0 in sum d_i conv(G_i) when the face type is defined
 */
std::vector<std::string> oracle_check(const PolytopeNorm& N, const Sample& S, const FMSetResult& R, const GridBox& box,
                                      const Rational& step);

/** Process-wide solver counters. */
struct FrechetStatistics
{
    std::atomic<std::uint64_t> solves{0};
    std::atomic<std::uint64_t> frank_wolfe_certified{0};
    std::atomic<std::uint64_t> fallbacks{0};
    std::atomic<std::uint64_t> bit_limit_hits{0};
};

FrechetStatistics& frechet_statistics();

}   // namespace polymean

#endif
