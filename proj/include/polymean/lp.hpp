/**
 * Exact rational linear programming over H-polyhedra.
 *
 * Problems are stated in inequality form (minimize c.x subject to A x <= b,
 * E x = f, x free) and solved through the dual standard form
 *
 *     minimize b.y  subject to  A^T y = -c,  y >= 0,
 *
 * whose tableau has only dim(x) rows. The primal optimum is read off as the
 * simplex multipliers of the final basis, so every optimal answer comes with
 * a dual certificate y.
 *
 * A double-precision simplex may propose a basis first; it is accepted only
 * after exact primal and dual feasibility checks. Otherwise an exact two-phase
 * tableau simplex with Bland's rule decides the problem.
 */

#ifndef POLYMEAN_LP_HPP
#define POLYMEAN_LP_HPP

#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "polymean/hpolyhedron.hpp"
#include "polymean/rational.hpp"

namespace polymean::lp {

enum class Status { optimal, infeasible, unbounded };

const char* to_string(Status s);

struct LinearProgram
{
    Vector objective;               // minimize objective . x
    HPolyhedron constraints;        // A x <= b
    RationalMatrix equality_matrix; // E x = f, may have zero rows
    Vector equality_rhs;
};

struct Outcome
{
    Status status = Status::infeasible;
    std::optional<Vector> point;
    std::optional<Rational> value;
    // Unbounded: a direction r with A r <= 0, E r = 0 and c.r < 0.
    std::optional<Vector> ray;
    // Optimal: y >= 0 over the rows of A followed by (+E, -E), with
    // A^T y = -c and b.y = -value.
    Vector multipliers;
};

/** Throws DimensionError("dimension mismatch") on inconsistent shapes. */
Outcome solve(const LinearProgram& lp);

/** Convenience: minimize c.x over P. */
Outcome minimize(const HPolyhedron& P, const Vector& c);

/** True if P has at least one point. */
bool is_feasible(const HPolyhedron& P);

class EmptyPolyhedron : public std::runtime_error
{
    public:
        EmptyPolyhedron() : std::runtime_error("empty polyhedron") {}
};

struct SlackPoint
{
    Vector point;
    Rational slack;
};

/**
 * Maximizes t subject to a_i.x + t <= b_i over the constraints that are not
 * implicit equalities, holding the implicit ones as equalities. slack > 0
 * certifies a relative-interior point; slack == 0 only for a single point.
 * When t is unbounded (unbounded polyhedron) it is capped at 1.
 */
SlackPoint max_slack_point(const HPolyhedron& P);

/** Indices i with a_i.x = b_i on all of P (ascending). */
std::vector<std::size_t> implicit_equalities(const HPolyhedron& P);

/** Both at once; the slack point is computed with the returned equality set. */
std::pair<std::vector<std::size_t>, SlackPoint> affine_hull_and_slack_point(const HPolyhedron& P);

/** Process-wide counters, mostly for profiling and tests. */
struct Statistics
{
    std::atomic<std::uint64_t> solves{0};
    std::atomic<std::uint64_t> hinted{0};       // accepted a floating-point basis after exact checks
    std::atomic<std::uint64_t> exact{0};        // ran the exact tableau simplex
    std::atomic<std::uint64_t> pivots{0};
};

Statistics& statistics();

/** Disables the floating-point basis proposal (exact simplex only). */
void set_float_hints(bool enabled);
bool float_hints();

}   // namespace polymean::lp

#endif
