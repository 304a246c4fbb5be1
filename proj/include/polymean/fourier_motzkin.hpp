/**
 * Fourier–Motzkin projection of H-polyhedra with redundancy control.
 */

#ifndef POLYMEAN_FOURIER_MOTZKIN_HPP
#define POLYMEAN_FOURIER_MOTZKIN_HPP

#include <vector>

#include "polymean/hpolyhedron.hpp"

namespace polymean {

struct FourierMotzkinOptions
{
    // Skip the initial LP redundancy pass; the caller guarantees no input row is redundant.
    bool assume_irredundant = false;
    // Eliminate in ascending index order; otherwise in the order given.
    bool ascending = true;
};

/**
 * Projection of P onto the coordinates not listed in `eliminate`, in their
 * original order. Every returned row is irredundant and has a primitive
 * integer normal. An empty projection is returned as the single row 0.x <= -1.
 * Throws std::invalid_argument if no coordinate would remain or an index is
 * out of range.
 */
HPolyhedron fourier_motzkin(const HPolyhedron& P, const std::vector<std::size_t>& eliminate,
                            const FourierMotzkinOptions& options = {});

/**
 * Equivalent system with primitive integer normals, no duplicates and no
 * redundant rows (input order otherwise kept).
 */
HPolyhedron remove_redundant(const HPolyhedron& P);

}   // namespace polymean

#endif
