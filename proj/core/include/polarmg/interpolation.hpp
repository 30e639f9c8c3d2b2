#pragma once

#include "polarmg/polar_grid.hpp"

namespace polarmg {

/**
 * \brief Grid transfers between a fine grid and the grid obtained by dropping
 * its odd rings and odd spokes (fine.n_r == 2*coarse.n_r - 1,
 * fine.n_theta == 2*coarse.n_theta).
 *
 * Prolongation interpolates bilinearly with weights taken from the actual
 * (possibly anisotropic) spacings: a fine node on an odd ring between coarse
 * rings takes h_right/(h_left+h_right) from the left neighbor, and the
 * angular direction works the same with periodic wraparound; nodes odd in
 * both directions combine the four corner products. Restriction is the exact
 * transpose, written as a gather over each coarse node's 3x3 fine
 * neighborhood in a fixed order, so restrict/prolongate form an adjoint pair
 * to machine precision and results do not depend on the thread count.
 *
 * Injection copies values at coincident nodes; its transpose scatters a
 * coarse vector into the even-even fine positions. Both appear in the
 * implicitly extrapolated operator.
 */

/// fu = P cu (overwrites fu).
void prolongate(const PolarGrid& fine, const PolarGrid& coarse,
                const double* cu, double* fu);

/// fu += P cu.
void prolongate_add(const PolarGrid& fine, const PolarGrid& coarse,
                    const double* cu, double* fu);

/// cr = P^T fr.
void restrict_transpose(const PolarGrid& fine, const PolarGrid& coarse,
                        const double* fr, double* cr);

/// cu = values of fu at coincident (even ring, even spoke) nodes.
void inject(const PolarGrid& fine, const PolarGrid& coarse, const double* fu,
            double* cu);

/// fu += Inj^T cu: adds cu at coincident fine nodes, other nodes untouched.
void inject_transpose_add(const PolarGrid& fine, const PolarGrid& coarse,
                          const double* cu, double* fu);

}  // namespace polarmg
