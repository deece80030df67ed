#pragma once

#include "coreset/frank_wolfe.hpp"

#include <cstdint>

namespace coreset::oracle {

/// Direct (1/J) sum_j l_n(theta_j) l_m(theta_j) from the raw loss matrix;
/// an independent route to geometry's inner product.
double brute_inner(const LossMatrix& losses, Eigen::Index n, Eigen::Index m);

/// Max of J~(w, p) over a barycentric lattice of the hull (resolution points
/// per dimension). Confirms empirically that interior points never beat the
/// vertices. Throws ResourceError past ~2e6 lattice points.
double grid_max_over_hull(const ProjectionSpace& space, const CoresetWeights& w,
                          const ConvexHull& hull, int resolution);

/// From-scratch K=1 Frank-Wolfe coreset in w-coordinates (L_n = p_n l_n),
/// mirroring the single-distribution construction. Shares no code with the
/// frank_wolfe module. Requires strictly positive p.
CoresetSolution reference_fw_k1(const ProjectionSpace& space, const ProbabilityVector& p,
                                Eigen::Index m);

/// Brute-force boundary distance: samples every leave-one-out face of the
/// scaled-vertex simplex on a barycentric lattice and takes the closest
/// sample to L. Overestimates the true distance by O(lattice spacing).
double radius_by_boundary_sampling(const ProjectionSpace& space,
                                   const ProbabilityVector& vertex, int resolution);

} // namespace coreset::oracle
