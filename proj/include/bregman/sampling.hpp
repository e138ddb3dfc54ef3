#pragma once

#include <vector>

#include "bregman/convex_set.hpp"
#include "bregman/random.hpp"

namespace bregman {

/// A point of C near `hint`: the hint itself when it is feasible, the stored
/// witness for intersections, otherwise the Bregman projection of the hint.
PrimalPoint feasible_point(const ConvexSet& set, const LegendreFunction& f, const PrimalPoint& hint);

/// Points of C (and of int dom f) around `anchor`, which must lie in C.
///
/// Used for the "for all y in C" checks, so the sample is biased toward
/// extreme points where linear-in-y violations peak: the anchor itself,
/// boundary hits along the +-axis directions, vertices of the clipped box
/// when the set is a pure box, then random rays (one boundary hit and one
/// interior point each). Every ray stays within `radius` of the anchor and
/// is restricted to the null space of the equality rows.
std::vector<PrimalPoint> sample_set_points(const ConvexSet& set, const LegendreFunction& f,
                                           const PrimalPoint& anchor, int count, Rng& rng, double radius = 1.0);

}  // namespace bregman
