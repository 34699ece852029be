#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hypcone/metric.hpp"

namespace hypcone {

/// Sorted, duplicate-free list of point indices.
using Subset = std::vector<Vertex>;

/// Sorts, removes duplicates and range-checks against `n` points.
Subset make_subset(std::vector<Vertex> points, std::size_t n);

/// d(x, Y); kInfinity for empty Y.
double distance_to_set(const MetricView& m, Vertex x, std::span<const Vertex> Y);

/// Points x with d(x, Y) <= alpha.
Subset neighborhood(const MetricView& m, std::span<const Vertex> Y, double alpha);

/// Closed ball B(center, radius).
Subset ball(const MetricView& m, Vertex center, double radius);

/// Largest pairwise distance within Y (0 for |Y| <= 1).
double diameter(const MetricView& m, std::span<const Vertex> Y);

bool is_separated(const MetricView& m, std::span<const Vertex> S, double r);

struct QuasiconvexityResult {
  bool holds = true;
  // First violating (x, y, y') in lexicographic order.
  std::optional<std::array<Vertex, 3>> violation;
  // max over all triples of d(x,Y) - <y,y'>_x; -inf when Y is empty.
  double worst_excess = -kInfinity;
};

/// Checks d(x, Y) <= <y, y'>_x + alpha for every x in X and y, y' in Y.
QuasiconvexityResult is_quasiconvex(const MetricView& m, std::span<const Vertex> Y, double alpha);

/// A vertex subset together with the length metric of paths that stay in it.
struct SubsetWithInducedMetric {
  Subset members;
  FiniteMetricSpace induced;  // indexed by position in `members`
};

SubsetWithInducedMetric induced_length_metric(const WeightedGraph& g, std::span<const Vertex> Y);

struct StrongQuasiconvexityReport {
  bool holds = true;
  double delta = 0.0;
  QuasiconvexityResult quasiconvexity;  // with alpha = 2 delta
  bool induced_connected = true;
  double max_excess = 0.0;  // max of d_Y - d_X over pairs of Y
  std::optional<std::pair<Vertex, Vertex>> failing_pair;
};

/// Y is 2 delta-quasi-convex and d_X <= d_Y <= d_X + 8 delta on Y x Y.
StrongQuasiconvexityReport is_strongly_quasiconvex(const WeightedGraph& g,
                                                   std::span<const Vertex> Y, double delta);
StrongQuasiconvexityReport is_strongly_quasiconvex(const WeightedGraph& g,
                                                   const FiniteMetricSpace& ambient,
                                                   std::span<const Vertex> Y, double delta);

// Exact capacities are computed by branch and bound on 64-bit masks.
inline constexpr std::size_t kMaxCapacityCandidates = 64;

struct CapacityReport {
  double r = 0.0;
  Subset region;
  std::size_t capacity = 0;
  Subset witness_net;
};

/// Maximum size of an r-separated subset of `region`. Throws
/// std::length_error when the region has more than kMaxCapacityCandidates
/// points.
CapacityReport capacity(const MetricView& m, std::span<const Vertex> region, double r);

struct BoundedGeometryReport {
  std::size_t bound = 0;  // max over centers of C_r(B(x, R))
  Vertex center = 0;      // least center attaining it
  double r = 0.0;
  double R = 0.0;
};

BoundedGeometryReport bounded_geometry_bound(const MetricView& m, double r, double R);

/// Index-order greedy saturation: a maximal r-separated subset.
Subset greedy_maximal_net(const MetricView& m, double r);

}  // namespace hypcone
