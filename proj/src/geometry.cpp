#include "hypcone/geometry.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hypcone {

Subset make_subset(std::vector<Vertex> points, std::size_t n) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  if (!points.empty() && points.back() >= n) {
    throw std::out_of_range("subset member " + std::to_string(points.back()) +
                            " out of range for " + std::to_string(n) + " points");
  }
  return points;
}

double distance_to_set(const MetricView& m, Vertex x, std::span<const Vertex> Y) {
  double best = kInfinity;
  for (Vertex y : Y) best = std::min(best, m.distance(x, y));
  return best;
}

Subset neighborhood(const MetricView& m, std::span<const Vertex> Y, double alpha) {
  if (alpha < 0.0) throw std::invalid_argument("neighborhood radius must be non-negative");
  Subset out;
  for (Vertex x = 0; x < m.size(); ++x) {
    if (distance_to_set(m, x, Y) <= alpha + kTolerance) out.push_back(x);
  }
  return out;
}

Subset ball(const MetricView& m, Vertex center, double radius) {
  Subset out;
  for (Vertex x = 0; x < m.size(); ++x) {
    if (m.distance(center, x) <= radius + kTolerance) out.push_back(x);
  }
  return out;
}

double diameter(const MetricView& m, std::span<const Vertex> Y) {
  double best = 0.0;
  for (std::size_t i = 0; i < Y.size(); ++i) {
    for (std::size_t j = i + 1; j < Y.size(); ++j) best = std::max(best, m.distance(Y[i], Y[j]));
  }
  return best;
}

bool is_separated(const MetricView& m, std::span<const Vertex> S, double r) {
  for (std::size_t i = 0; i < S.size(); ++i) {
    for (std::size_t j = i + 1; j < S.size(); ++j) {
      if (m.distance(S[i], S[j]) < r - kTolerance) return false;
    }
  }
  return true;
}

QuasiconvexityResult is_quasiconvex(const MetricView& m, std::span<const Vertex> Y, double alpha) {
  QuasiconvexityResult result;
  if (Y.empty()) return result;
  for (Vertex x = 0; x < m.size(); ++x) {
    const double dxY = distance_to_set(m, x, Y);
    for (Vertex y : Y) {
      for (Vertex y2 : Y) {
        const double excess = dxY - gromov_product(m, y, y2, x);
        result.worst_excess = std::max(result.worst_excess, excess);
        if (result.holds && excess > alpha + kTolerance) {
          result.holds = false;
          result.violation = std::array<Vertex, 3>{x, y, y2};
        }
      }
    }
  }
  return result;
}

SubsetWithInducedMetric induced_length_metric(const WeightedGraph& g, std::span<const Vertex> Y) {
  Subset members = make_subset({Y.begin(), Y.end()}, g.vertex_count());
  FiniteMetricSpace induced = path_metric(g.induced_subgraph(members));
  return {std::move(members), std::move(induced)};
}

StrongQuasiconvexityReport is_strongly_quasiconvex(const WeightedGraph& g,
                                                   std::span<const Vertex> Y, double delta) {
  return is_strongly_quasiconvex(g, path_metric(g), Y, delta);
}

StrongQuasiconvexityReport is_strongly_quasiconvex(const WeightedGraph& g,
                                                   const FiniteMetricSpace& ambient,
                                                   std::span<const Vertex> Y, double delta) {
  if (delta < 0.0) throw std::invalid_argument("delta must be non-negative");
  StrongQuasiconvexityReport report;
  report.delta = delta;
  auto sub = induced_length_metric(g, Y);
  report.quasiconvexity = is_quasiconvex(ambient, sub.members, 2.0 * delta);
  report.holds = report.quasiconvexity.holds;

  const auto& members = sub.members;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      const double dX = ambient(members[i], members[j]);
      const double dY = sub.induced(i, j);
      bool bad = false;
      if (!is_finite_length(dY)) {
        report.induced_connected = false;
        report.max_excess = kInfinity;
        bad = true;
      } else {
        report.max_excess = std::max(report.max_excess, dY - dX);
        bad = dY < dX - kTolerance || dY > dX + 8.0 * delta + kTolerance;
      }
      if (bad) {
        if (!report.failing_pair) report.failing_pair = std::pair{members[i], members[j]};
        report.holds = false;
      }
    }
  }
  return report;
}

namespace {

using Mask = std::uint64_t;

inline Mask bit(std::size_t i) { return Mask{1} << i; }

// Maximum independent set in a conflict graph on at most 64 vertices.
class IndependentSetSearch {
 public:
  explicit IndependentSetSearch(std::vector<Mask> conflicts) : conflicts_(std::move(conflicts)) {}

  Mask run() {
    const std::size_t k = conflicts_.size();
    Mask all = k == 64 ? ~Mask{0} : bit(k) - 1;
    search(all, 0, 0);
    return best_set_;
  }

 private:
  // Each greedy clique contributes at most one point to an independent set.
  int clique_cover(Mask candidates) const {
    int count = 0;
    while (candidates) {
      ++count;
      Mask pool = candidates;
      while (pool) {
        const int v = std::countr_zero(pool);
        candidates &= ~bit(v);
        pool &= conflicts_[v] & ~bit(v);
      }
    }
    return count;
  }

  void search(Mask candidates, Mask chosen, int count) {
    if (!candidates) {
      if (count > best_) {
        best_ = count;
        best_set_ = chosen;
      }
      return;
    }
    if (count + std::popcount(candidates) <= best_) return;
    if (count + clique_cover(candidates) <= best_) return;
    const int v = std::countr_zero(candidates);
    const Mask rest = candidates & ~bit(v);
    if (!(conflicts_[v] & rest)) {
      search(rest, chosen | bit(v), count + 1);
      return;
    }
    search(rest & ~conflicts_[v], chosen | bit(v), count + 1);
    search(rest, chosen, count);
  }

  std::vector<Mask> conflicts_;
  int best_ = -1;
  Mask best_set_ = 0;
};

}  // namespace

CapacityReport capacity(const MetricView& m, std::span<const Vertex> region, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("separation radius must be positive");
  CapacityReport report;
  report.r = r;
  report.region = make_subset({region.begin(), region.end()}, m.size());
  const auto& pts = report.region;
  if (pts.empty()) return report;
  if (pts.size() > kMaxCapacityCandidates) {
    throw std::length_error("capacity region has " + std::to_string(pts.size()) +
                            " points; exact search supports at most " +
                            std::to_string(kMaxCapacityCandidates));
  }
  std::vector<Mask> conflicts(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (m.distance(pts[i], pts[j]) < r - kTolerance) {
        conflicts[i] |= bit(j);
        conflicts[j] |= bit(i);
      }
    }
  }
  Mask chosen = IndependentSetSearch(std::move(conflicts)).run();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (chosen & bit(i)) report.witness_net.push_back(pts[i]);
  }
  report.capacity = report.witness_net.size();
  return report;
}

BoundedGeometryReport bounded_geometry_bound(const MetricView& m, double r, double R) {
  if (!(r > 0.0)) throw std::invalid_argument("separation radius must be positive");
  if (R < 0.0) throw std::invalid_argument("ball radius must be non-negative");
  BoundedGeometryReport report;
  report.r = r;
  report.R = R;
  for (Vertex x = 0; x < m.size(); ++x) {
    const std::size_t c = capacity(m, ball(m, x, R), r).capacity;
    if (c > report.bound) {
      report.bound = c;
      report.center = x;
    }
  }
  return report;
}

Subset greedy_maximal_net(const MetricView& m, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("separation radius must be positive");
  Subset net;
  for (Vertex x = 0; x < m.size(); ++x) {
    bool separated = std::all_of(net.begin(), net.end(), [&](Vertex s) {
      return m.distance(x, s) >= r - kTolerance;
    });
    if (separated) net.push_back(x);
  }
  return net;
}

}  // namespace hypcone
