#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace hypcone {

using Vertex = std::size_t;

// Distances between points in different components. Never a large finite
// stand-in: every consumer tests for it explicitly.
inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// Absolute tolerance for comparisons of computed lengths.
inline constexpr double kTolerance = 1e-9;

inline bool is_finite_length(double d) { return d != kInfinity; }

struct Edge {
  Vertex u;
  Vertex v;
  double length;
};

/// Finite undirected graph with positive edge lengths. Parallel edges are
/// allowed; vertex indices are dense in [0, vertex_count()).
class WeightedGraph {
 public:
  using Adjacency = std::vector<std::vector<std::pair<Vertex, double>>>;

  WeightedGraph() = default;
  explicit WeightedGraph(std::size_t vertex_count);
  WeightedGraph(std::size_t vertex_count, std::vector<Edge> edges,
                std::vector<std::string> labels = {});

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  void add_edge(Vertex u, Vertex v, double length = 1.0);
  Vertex add_vertex(std::string label = {});

  // Labels are either absent (empty vector) or one per vertex.
  const std::vector<std::string>& labels() const { return labels_; }
  void set_labels(std::vector<std::string> labels);
  std::string label(Vertex v) const;

  Adjacency adjacency() const;
  std::size_t valence(Vertex v) const;
  std::size_t max_valence() const;

  /// Subgraph spanned by `members`; vertex i of the result is members[i].
  WeightedGraph induced_subgraph(std::span<const Vertex> members) const;

 private:
  void check_edge(const Edge& e) const;

  std::size_t vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::string> labels_;
};

/// Read-only access to distances on a finite point set. Large windows (for
/// instance Cayley balls of free groups) implement this without storing a
/// full matrix.
class MetricView {
 public:
  virtual ~MetricView() = default;
  virtual std::size_t size() const = 0;
  virtual double distance(Vertex x, Vertex y) const = 0;
};

/// Symmetric distance matrix. The constructor validates the metric axioms;
/// kInfinity is accepted only where the triangle inequality allows it, i.e.
/// between distinct connected components.
class FiniteMetricSpace final : public MetricView {
 public:
  FiniteMetricSpace() = default;
  FiniteMetricSpace(std::size_t n, std::vector<double> row_major);

  static FiniteMetricSpace from_rows(const std::vector<std::vector<double>>& rows);

  // Skips validation. For matrices that are metrics by construction (path
  // metrics, rescalings, quotients by isometric actions).
  static FiniteMetricSpace from_trusted(std::size_t n, std::vector<double> row_major);

  std::size_t size() const override { return n_; }
  double distance(Vertex x, Vertex y) const override { return d_[x * n_ + y]; }
  double operator()(Vertex x, Vertex y) const { return d_[x * n_ + y]; }
  std::span<const double> row(Vertex x) const { return {d_.data() + x * n_, n_}; }

  bool connected() const;
  double diameter() const;

  friend bool operator==(const FiniteMetricSpace&, const FiniteMetricSpace&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Quadruple realizing the hyperbolicity constant.
struct DeltaCertificate {
  double delta = 0.0;
  std::array<Vertex, 4> witness{};  // (x, y, z, t)
};

/// Shortest-path metric of `g`; kInfinity across components.
FiniteMetricSpace path_metric(const WeightedGraph& g);

/// <x,y>_z = (d(x,z) + d(y,z) - d(x,y)) / 2. Throws std::domain_error on a
/// disconnected triple.
double gromov_product(const MetricView& m, Vertex x, Vertex y, Vertex z);

/// min{<x,y>_t, <y,z>_t} - <x,z>_t, the amount by which (x,y,z,t) violates
/// the four-point inequality with constant zero.
double four_point_defect(const MetricView& m, Vertex x, Vertex y, Vertex z, Vertex t);

/// Least delta such that <x,z>_t >= min{<x,y>_t, <y,z>_t} - delta for every
/// ordered quadruple. The witness is the lexicographically least ordered
/// quadruple whose defect is within kTolerance of delta.
///
/// `workers` = 1 runs the serial scan, 0 uses the hardware concurrency. The
/// result does not depend on the worker count.
DeltaCertificate hyperbolicity_delta(const FiniteMetricSpace& m, unsigned workers = 1);

/// Multiplies every distance by `lambda` (> 0).
FiniteMetricSpace rescale(const FiniteMetricSpace& m, double lambda);

}  // namespace hypcone
