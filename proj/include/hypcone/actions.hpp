#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hypcone/geometry.hpp"
#include "hypcone/metric.hpp"

namespace hypcone {

using Element = std::size_t;

/// Image of every point under one isometry; nullopt where a finite window
/// does not contain the image.
using PointMap = std::vector<std::optional<Vertex>>;

/// Finite group given by its multiplication table, acting on points
/// 0..n-1 by permutations. Construction checks the group axioms and that
/// the permutation representation is a homomorphism: perm(gh) = perm(g)perm(h).
class ActionTable {
 public:
  /// Trivial group acting on no points.
  ActionTable() : mult_(1, std::vector<Element>{0}), inverse_{0}, perm_(1) {}
  ActionTable(std::vector<std::vector<Element>> multiplication,
              std::vector<std::vector<Vertex>> permutations, std::vector<Element> generators = {});

  /// The permutation group generated by `generators` (each a permutation of
  /// 0..n-1). Element 0 is the identity; element i + 1 is generator i unless
  /// that permutation already appeared.
  static ActionTable from_generators(std::size_t point_count,
                                     const std::vector<std::vector<Vertex>>& generators);
  static ActionTable trivial(std::size_t point_count);

  std::size_t order() const { return mult_.size(); }
  std::size_t point_count() const { return point_count_; }
  Element identity() const { return identity_; }
  Element inverse(Element g) const { return inverse_[g]; }
  Element multiply(Element g, Element h) const { return mult_[g][h]; }
  Vertex apply(Element g, Vertex x) const { return perm_[g][x]; }
  std::span<const Vertex> permutation(Element g) const { return perm_[g]; }
  const std::vector<Element>& generators() const { return generators_; }
  const std::vector<std::vector<Element>>& multiplication_table() const { return mult_; }
  const std::vector<std::vector<Vertex>>& permutations() const { return perm_; }

  PointMap point_map(Element g) const;
  Element conjugate(Element u, Element g) const { return multiply(multiply(u, g), inverse(u)); }

  /// Subgroup generated by `elements`, sorted.
  std::vector<Element> subgroup_closure(std::span<const Element> elements) const;
  std::vector<Element> normal_closure(std::span<const Element> elements) const;
  bool is_subgroup(std::span<const Element> elements) const;

  /// The group restricted to a subgroup, re-indexed 0..|K|-1 in the order of
  /// `subgroup` (which must be closed).
  ActionTable restrict_to(std::span<const Element> subgroup) const;

  bool is_isometric(const MetricView& m) const;
  /// Every permutation maps edges to edges of the same length, with
  /// multiplicity.
  bool preserves_edges(const WeightedGraph& g) const;
  /// No element swaps the endpoints of an edge.
  bool acts_without_inversion(const WeightedGraph& g) const;

 private:
  std::size_t point_count_ = 0;
  Element identity_ = 0;
  std::vector<std::vector<Element>> mult_;
  std::vector<Element> inverse_;
  std::vector<std::vector<Vertex>> perm_;
  std::vector<Element> generators_;
};

struct PropernessReport {
  std::size_t bound = 0;  // max over x of |{g : d(x, gx) <= r}|
  Vertex center = 0;
  double r = 0.0;
};

PropernessReport uniform_properness_bound(const ActionTable& a, const MetricView& m, double r);

/// min over points x (with gx defined) of d(x, gx).
double translation_length(const PointMap& g, const MetricView& m);
double translation_length(const ActionTable& a, const MetricView& m, Element g);

/// Points realizing the translation length: the min-set used as a stand-in
/// for the axis of g.
Subset min_set_axis(const PointMap& g, const MetricView& m);
Subset min_set_axis(const ActionTable& a, const MetricView& m, Element g);

/// Images g(Y) of the points of Y that stay in the window.
Subset translate(const PointMap& g, std::span<const Vertex> Y);

/// diam(Y1^{+5 delta} intersected with Y2^{+5 delta}); nullopt when empty.
std::optional<double> overlap_diameter(const MetricView& m, std::span<const Vertex> Y1,
                                       std::span<const Vertex> Y2, double delta);

enum class Verdict { elliptic, loxodromic, inconclusive };
std::string to_string(Verdict v);

struct ClassificationReport {
  double translation_length = 0.0;
  // d(x, g^n x) / n for n = 1, 2, ... while g^n x stays in the window.
  std::vector<double> stable_estimates;
  std::size_t steps = 0;  // largest n reached
  double stable_length = 0.0;  // estimate at the last reached n
  Verdict verdict = Verdict::inconclusive;
};

/// Finite-window classification from the orbit of `base`:
///  - elliptic when g^n x = x for some 1 <= n <= n_max;
///  - loxodromic when all n <= n_max stay in the window, n -> d(x, g^n x) is
///    strictly increasing, and d(x, g^2 x) > d(x, g x) + 2 delta, where delta
///    is a hyperbolicity constant of the window (0 for trees);
///  - inconclusive otherwise, including when the window runs out.
ClassificationReport classify_element(const PointMap& g, const MetricView& m, Vertex base,
                                      std::size_t n_max, double delta = 0.0);

struct PowerThreshold {
  bool elliptic = false;
  std::size_t power = 0;  // least n with n * stable_length >= threshold
  double threshold = 0.0;  // 2 pi sinh(rho)
  double stable_length = 0.0;
};

/// Least n >= 1 with n * stable_length >= threshold.
std::size_t min_power_for_threshold(double stable_length, double threshold);

/// Throws std::runtime_error("insufficient window") when the classification
/// is inconclusive.
PowerThreshold min_power_for_injectivity(const PointMap& g, const MetricView& m, Vertex base,
                                         std::size_t n_max, double rho, double delta = 0.0);

struct OrbitGraphVertex {
  Element u;
  Vertex s;
};

/// Constants of the comparison map (u, s) -> us:
///   d_X <= lipschitz * d_Gamma,  d_Gamma <= expansion * d_X + additive.
struct DistortionConstants {
  double lipschitz = 0.0;
  double expansion = 0.0;
  double additive = 0.0;
  bool finite = true;
};

struct OrbitGraph {
  double r = 0.0;
  double R = 0.0;  // 2r + 1
  std::vector<Vertex> net_representatives;  // S_0
  std::vector<OrbitGraphVertex> vertices;   // G x S_0, index = s_index * |G| + u
  WeightedGraph graph;                      // unit edges, labels "(u,s)"
  ActionTable action;                       // g (u, s) = (gu, s)
  bool action_free = true;
  bool edges_invariant = true;
  std::size_t max_valence = 0;
  std::size_t capacity_bound = 0;    // N1: r-capacity of R-balls
  std::size_t properness_bound = 0;  // N2: |U(x)| with radius 2R
  DistortionConstants distortion;
};

/// Graph on G x S_0 with an edge between (u, s) and (u', s') when
/// d(us, u's') <= 2r + 1, where S_0 represents a greedy maximal r-separated
/// set of orbits. Throws std::invalid_argument for a non-isometric action.
OrbitGraph build_orbit_graph(const ActionTable& a, const MetricView& m, double r);

struct QuotientSpace {
  std::vector<Subset> orbits;           // ordered by least member
  std::vector<std::size_t> orbit_of;    // point -> orbit index
  FiniteMetricSpace metric;             // min over representatives
  std::vector<std::pair<std::size_t, std::size_t>> collapsed;  // distinct orbits at distance 0
  bool degenerate() const { return !collapsed.empty(); }
};

/// Orbit space of the subgroup generated by K, with
/// d(Kx, Kx') = min over k, k' of d(kx, k'x').
QuotientSpace quotient_metric(const MetricView& m, const ActionTable& a,
                              std::span<const Element> K);

struct Subdivision {
  WeightedGraph graph;
  ActionTable action;
  std::vector<Vertex> midpoint;  // edge index -> new vertex
};

Subdivision barycentric_subdivision(const WeightedGraph& g, const ActionTable& a);

struct InjectivityReport {
  enum class Status { injective, collision, inconclusive };
  Status status = Status::injective;
  std::size_t ball_size = 0;
  std::optional<std::pair<std::string, std::string>> collision;
  bool heuristic = false;
  std::string note;
};

std::string to_string(InjectivityReport::Status s);

/// Whether G -> G / <<K>> is injective on {g : d(gx, x) <= rho / 100}.
InjectivityReport ball_injectivity_check(const ActionTable& a, const MetricView& m,
                                         std::span<const Element> K, Vertex x, double rho);

}  // namespace hypcone
