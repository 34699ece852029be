#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hypcone/actions.hpp"
#include "hypcone/geometry.hpp"
#include "hypcone/metric.hpp"
#include "hypcone/words.hpp"

namespace hypcone {

/// theta = min{pi, dY / sinh rho}; dY = kInfinity gives pi.
double cone_angle(double dY, double rho);

/// Distance between (y, r) and (y', r') in the cone of radius rho, where
/// dY = d_Y(y, y'):
///   cosh d = cosh r cosh r' - sinh r sinh r' cos theta.
/// Evaluated as 2 asinh(sqrt(sinh^2((r - r')/2) + sinh r sinh r' sin^2(theta/2))),
/// which is the same quantity without cancellation.
double cone_distance(double r, double r2, double dY, double rho);

struct ConeEntry {
  Subset Y;
  std::vector<Element> H;  // subgroup, sorted; {identity} when trivial
};

struct ConeFamily {
  double rho = 1.0;
  std::vector<ConeEntry> cones;
};

/// Sorts each Y, replaces each H by the subgroup it generates, and checks that
/// Y is nonempty, in range, and stabilized by H. `a` may be null when no
/// cone lists group elements.
ConeFamily normalize_family(ConeFamily q, const ActionTable* a, std::size_t point_count);

/// Closes the family under (H, Y) -> (gHg^-1, gY). Original entries come
/// first; duplicates are dropped.
ConeFamily expand_family(const ConeFamily& q, const ActionTable& a);

struct ConeOffSpace {
  WeightedGraph graph;            // base vertices, then one apex per cone
  std::size_t base_count = 0;
  std::vector<Vertex> apices;
  std::size_t rim_edges = 0;      // apex to y, length rho
  std::size_t chord_edges = 0;    // y to y' when the apex angle is below pi
  FiniteMetricSpace metric;       // path metric of `graph`
};

ConeOffSpace build_coneoff(const WeightedGraph& g, const ConeFamily& q);

/// The action on base vertices and apices, where g maps the apex of (H, Y)
/// to the apex of (gHg^-1, gY). Throws std::invalid_argument when the family
/// is not invariant.
ActionTable extend_action_to_coneoff(const ActionTable& a, const ConeFamily& q,
                                     std::size_t base_count);

/// Longest overlap: max over distinct entries of overlap_diameter(Y1, Y2, delta),
/// with empty overlaps counting as 0.
double delta_param(const ConeFamily& q, const MetricView& m, double delta);

/// Shortest relation: min translation length over nontrivial elements of the
/// H's; kInfinity when every H is trivial.
double inj_param(const ConeFamily& q, const ActionTable& a, const MetricView& m);
/// The same for relation elements given as partial maps on a window.
double inj_param(std::span<const PointMap> relations, const MetricView& m);

struct ScConstants {
  double delta0 = 0.0;
  double Delta0 = 0.0;
  double rho0 = 0.0;
  double delta1 = 0.0;
};

struct SCParameters {
  double delta_X = 0.0;
  double Delta_Q = 0.0;
  double inj_Q = kInfinity;
  double rho = 0.0;
  std::optional<ScConstants> constants;
};

SCParameters compute_sc_parameters(const WeightedGraph& g, const ActionTable& a,
                                   const ConeFamily& q);

struct ScClause {
  std::string name;
  double value = 0.0;
  double bound = 0.0;
  double margin = 0.0;  // >= 0 when the clause holds
  bool holds = false;
};

struct ScCheckReport {
  bool holds = false;
  std::vector<ScClause> clauses;  // delta, Delta, inj, rho
  ScConstants constants;
};

/// delta <= delta0, Delta <= Delta0, inj >= 2 pi sinh rho and rho >= rho0,
/// all inclusive up to kTolerance. Throws std::invalid_argument when the
/// constants are missing.
ScCheckReport check_sc_hypotheses(const SCParameters& p);

/// max{1, pi sinh rho / (2 rho), D / (2 rho)}.
double quotient_lambda(double rho, double D);

struct QuotientComparison {
  double rho = 0.0;
  double D = 0.0;
  double lambda = 0.0;
  std::size_t pairs_checked = 0;
  bool lower_holds = true;  // d_bar <= d_XK
  bool upper_holds = true;  // d_XK <= lambda d_bar
  double max_ratio = 0.0;   // max d_XK / d_bar over pairs with d_bar > 0
  std::optional<std::pair<std::size_t, std::size_t>> worst_pair;
  double cobound = 0.0;     // max distance from a point of the cone-off quotient to X/K
  bool cobounded = true;    // cobound <= 2 rho
  bool holds() const { return lower_holds && upper_holds && cobounded; }
};

/// The first x_mod_k.size() points of coneoff_mod_k must be the base orbits,
/// in the same order; std::invalid_argument otherwise.
QuotientComparison quotient_comparison(const FiniteMetricSpace& x_mod_k,
                                       const FiniteMetricSpace& coneoff_mod_k, double rho,
                                       double D);

/// Largest diameter of the image of a cone's Y in the quotient.
double cone_image_diameter(const QuotientSpace& x_mod_k, const ConeFamily& q);

struct QuotientPipeline {
  ConeFamily family;  // expanded
  QuotientSpace base_quotient;
  ConeOffSpace coneoff;
  QuotientSpace coneoff_quotient;
  QuotientComparison comparison;
};

/// Cone-off of the expanded family, quotients by the subgroup generated by
/// K, and the comparison between them.
QuotientPipeline run_quotient_comparison(const WeightedGraph& g, const ActionTable& a,
                                         const ConeFamily& q, std::span<const Element> K);

/// Injectivity of F -> F / <<relators>> on the ball {g : |g| <= rho / 100} of
/// the free group on the same generators, decided by Dehn's algorithm on
/// every product g1 g2^-1.
InjectivityReport ball_injectivity_check(const Presentation& quotient, double rho);

}  // namespace hypcone
