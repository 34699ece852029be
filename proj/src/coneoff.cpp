#include "hypcone/coneoff.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace hypcone {

double cone_angle(double dY, double rho) {
  if (!(rho > 0.0)) throw std::invalid_argument("cone radius must be positive");
  if (dY < 0.0) throw std::invalid_argument("distance must be non-negative");
  if (!is_finite_length(dY)) return std::numbers::pi;
  return std::min(std::numbers::pi, dY / std::sinh(rho));
}

double cone_distance(double r, double r2, double dY, double rho) {
  const double theta = cone_angle(dY, rho);
  if (r < 0.0 || r2 < 0.0 || r > rho + kTolerance || r2 > rho + kTolerance) {
    throw std::invalid_argument("cone heights must lie in [0, rho]");
  }
  const double a = std::sinh(0.5 * (r - r2));
  const double s = std::sin(0.5 * theta);
  return 2.0 * std::asinh(std::sqrt(a * a + std::sinh(r) * std::sinh(r2) * s * s));
}

ConeFamily normalize_family(ConeFamily q, const ActionTable* a, std::size_t point_count) {
  if (!(q.rho > 0.0) || !std::isfinite(q.rho)) {
    throw std::invalid_argument("cone radius must be positive");
  }
  for (std::size_t i = 0; i < q.cones.size(); ++i) {
    auto& c = q.cones[i];
    const std::string where = "cone " + std::to_string(i);
    if (c.Y.empty()) throw std::invalid_argument(where + ": Y must be nonempty");
    c.Y = make_subset(std::move(c.Y), point_count);
    if (!a) {
      for (Element h : c.H) {
        if (h != 0) throw std::invalid_argument(where + ": H needs an action");
      }
      c.H = {0};
      continue;
    }
    for (Element h : c.H) {
      if (h >= a->order()) throw std::invalid_argument(where + ": element out of range");
    }
    c.H = a->subgroup_closure(c.H);
    for (Element h : c.H) {
      Subset image;
      for (Vertex y : c.Y) image.push_back(a->apply(h, y));
      std::sort(image.begin(), image.end());
      if (image != c.Y) {
        throw std::invalid_argument(where + ": element " + std::to_string(h) +
                                    " does not stabilize Y");
      }
    }
  }
  return q;
}

namespace {

using ConeKey = std::pair<Subset, std::vector<Element>>;

ConeEntry translate_entry(const ConeEntry& c, const ActionTable& a, Element g) {
  ConeEntry out;
  for (Vertex y : c.Y) out.Y.push_back(a.apply(g, y));
  std::sort(out.Y.begin(), out.Y.end());
  for (Element h : c.H) out.H.push_back(a.conjugate(g, h));
  std::sort(out.H.begin(), out.H.end());
  return out;
}

}  // namespace

ConeFamily expand_family(const ConeFamily& q, const ActionTable& a) {
  ConeFamily out;
  out.rho = q.rho;
  std::map<ConeKey, std::size_t> seen;
  for (const auto& c : q.cones) {
    if (seen.emplace(ConeKey{c.Y, c.H}, out.cones.size()).second) out.cones.push_back(c);
  }
  for (std::size_t i = 0; i < out.cones.size(); ++i) {
    for (Element g = 0; g < a.order(); ++g) {
      ConeEntry t = translate_entry(out.cones[i], a, g);
      if (seen.emplace(ConeKey{t.Y, t.H}, out.cones.size()).second) out.cones.push_back(std::move(t));
    }
  }
  return out;
}

ConeOffSpace build_coneoff(const WeightedGraph& g, const ConeFamily& q) {
  ConeOffSpace out;
  out.base_count = g.vertex_count();
  out.graph = g;
  const bool labelled = !g.labels().empty();
  for (std::size_t i = 0; i < q.cones.size(); ++i) {
    const auto& c = q.cones[i];
    const Vertex apex = out.graph.add_vertex(labelled ? "apex" + std::to_string(i) : "");
    out.apices.push_back(apex);
    for (Vertex y : c.Y) {
      out.graph.add_edge(apex, y, q.rho);
      ++out.rim_edges;
    }
    const auto induced = induced_length_metric(g, c.Y);
    for (std::size_t s = 0; s < c.Y.size(); ++s) {
      for (std::size_t t = s + 1; t < c.Y.size(); ++t) {
        const double dY = induced.induced(s, t);
        if (cone_angle(dY, q.rho) >= std::numbers::pi) continue;
        out.graph.add_edge(c.Y[s], c.Y[t], cone_distance(q.rho, q.rho, dY, q.rho));
        ++out.chord_edges;
      }
    }
  }
  if (!labelled && !q.cones.empty()) {
    std::vector<std::string> labels;
    for (Vertex v = 0; v < out.base_count; ++v) labels.push_back(std::to_string(v));
    for (std::size_t i = 0; i < q.cones.size(); ++i) labels.push_back("apex" + std::to_string(i));
    out.graph.set_labels(std::move(labels));
  }
  out.metric = path_metric(out.graph);
  return out;
}

ActionTable extend_action_to_coneoff(const ActionTable& a, const ConeFamily& q,
                                     std::size_t base_count) {
  if (a.point_count() != base_count) throw std::invalid_argument("action and graph sizes differ");
  std::map<ConeKey, std::size_t> index;
  for (std::size_t i = 0; i < q.cones.size(); ++i) index.emplace(ConeKey{q.cones[i].Y, q.cones[i].H}, i);
  std::vector<std::vector<Vertex>> perms;
  for (Element g = 0; g < a.order(); ++g) {
    std::vector<Vertex> p(base_count + q.cones.size());
    for (Vertex x = 0; x < base_count; ++x) p[x] = a.apply(g, x);
    for (std::size_t i = 0; i < q.cones.size(); ++i) {
      const ConeEntry t = translate_entry(q.cones[i], a, g);
      auto it = index.find(ConeKey{t.Y, t.H});
      if (it == index.end()) {
        throw std::invalid_argument("cone family is not invariant under the action");
      }
      p[base_count + i] = base_count + it->second;
    }
    perms.push_back(std::move(p));
  }
  return ActionTable(a.multiplication_table(), std::move(perms), a.generators());
}

double delta_param(const ConeFamily& q, const MetricView& m, double delta) {
  double best = 0.0;
  for (std::size_t i = 0; i < q.cones.size(); ++i) {
    for (std::size_t j = i + 1; j < q.cones.size(); ++j) {
      const auto d = overlap_diameter(m, q.cones[i].Y, q.cones[j].Y, delta);
      if (d) best = std::max(best, *d);
    }
  }
  return best;
}

double inj_param(const ConeFamily& q, const ActionTable& a, const MetricView& m) {
  double best = kInfinity;
  for (const auto& c : q.cones) {
    for (Element h : c.H) {
      if (h != a.identity()) best = std::min(best, translation_length(a, m, h));
    }
  }
  return best;
}

double inj_param(std::span<const PointMap> relations, const MetricView& m) {
  double best = kInfinity;
  for (const auto& h : relations) best = std::min(best, translation_length(h, m));
  return best;
}

SCParameters compute_sc_parameters(const WeightedGraph& g, const ActionTable& a,
                                   const ConeFamily& q) {
  const FiniteMetricSpace m = path_metric(g);
  const ConeFamily expanded = expand_family(q, a);
  SCParameters p;
  p.rho = q.rho;
  p.delta_X = hyperbolicity_delta(m).delta;
  p.Delta_Q = delta_param(expanded, m, p.delta_X);
  p.inj_Q = inj_param(expanded, a, m);
  return p;
}

ScCheckReport check_sc_hypotheses(const SCParameters& p) {
  if (!p.constants) {
    throw std::invalid_argument(
        "small cancellation constants are not configured: supply a constants file with "
        "delta0, Delta0, rho0, delta1 (--constants or HYPCONE_CONSTANTS)");
  }
  ScCheckReport report;
  report.constants = *p.constants;
  const auto& c = *p.constants;
  auto clause = [&](std::string name, double value, double bound, double margin) {
    report.clauses.push_back({std::move(name), value, bound, margin, margin >= -kTolerance});
  };
  clause("delta <= delta0", p.delta_X, c.delta0, c.delta0 - p.delta_X);
  clause("Delta <= Delta0", p.Delta_Q, c.Delta0, c.Delta0 - p.Delta_Q);
  const double threshold = 2.0 * std::numbers::pi * std::sinh(p.rho);
  clause("inj >= 2 pi sinh rho", p.inj_Q, threshold,
         is_finite_length(p.inj_Q) ? p.inj_Q - threshold : kInfinity);
  clause("rho >= rho0", p.rho, c.rho0, p.rho - c.rho0);
  report.holds = std::all_of(report.clauses.begin(), report.clauses.end(),
                             [](const ScClause& k) { return k.holds; });
  return report;
}

double quotient_lambda(double rho, double D) {
  if (!(rho > 0.0)) throw std::invalid_argument("cone radius must be positive");
  return std::max({1.0, std::numbers::pi * std::sinh(rho) / (2.0 * rho), D / (2.0 * rho)});
}

QuotientComparison quotient_comparison(const FiniteMetricSpace& x_mod_k,
                                       const FiniteMetricSpace& coneoff_mod_k, double rho,
                                       double D) {
  const std::size_t n = x_mod_k.size();
  if (coneoff_mod_k.size() < n) {
    throw std::invalid_argument("vertex mismatch: the cone-off quotient has fewer points (" +
                                std::to_string(coneoff_mod_k.size()) + ") than X/K (" +
                                std::to_string(n) + ")");
  }
  QuotientComparison out;
  out.rho = rho;
  out.D = D;
  out.lambda = quotient_lambda(rho, D);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double quotient = x_mod_k(i, j), bar = coneoff_mod_k(i, j);
      ++out.pairs_checked;
      if (bar > quotient + kTolerance) out.lower_holds = false;
      double ratio;
      if (bar > kTolerance) {
        ratio = quotient / bar;
      } else {
        ratio = quotient > kTolerance ? kInfinity : 1.0;
      }
      if (!out.worst_pair || ratio > out.max_ratio) {
        out.max_ratio = ratio;
        out.worst_pair = std::pair{i, j};
      }
      if (quotient > out.lambda * bar + kTolerance) out.upper_holds = false;
    }
  }
  for (std::size_t p = 0; p < coneoff_mod_k.size(); ++p) {
    double nearest = kInfinity;
    for (std::size_t b = 0; b < n; ++b) nearest = std::min(nearest, coneoff_mod_k(p, b));
    out.cobound = std::max(out.cobound, nearest);
  }
  out.cobounded = out.cobound <= 2.0 * rho + kTolerance;
  return out;
}

double cone_image_diameter(const QuotientSpace& x_mod_k, const ConeFamily& q) {
  double best = 0.0;
  for (const auto& c : q.cones) {
    Subset image;
    for (Vertex y : c.Y) image.push_back(x_mod_k.orbit_of.at(y));
    image = make_subset(std::move(image), x_mod_k.metric.size());
    best = std::max(best, diameter(x_mod_k.metric, image));
  }
  return best;
}

QuotientPipeline run_quotient_comparison(const WeightedGraph& g, const ActionTable& a,
                                         const ConeFamily& q, std::span<const Element> K) {
  QuotientPipeline out;
  const FiniteMetricSpace m = path_metric(g);
  out.family = expand_family(q, a);
  out.base_quotient = quotient_metric(m, a, K);
  out.coneoff = build_coneoff(g, out.family);
  const ActionTable extended = extend_action_to_coneoff(a, out.family, g.vertex_count());
  out.coneoff_quotient = quotient_metric(out.coneoff.metric, extended, K);
  for (std::size_t i = 0; i < out.base_quotient.orbits.size(); ++i) {
    if (out.coneoff_quotient.orbits.size() <= i ||
        out.coneoff_quotient.orbits[i] != out.base_quotient.orbits[i]) {
      throw std::logic_error("base orbits do not lead the cone-off quotient");
    }
  }
  const double D = cone_image_diameter(out.base_quotient, out.family);
  out.comparison = quotient_comparison(out.base_quotient.metric, out.coneoff_quotient.metric,
                                       q.rho, D);
  return out;
}

InjectivityReport ball_injectivity_check(const Presentation& quotient, double rho) {
  if (rho < 0.0) throw std::invalid_argument("rho must be non-negative");
  const DehnReducer reducer(quotient);
  const auto radius = static_cast<long>(std::floor(rho / 100.0 + kTolerance));
  const CayleyWindow ball = cayley_ball(free_presentation(quotient.generators.size()), radius);
  const auto& names = quotient.generators;

  InjectivityReport report;
  report.ball_size = ball.size();
  report.heuristic = !reducer.verified();
  if (report.heuristic) report.note = "C'(1/6) not verified; Dehn verdicts are heuristic";
  const auto& words = ball.elements();
  for (std::size_t i = 0; i < words.size(); ++i) {
    for (std::size_t j = i + 1; j < words.size(); ++j) {
      if (reducer.reduce(words[i] * words[j].inverse()).trivial) {
        report.status = InjectivityReport::Status::collision;
        report.collision = std::pair{to_string(words[i], names), to_string(words[j], names)};
        return report;
      }
    }
  }
  return report;
}

}  // namespace hypcone
