#include "hypcone/actions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

namespace hypcone {

namespace {

constexpr std::size_t kMaxGeneratedOrder = 20000;

std::string str(std::size_t v) { return std::to_string(v); }

}  // namespace

// ---------------------------------------------------------------------------
// ActionTable
// ---------------------------------------------------------------------------

ActionTable::ActionTable(std::vector<std::vector<Element>> multiplication,
                         std::vector<std::vector<Vertex>> permutations,
                         std::vector<Element> generators)
    : mult_(std::move(multiplication)),
      perm_(std::move(permutations)),
      generators_(std::move(generators)) {
  const std::size_t k = mult_.size();
  if (k == 0) throw std::invalid_argument("group must have at least one element");
  for (std::size_t g = 0; g < k; ++g) {
    if (mult_[g].size() != k) {
      throw std::invalid_argument("multiplication row " + str(g) + " has " +
                                  str(mult_[g].size()) + " entries, expected " + str(k));
    }
    for (Element h : mult_[g]) {
      if (h >= k) throw std::invalid_argument("multiplication entry out of range in row " + str(g));
    }
  }

  bool found_identity = false;
  for (Element e = 0; e < k && !found_identity; ++e) {
    bool ok = true;
    for (Element g = 0; g < k && ok; ++g) ok = mult_[e][g] == g && mult_[g][e] == g;
    if (ok) {
      identity_ = e;
      found_identity = true;
    }
  }
  if (!found_identity) throw std::invalid_argument("multiplication table has no identity");

  inverse_.assign(k, k);
  for (Element g = 0; g < k; ++g) {
    for (Element h = 0; h < k; ++h) {
      if (mult_[g][h] == identity_ && mult_[h][g] == identity_) {
        inverse_[g] = h;
        break;
      }
    }
    if (inverse_[g] == k) throw std::invalid_argument("element " + str(g) + " has no inverse");
  }

  for (Element a = 0; a < k; ++a) {
    for (Element b = 0; b < k; ++b) {
      const Element ab = mult_[a][b];
      for (Element c = 0; c < k; ++c) {
        if (mult_[ab][c] != mult_[a][mult_[b][c]]) {
          throw std::invalid_argument("multiplication is not associative at (" + str(a) + ", " +
                                      str(b) + ", " + str(c) + ")");
        }
      }
    }
  }

  if (perm_.size() != k) {
    throw std::invalid_argument("expected one permutation per group element (" + str(k) +
                                "), got " + str(perm_.size()));
  }
  point_count_ = perm_[0].size();
  for (Element g = 0; g < k; ++g) {
    if (perm_[g].size() != point_count_) {
      throw std::invalid_argument("permutation " + str(g) + " has the wrong length");
    }
    std::vector<bool> seen(point_count_, false);
    for (Vertex x : perm_[g]) {
      if (x >= point_count_ || seen[x]) {
        throw std::invalid_argument("entry " + str(g) + " is not a permutation");
      }
      seen[x] = true;
    }
  }
  for (Element g = 0; g < k; ++g) {
    for (Element h = 0; h < k; ++h) {
      const auto& gh = perm_[mult_[g][h]];
      for (Vertex x = 0; x < point_count_; ++x) {
        if (gh[x] != perm_[g][perm_[h][x]]) {
          throw std::invalid_argument("permutations do not form a homomorphism at (" + str(g) +
                                      ", " + str(h) + ")");
        }
      }
    }
  }
  for (Element s : generators_) {
    if (s >= k) throw std::invalid_argument("generator index out of range");
  }
}

ActionTable ActionTable::from_generators(std::size_t point_count,
                                         const std::vector<std::vector<Vertex>>& generators) {
  std::vector<Vertex> id(point_count);
  for (Vertex x = 0; x < point_count; ++x) id[x] = x;
  for (const auto& s : generators) {
    if (s.size() != point_count) throw std::invalid_argument("generator has the wrong length");
  }

  std::vector<std::vector<Vertex>> elements{id};
  std::map<std::vector<Vertex>, Element> index{{id, 0}};
  std::vector<Element> gen_index;
  for (const auto& s : generators) {
    auto [it, inserted] = index.emplace(s, elements.size());
    if (inserted) elements.push_back(s);
    gen_index.push_back(it->second);
  }
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (const auto& s : generators) {
      std::vector<Vertex> composed(point_count);
      for (Vertex x = 0; x < point_count; ++x) composed[x] = s[elements[i][x]];
      if (index.emplace(composed, elements.size()).second) {
        elements.push_back(std::move(composed));
        if (elements.size() > kMaxGeneratedOrder) {
          throw std::length_error("generated group exceeds " + str(kMaxGeneratedOrder) +
                                  " elements");
        }
      }
    }
  }

  const std::size_t k = elements.size();
  std::vector<std::vector<Element>> mult(k, std::vector<Element>(k));
  std::vector<Vertex> composed(point_count);
  for (Element g = 0; g < k; ++g) {
    for (Element h = 0; h < k; ++h) {
      for (Vertex x = 0; x < point_count; ++x) composed[x] = elements[g][elements[h][x]];
      auto it = index.find(composed);
      if (it == index.end()) throw std::logic_error("permutation group is not closed");
      mult[g][h] = it->second;
    }
  }
  return ActionTable(std::move(mult), std::move(elements), std::move(gen_index));
}

ActionTable ActionTable::trivial(std::size_t point_count) {
  std::vector<Vertex> id(point_count);
  for (Vertex x = 0; x < point_count; ++x) id[x] = x;
  return ActionTable({{0}}, {id});
}

PointMap ActionTable::point_map(Element g) const {
  PointMap out(point_count_);
  for (Vertex x = 0; x < point_count_; ++x) out[x] = perm_[g][x];
  return out;
}

std::vector<Element> ActionTable::subgroup_closure(std::span<const Element> elements) const {
  std::vector<bool> in(order(), false);
  std::vector<Element> members{identity_};
  in[identity_] = true;
  for (Element g : elements) {
    if (g >= order()) throw std::out_of_range("element index " + str(g) + " out of range");
    if (!in[g]) {
      in[g] = true;
      members.push_back(g);
    }
  }
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      for (Element p : {multiply(members[i], members[j]), multiply(members[j], members[i])}) {
        if (!in[p]) {
          in[p] = true;
          members.push_back(p);
        }
      }
    }
  }
  std::sort(members.begin(), members.end());
  return members;
}

std::vector<Element> ActionTable::normal_closure(std::span<const Element> elements) const {
  std::vector<Element> conjugates;
  for (Element k : elements) {
    for (Element u = 0; u < order(); ++u) conjugates.push_back(conjugate(u, k));
  }
  return subgroup_closure(conjugates);
}

bool ActionTable::is_subgroup(std::span<const Element> elements) const {
  std::vector<Element> sorted(elements.begin(), elements.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  return !sorted.empty() && subgroup_closure(sorted) == sorted;
}

ActionTable ActionTable::restrict_to(std::span<const Element> subgroup) const {
  if (!is_subgroup(subgroup)) throw std::invalid_argument("elements do not form a subgroup");
  std::vector<Element> local(order(), order());
  for (std::size_t i = 0; i < subgroup.size(); ++i) local[subgroup[i]] = i;
  std::vector<std::vector<Element>> mult(subgroup.size(), std::vector<Element>(subgroup.size()));
  std::vector<std::vector<Vertex>> perms;
  for (std::size_t i = 0; i < subgroup.size(); ++i) {
    for (std::size_t j = 0; j < subgroup.size(); ++j) {
      mult[i][j] = local[multiply(subgroup[i], subgroup[j])];
    }
    perms.push_back(perm_[subgroup[i]]);
  }
  return ActionTable(std::move(mult), std::move(perms));
}

bool ActionTable::is_isometric(const MetricView& m) const {
  if (m.size() != point_count_) return false;
  for (Element g = 0; g < order(); ++g) {
    const auto& p = perm_[g];
    for (Vertex x = 0; x < point_count_; ++x) {
      for (Vertex y = x + 1; y < point_count_; ++y) {
        const double a = m.distance(x, y), b = m.distance(p[x], p[y]);
        if (a == b) continue;
        if (!is_finite_length(a) || !is_finite_length(b) || std::abs(a - b) > kTolerance) {
          return false;
        }
      }
    }
  }
  return true;
}

namespace {

using EdgeKey = std::tuple<Vertex, Vertex, double>;

EdgeKey edge_key(Vertex u, Vertex v, double length) {
  return {std::min(u, v), std::max(u, v), length};
}

// Edge indices grouped by (endpoints, length), in index order.
std::map<EdgeKey, std::vector<std::size_t>> edge_classes(const WeightedGraph& g) {
  std::map<EdgeKey, std::vector<std::size_t>> classes;
  for (std::size_t i = 0; i < g.edges().size(); ++i) {
    const auto& e = g.edges()[i];
    classes[edge_key(e.u, e.v, e.length)].push_back(i);
  }
  return classes;
}

}  // namespace

bool ActionTable::preserves_edges(const WeightedGraph& g) const {
  if (g.vertex_count() != point_count_) return false;
  const auto classes = edge_classes(g);
  for (Element el = 0; el < order(); ++el) {
    const auto& p = perm_[el];
    for (const auto& [key, members] : classes) {
      auto it = classes.find(edge_key(p[std::get<0>(key)], p[std::get<1>(key)], std::get<2>(key)));
      if (it == classes.end() || it->second.size() != members.size()) return false;
    }
  }
  return true;
}

bool ActionTable::acts_without_inversion(const WeightedGraph& g) const {
  for (const auto& e : g.edges()) {
    if (e.u == e.v) continue;
    for (Element el = 0; el < order(); ++el) {
      if (perm_[el][e.u] == e.v && perm_[el][e.v] == e.u) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Displacement
// ---------------------------------------------------------------------------

PropernessReport uniform_properness_bound(const ActionTable& a, const MetricView& m, double r) {
  if (a.point_count() != m.size()) throw std::invalid_argument("action and metric sizes differ");
  PropernessReport report;
  report.r = r;
  for (Vertex x = 0; x < m.size(); ++x) {
    std::size_t count = 0;
    for (Element g = 0; g < a.order(); ++g) {
      if (m.distance(x, a.apply(g, x)) <= r + kTolerance) ++count;
    }
    if (count > report.bound) {
      report.bound = count;
      report.center = x;
    }
  }
  return report;
}

double translation_length(const PointMap& g, const MetricView& m) {
  double best = kInfinity;
  bool any = false;
  for (Vertex x = 0; x < g.size(); ++x) {
    if (!g[x]) continue;
    any = true;
    best = std::min(best, m.distance(x, *g[x]));
  }
  if (!any) throw std::domain_error("element maps every point out of the window");
  return best;
}

double translation_length(const ActionTable& a, const MetricView& m, Element g) {
  return translation_length(a.point_map(g), m);
}

Subset min_set_axis(const PointMap& g, const MetricView& m) {
  const double tl = translation_length(g, m);
  Subset out;
  for (Vertex x = 0; x < g.size(); ++x) {
    if (g[x] && m.distance(x, *g[x]) <= tl + kTolerance) out.push_back(x);
  }
  return out;
}

Subset min_set_axis(const ActionTable& a, const MetricView& m, Element g) {
  return min_set_axis(a.point_map(g), m);
}

Subset translate(const PointMap& g, std::span<const Vertex> Y) {
  Subset out;
  for (Vertex y : Y) {
    if (y < g.size() && g[y]) out.push_back(*g[y]);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<double> overlap_diameter(const MetricView& m, std::span<const Vertex> Y1,
                                       std::span<const Vertex> Y2, double delta) {
  if (delta < 0.0) throw std::invalid_argument("delta must be non-negative");
  const Subset n1 = neighborhood(m, Y1, 5.0 * delta);
  const Subset n2 = neighborhood(m, Y2, 5.0 * delta);
  Subset both;
  std::set_intersection(n1.begin(), n1.end(), n2.begin(), n2.end(), std::back_inserter(both));
  if (both.empty()) return std::nullopt;
  return diameter(m, both);
}

// ---------------------------------------------------------------------------
// Classification on windows
// ---------------------------------------------------------------------------

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::elliptic: return "elliptic";
    case Verdict::loxodromic: return "loxodromic";
    default: return "inconclusive";
  }
}

ClassificationReport classify_element(const PointMap& g, const MetricView& m, Vertex base,
                                      std::size_t n_max, double delta) {
  if (base >= g.size()) throw std::out_of_range("base point out of range");
  ClassificationReport report;
  report.translation_length = translation_length(g, m);

  std::vector<double> displacement;
  Vertex current = base;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (!g[current]) break;
    current = *g[current];
    const double d = m.distance(base, current);
    displacement.push_back(d);
    report.stable_estimates.push_back(d / static_cast<double>(n));
    report.steps = n;
    if (current == base) {
      report.verdict = Verdict::elliptic;
      report.stable_length = 0.0;
      return report;
    }
  }
  if (report.steps > 0) report.stable_length = report.stable_estimates.back();
  if (report.steps < n_max || n_max < 2) return report;

  bool increasing = true;
  for (std::size_t i = 1; i < displacement.size(); ++i) {
    increasing = increasing && displacement[i] > displacement[i - 1] + kTolerance;
  }
  if (increasing && displacement[1] > displacement[0] + 2.0 * delta + kTolerance) {
    report.verdict = Verdict::loxodromic;
  }
  return report;
}

std::size_t min_power_for_threshold(double stable_length, double threshold) {
  if (threshold <= 0.0) return 1;
  if (!(stable_length > 0.0)) throw std::domain_error("stable length must be positive");
  const double n = std::ceil((threshold - kTolerance) / stable_length);
  return std::max<std::size_t>(1, static_cast<std::size_t>(n));
}

PowerThreshold min_power_for_injectivity(const PointMap& g, const MetricView& m, Vertex base,
                                         std::size_t n_max, double rho, double delta) {
  if (rho < 0.0) throw std::invalid_argument("rho must be non-negative");
  PowerThreshold out;
  out.threshold = 2.0 * std::numbers::pi * std::sinh(rho);
  const auto report = classify_element(g, m, base, n_max, delta);
  if (report.verdict == Verdict::elliptic) {
    out.elliptic = true;
    return out;
  }
  if (report.verdict == Verdict::inconclusive) throw std::runtime_error("insufficient window");
  out.stable_length = report.stable_length;
  out.power = min_power_for_threshold(report.stable_length, out.threshold);
  return out;
}

// ---------------------------------------------------------------------------
// Orbit graph
// ---------------------------------------------------------------------------

OrbitGraph build_orbit_graph(const ActionTable& a, const MetricView& m, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("separation radius must be positive");
  if (!a.is_isometric(m)) throw std::invalid_argument("action is not isometric");

  OrbitGraph out;
  out.r = r;
  out.R = 2.0 * r + 1.0;

  std::vector<Element> everything(a.order());
  for (Element g = 0; g < a.order(); ++g) everything[g] = g;
  const QuotientSpace orbit_space = quotient_metric(m, a, everything);
  for (Vertex orbit : greedy_maximal_net(orbit_space.metric, r)) {
    out.net_representatives.push_back(orbit_space.orbits[orbit].front());
  }

  const std::size_t k = a.order();
  const std::size_t n = out.net_representatives.size() * k;
  std::vector<Vertex> image(n);
  std::vector<std::string> labels(n);
  for (std::size_t si = 0; si < out.net_representatives.size(); ++si) {
    const Vertex s = out.net_representatives[si];
    for (Element u = 0; u < k; ++u) {
      const std::size_t v = si * k + u;
      out.vertices.push_back({u, s});
      image[v] = a.apply(u, s);
      labels[v] = "(" + str(u) + "," + str(s) + ")";
    }
  }
  out.graph = WeightedGraph(n, {}, std::move(labels));
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = v + 1; w < n; ++w) {
      if (m.distance(image[v], image[w]) <= out.R + kTolerance) out.graph.add_edge(v, w, 1.0);
    }
  }

  std::vector<std::vector<Vertex>> perms(k, std::vector<Vertex>(n));
  for (Element g = 0; g < k; ++g) {
    for (std::size_t si = 0; si < out.net_representatives.size(); ++si) {
      for (Element u = 0; u < k; ++u) perms[g][si * k + u] = si * k + a.multiply(g, u);
    }
  }
  out.action = ActionTable(a.multiplication_table(), std::move(perms), a.generators());
  for (Element g = 0; g < k; ++g) {
    if (g == a.identity()) continue;
    for (std::size_t v = 0; v < n; ++v) {
      if (out.action.apply(g, v) == v) out.action_free = false;
    }
  }
  out.edges_invariant = out.action.preserves_edges(out.graph);
  out.max_valence = out.graph.max_valence();
  out.capacity_bound = bounded_geometry_bound(m, r, out.R).bound;
  out.properness_bound = uniform_properness_bound(a, m, 2.0 * out.R).bound;

  const FiniteMetricSpace graph_metric = path_metric(out.graph);
  auto& dist = out.distortion;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = v + 1; w < n; ++w) {
      const double dx = m.distance(image[v], image[w]);
      const double dg = graph_metric(v, w);
      if (!is_finite_length(dg) || !is_finite_length(dx)) {
        if (is_finite_length(dg) != is_finite_length(dx)) dist.finite = false;
        continue;
      }
      dist.lipschitz = std::max(dist.lipschitz, dx / dg);
      if (dx > kTolerance) {
        dist.expansion = std::max(dist.expansion, dg / dx);
      } else {
        dist.additive = std::max(dist.additive, dg);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Quotients and subdivision
// ---------------------------------------------------------------------------

QuotientSpace quotient_metric(const MetricView& m, const ActionTable& a,
                              std::span<const Element> K) {
  if (a.point_count() != m.size()) throw std::invalid_argument("action and metric sizes differ");
  const std::vector<Element> subgroup = a.subgroup_closure(K);
  if (!a.restrict_to(subgroup).is_isometric(m)) {
    throw std::invalid_argument("subgroup does not act isometrically");
  }

  const std::size_t n = m.size();
  QuotientSpace q;
  q.orbit_of.assign(n, n);
  for (Vertex x = 0; x < n; ++x) {
    if (q.orbit_of[x] != n) continue;
    Subset orbit;
    for (Element k : subgroup) orbit.push_back(a.apply(k, x));
    std::sort(orbit.begin(), orbit.end());
    orbit.erase(std::unique(orbit.begin(), orbit.end()), orbit.end());
    for (Vertex y : orbit) q.orbit_of[y] = q.orbits.size();
    q.orbits.push_back(std::move(orbit));
  }

  const std::size_t c = q.orbits.size();
  std::vector<double> d(c * c, kInfinity);
  for (std::size_t i = 0; i < c; ++i) d[i * c + i] = 0.0;
  for (Vertex x = 0; x < n; ++x) {
    for (Vertex y = 0; y < n; ++y) {
      const std::size_t i = q.orbit_of[x], j = q.orbit_of[y];
      d[i * c + j] = std::min(d[i * c + j], m.distance(x, y));
    }
  }
  for (std::size_t i = 0; i < c; ++i) {
    for (std::size_t j = i + 1; j < c; ++j) {
      if (d[i * c + j] <= kTolerance) q.collapsed.emplace_back(i, j);
    }
  }
  q.metric = FiniteMetricSpace::from_trusted(c, std::move(d));
  return q;
}

Subdivision barycentric_subdivision(const WeightedGraph& g, const ActionTable& a) {
  if (!a.preserves_edges(g)) throw std::invalid_argument("action does not preserve the graph");
  const std::size_t n = g.vertex_count();
  const auto& edges = g.edges();

  Subdivision out;
  out.graph = WeightedGraph(n + edges.size());
  std::vector<std::string> labels;
  if (!g.labels().empty()) labels = g.labels();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    const Vertex mid = n + i;
    out.midpoint.push_back(mid);
    out.graph.add_edge(e.u, mid, e.length / 2.0);
    out.graph.add_edge(mid, e.v, e.length / 2.0);
    if (!labels.empty()) labels.push_back("mid(" + g.label(e.u) + "," + g.label(e.v) + ")");
  }
  if (!labels.empty()) out.graph.set_labels(std::move(labels));

  // The k-th edge of a class (endpoints, length) goes to the k-th edge of the
  // image class, which keeps the induced map a homomorphism.
  const auto classes = edge_classes(g);
  std::vector<std::size_t> rank(edges.size());
  for (const auto& [key, members] : classes) {
    for (std::size_t r = 0; r < members.size(); ++r) rank[members[r]] = r;
  }
  std::vector<std::vector<Vertex>> perms;
  for (Element el = 0; el < a.order(); ++el) {
    std::vector<Vertex> p(n + edges.size());
    for (Vertex x = 0; x < n; ++x) p[x] = a.apply(el, x);
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const auto& e = edges[i];
      const auto& target = classes.at(edge_key(p[e.u], p[e.v], e.length));
      p[n + i] = n + target[rank[i]];
    }
    perms.push_back(std::move(p));
  }
  out.action = ActionTable(a.multiplication_table(), std::move(perms), a.generators());
  return out;
}

std::string to_string(InjectivityReport::Status s) {
  switch (s) {
    case InjectivityReport::Status::injective: return "injective";
    case InjectivityReport::Status::collision: return "collision";
    default: return "inconclusive";
  }
}

InjectivityReport ball_injectivity_check(const ActionTable& a, const MetricView& m,
                                         std::span<const Element> K, Vertex x, double rho) {
  if (rho < 0.0) throw std::invalid_argument("rho must be non-negative");
  if (x >= m.size()) throw std::out_of_range("base point out of range");
  const auto normal = a.normal_closure(K);
  std::vector<bool> in_kernel(a.order(), false);
  for (Element k : normal) in_kernel[k] = true;

  std::vector<Element> small;
  for (Element g = 0; g < a.order(); ++g) {
    if (m.distance(a.apply(g, x), x) <= rho / 100.0 + kTolerance) small.push_back(g);
  }
  InjectivityReport report;
  report.ball_size = small.size();
  for (std::size_t i = 0; i < small.size(); ++i) {
    for (std::size_t j = i + 1; j < small.size(); ++j) {
      if (in_kernel[a.multiply(a.inverse(small[i]), small[j])]) {
        report.status = InjectivityReport::Status::collision;
        report.collision = std::pair{str(small[i]), str(small[j])};
        return report;
      }
    }
  }
  return report;
}

}  // namespace hypcone
