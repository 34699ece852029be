#include "hypcone/metric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <queue>
#include <stdexcept>
#include <string>
#include <thread>

namespace hypcone {

// ---------------------------------------------------------------------------
// WeightedGraph
// ---------------------------------------------------------------------------

WeightedGraph::WeightedGraph(std::size_t vertex_count) : vertex_count_(vertex_count) {}

WeightedGraph::WeightedGraph(std::size_t vertex_count, std::vector<Edge> edges,
                             std::vector<std::string> labels)
    : vertex_count_(vertex_count) {
  for (const auto& e : edges) check_edge(e);
  edges_ = std::move(edges);
  set_labels(std::move(labels));
}

void WeightedGraph::check_edge(const Edge& e) const {
  if (e.u >= vertex_count_ || e.v >= vertex_count_) {
    throw std::out_of_range("edge endpoint out of range: (" + std::to_string(e.u) + ", " +
                            std::to_string(e.v) + ") with " +
                            std::to_string(vertex_count_) + " vertices");
  }
  if (!(e.length > 0.0) || !std::isfinite(e.length)) {
    throw std::invalid_argument("edge length must be positive and finite, got " +
                                std::to_string(e.length));
  }
}

void WeightedGraph::add_edge(Vertex u, Vertex v, double length) {
  Edge e{u, v, length};
  check_edge(e);
  edges_.push_back(e);
}

Vertex WeightedGraph::add_vertex(std::string label) {
  if (!labels_.empty() || !label.empty()) {
    if (labels_.empty()) {
      labels_.reserve(vertex_count_ + 1);
      for (Vertex v = 0; v < vertex_count_; ++v) labels_.push_back(std::to_string(v));
    }
    labels_.push_back(label.empty() ? std::to_string(vertex_count_) : std::move(label));
  }
  return vertex_count_++;
}

void WeightedGraph::set_labels(std::vector<std::string> labels) {
  if (!labels.empty() && labels.size() != vertex_count_) {
    throw std::invalid_argument("expected " + std::to_string(vertex_count_) + " labels, got " +
                                std::to_string(labels.size()));
  }
  labels_ = std::move(labels);
}

std::string WeightedGraph::label(Vertex v) const {
  return labels_.empty() ? std::to_string(v) : labels_.at(v);
}

WeightedGraph::Adjacency WeightedGraph::adjacency() const {
  Adjacency adj(vertex_count_);
  for (const auto& e : edges_) {
    adj[e.u].emplace_back(e.v, e.length);
    if (e.u != e.v) adj[e.v].emplace_back(e.u, e.length);
  }
  return adj;
}

std::size_t WeightedGraph::valence(Vertex v) const {
  std::size_t count = 0;
  for (const auto& e : edges_) {
    if (e.u == v) ++count;
    if (e.v == v) ++count;
  }
  return count;
}

std::size_t WeightedGraph::max_valence() const {
  std::vector<std::size_t> deg(vertex_count_, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    ++deg[e.v];
  }
  return deg.empty() ? 0 : *std::max_element(deg.begin(), deg.end());
}

WeightedGraph WeightedGraph::induced_subgraph(std::span<const Vertex> members) const {
  std::vector<std::size_t> position(vertex_count_, SIZE_MAX);
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (members[i] >= vertex_count_) throw std::out_of_range("subset member out of range");
    position[members[i]] = i;
  }
  WeightedGraph sub(members.size());
  for (const auto& e : edges_) {
    if (position[e.u] != SIZE_MAX && position[e.v] != SIZE_MAX) {
      sub.add_edge(position[e.u], position[e.v], e.length);
    }
  }
  if (!labels_.empty()) {
    std::vector<std::string> labels;
    labels.reserve(members.size());
    for (Vertex v : members) labels.push_back(labels_[v]);
    sub.set_labels(std::move(labels));
  }
  return sub;
}

// ---------------------------------------------------------------------------
// FiniteMetricSpace
// ---------------------------------------------------------------------------

FiniteMetricSpace::FiniteMetricSpace(std::size_t n, std::vector<double> row_major)
    : n_(n), d_(std::move(row_major)) {
  if (d_.size() != n_ * n_) {
    throw std::invalid_argument("distance matrix has " + std::to_string(d_.size()) +
                                " entries, expected " + std::to_string(n_ * n_));
  }
  auto at = [this](std::size_t i, std::size_t j) -> double& { return d_[i * n_ + j]; };
  auto where = [](std::size_t i, std::size_t j) {
    return "(" + std::to_string(i) + ", " + std::to_string(j) + ")";
  };
  for (std::size_t i = 0; i < n_; ++i) {
    if (at(i, i) != 0.0) throw std::invalid_argument("nonzero diagonal entry at " + where(i, i));
    for (std::size_t j = 0; j < n_; ++j) {
      double v = at(i, j);
      if (std::isnan(v) || v < 0.0 || v == -kInfinity) {
        throw std::invalid_argument("distance must be non-negative at " + where(i, j));
      }
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      double a = at(i, j), b = at(j, i);
      if (a == b) continue;
      double scale = std::max({1.0, std::abs(a), std::abs(b)});
      if (!is_finite_length(a) || !is_finite_length(b) || std::abs(a - b) > kTolerance * scale) {
        throw std::invalid_argument("distance matrix is not symmetric at " + where(i, j));
      }
      at(i, j) = at(j, i) = std::min(a, b);
    }
  }
  for (std::size_t y = 0; y < n_; ++y) {
    for (std::size_t x = 0; x < n_; ++x) {
      double dxy = at(x, y);
      if (!is_finite_length(dxy)) continue;
      for (std::size_t z = 0; z < n_; ++z) {
        double via = dxy + at(y, z);
        double direct = at(x, z);
        if (direct > via + kTolerance * std::max(1.0, via)) {
          throw std::invalid_argument("triangle inequality fails for points " + std::to_string(x) +
                                      ", " + std::to_string(y) + ", " + std::to_string(z));
        }
      }
    }
  }
}

FiniteMetricSpace FiniteMetricSpace::from_rows(const std::vector<std::vector<double>>& rows) {
  std::vector<double> flat;
  flat.reserve(rows.size() * rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) {
      throw std::invalid_argument("row " + std::to_string(i) + " has " +
                                  std::to_string(rows[i].size()) + " entries, expected " +
                                  std::to_string(rows.size()));
    }
    flat.insert(flat.end(), rows[i].begin(), rows[i].end());
  }
  return FiniteMetricSpace(rows.size(), std::move(flat));
}

FiniteMetricSpace FiniteMetricSpace::from_trusted(std::size_t n, std::vector<double> row_major) {
  FiniteMetricSpace m;
  m.n_ = n;
  m.d_ = std::move(row_major);
  return m;
}

bool FiniteMetricSpace::connected() const {
  return std::all_of(d_.begin(), d_.end(), is_finite_length);
}

double FiniteMetricSpace::diameter() const {
  double best = 0.0;
  for (double v : d_) best = std::max(best, v);
  return best;
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

FiniteMetricSpace path_metric(const WeightedGraph& g) {
  const std::size_t n = g.vertex_count();
  const auto adj = g.adjacency();
  std::vector<double> d(n * n, kInfinity);

  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  for (Vertex s = 0; s < n; ++s) {
    double* row = d.data() + s * n;
    row[s] = 0.0;
    heap.emplace(0.0, s);
    while (!heap.empty()) {
      auto [du, u] = heap.top();
      heap.pop();
      if (du > row[u]) continue;
      for (auto [v, len] : adj[u]) {
        double cand = du + len;
        if (cand < row[v]) {
          row[v] = cand;
          heap.emplace(cand, v);
        }
      }
    }
  }
  // Dijkstra from either end can round differently on non-integer lengths.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = std::min(d[i * n + j], d[j * n + i]);
      d[i * n + j] = d[j * n + i] = v;
    }
  }
  return FiniteMetricSpace::from_trusted(n, std::move(d));
}

double gromov_product(const MetricView& m, Vertex x, Vertex y, Vertex z) {
  double dxz = m.distance(x, z), dyz = m.distance(y, z), dxy = m.distance(x, y);
  if (!is_finite_length(dxz) || !is_finite_length(dyz) || !is_finite_length(dxy)) {
    throw std::domain_error("disconnected triple");
  }
  return 0.5 * (dxz + dyz - dxy);
}

double four_point_defect(const MetricView& m, Vertex x, Vertex y, Vertex z, Vertex t) {
  return std::min(gromov_product(m, x, y, t), gromov_product(m, y, z, t)) -
         gromov_product(m, x, z, t);
}

namespace {

using Quadruple = std::array<Vertex, 4>;

// For p < q < r < s the three pair sums are
//   A = d(p,q) + d(r,s),  B = d(p,r) + d(q,s),  C = d(p,s) + d(q,r),
// and twice the largest four-point defect over orderings of {p,q,r,s} is the
// largest sum minus the second largest. `largest` identifies the pairing.
struct PairSums {
  double gap;   // largest - second largest
  int largest;  // 0 = A, 1 = B, 2 = C
};

inline PairSums top_gap(double a, double b, double c) {
  if (a >= b) {
    if (a >= c) return {a - std::max(b, c), 0};
    return {c - a, 2};
  }
  if (b >= c) return {b - std::max(a, c), 1};
  return {c - b, 2};
}

// Lexicographically least ordered quadruple (x, y, z, t) of {p,q,r,s} whose
// defect is gap/2: {x, z} and {y, t} must be the pairs of the largest sum.
inline Quadruple ordered_witness(Vertex p, Vertex q, Vertex r, Vertex s, int largest) {
  switch (largest) {
    case 0: return {p, r, q, s};  // pairs {p,q}, {r,s}
    case 1: return {p, q, r, s};  // pairs {p,r}, {q,s}
    default: return {p, q, s, r};  // pairs {p,s}, {q,r}
  }
}

// Runs `body(p)` for every first index p, pulling work from a shared counter.
template <typename Body>
void for_each_first_index(std::size_t n, unsigned workers, Body&& body) {
  if (workers <= 1 || n < 8) {
    for (std::size_t p = 0; p < n; ++p) body(p, 0u);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t p = next.fetch_add(1); p < n; p = next.fetch_add(1)) body(p, w);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

DeltaCertificate hyperbolicity_delta(const FiniteMetricSpace& m, unsigned workers) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("hyperbolicity of an empty space");
  if (!m.connected()) throw std::domain_error("hyperbolicity of a disconnected space");
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());

  // Pass 1: the largest gap. A max over exact values is schedule-independent.
  std::vector<double> local_best(workers, 0.0);
  for_each_first_index(n, workers, [&](std::size_t p, unsigned w) {
    auto rp = m.row(p);
    double best = local_best[w];
    for (std::size_t q = p + 1; q < n; ++q) {
      auto rq = m.row(q);
      const double dpq = rp[q];
      for (std::size_t r = q + 1; r < n; ++r) {
        auto rr = m.row(r);
        const double dpr = rp[r], dqr = rq[r];
        for (std::size_t s = r + 1; s < n; ++s) {
          PairSums g = top_gap(dpq + rr[s], dpr + rq[s], rp[s] + dqr);
          if (g.gap > best) best = g.gap;
        }
      }
    }
    local_best[w] = best;
  });
  const double gap = *std::max_element(local_best.begin(), local_best.end());

  DeltaCertificate cert;
  cert.delta = 0.5 * gap;
  // Degenerate quadruples have defect exactly 0, and (0,0,0,0) is the least.
  if (cert.delta <= kTolerance) {
    cert.witness = {0, 0, 0, 0};
    return cert;
  }

  // Pass 2: least ordered witness among quadruples within tolerance.
  const double threshold = gap - 2.0 * kTolerance;
  const Quadruple none{n, n, n, n};
  std::vector<Quadruple> local_witness(workers, none);
  for_each_first_index(n, workers, [&](std::size_t p, unsigned w) {
    auto rp = m.row(p);
    Quadruple best = local_witness[w];
    if (best[0] < p) return;  // every candidate from p is larger
    for (std::size_t q = p + 1; q < n; ++q) {
      auto rq = m.row(q);
      const double dpq = rp[q];
      for (std::size_t r = q + 1; r < n; ++r) {
        auto rr = m.row(r);
        const double dpr = rp[r], dqr = rq[r];
        for (std::size_t s = r + 1; s < n; ++s) {
          PairSums g = top_gap(dpq + rr[s], dpr + rq[s], rp[s] + dqr);
          if (g.gap >= threshold) {
            Quadruple cand = ordered_witness(p, q, r, s, g.largest);
            if (cand < best) best = cand;
          }
        }
      }
    }
    local_witness[w] = best;
  });
  cert.witness = *std::min_element(local_witness.begin(), local_witness.end());
  return cert;
}

FiniteMetricSpace rescale(const FiniteMetricSpace& m, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw std::invalid_argument("rescale factor must be positive, got " + std::to_string(lambda));
  }
  const std::size_t n = m.size();
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = m(i, j) * lambda;
  }
  return FiniteMetricSpace::from_trusted(n, std::move(d));
}

}  // namespace hypcone
