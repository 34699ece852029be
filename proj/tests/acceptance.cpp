#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "hypcone/actions.hpp"
#include "hypcone/cli.hpp"
#include "hypcone/coneoff.hpp"
#include "hypcone/geometry.hpp"
#include "hypcone/io.hpp"
#include "hypcone/metric.hpp"
#include "hypcone/words.hpp"
#include "oracles.hpp"

using namespace hypcone;

namespace {

const std::string kData = HYPCONE_DATA_DIR;

struct Check {
  bool ok = true;
  std::string detail;
  void fail(const std::string& why) {
    if (ok) detail = why;
    ok = false;
  }
  void expect(bool cond, const std::string& why) {
    if (!cond) fail(why);
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

WeightedGraph from_raw(std::size_t n, const std::vector<oracle::RawEdge>& edges) {
  WeightedGraph g(n);
  for (const auto& e : edges) g.add_edge(e.u, e.v, e.w);
  return g;
}

// 1. C'(1/6) for H2 through the CLI on the bundled file.
Check criterion1() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream out, err;
  const int code = cli::run({"c-prime", "--presentation", kData + "/h2.txt", "--lambda", "1/6"},
                            out, err);
  const double t = seconds_since(t0);
  if (code == 1) {
    c.fail("cli error: " + err.str());
    return c;
  }
  const auto j = io::json::parse(out.str());
  const long piece = j["max_piece"], len = j["min_relator"];
  // exact integer restatement of the piece bound, recomputed by the oracle
  const auto p = h2_presentation();
  const std::size_t oracle_piece = oracle::max_piece({p.relators[0].letters()});
  c.expect(std::size_t(piece) == oracle_piece, "max_piece differs from oracle");
  c.expect(len == 84, "relator length is not 84");
  c.expect(!j["witness_pieces"].empty(), "no witness pieces listed");
  c.expect(t < 1.0, "runtime " + fmt(t) + " s");
  c.expect(j["holds"] == true && piece * 6 < len,
           "holds = " + j["holds"].dump() + ": max piece " + std::to_string(piece) + " (" +
               j["witness_pieces"][0].get<std::string>() + "), 6*" + std::to_string(piece) +
               " = " + std::to_string(6 * piece) + " >= " + std::to_string(len));
  if (c.ok) c.detail = "max piece " + std::to_string(piece) + ", length " + std::to_string(len);
  return c;
}

// 2. hyperbolicity_delta against the Gromov-product oracle.
Check criterion2() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(2024);
  std::uniform_int_distribution<std::size_t> size(4, 12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = size(rng);
    std::uniform_int_distribution<std::size_t> extra(0, n);
    const auto raw = oracle::random_connected(rng, n, extra(rng), 3);
    const double got = hyperbolicity_delta(path_metric(from_raw(n, raw))).delta;
    const double want = oracle::gromov_delta(oracle::floyd_warshall(n, raw));
    c.expect(got == want, "graph " + std::to_string(trial) + ": " + fmt(got) + " vs " + fmt(want));
    c.expect(std::floor(2 * got) == 2 * got, "non half-integer delta");
  }
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = size(rng);
    const auto tree = oracle::random_connected(rng, n, 0, 3);
    const double got = hyperbolicity_delta(path_metric(from_raw(n, tree))).delta;
    c.expect(got == 0.0, "tree with delta " + fmt(got));
  }
  const double t = seconds_since(t0);
  c.expect(t < 10.0, "runtime " + fmt(t) + " s");
  if (c.ok) c.detail = "50 graphs + 20 trees, " + fmt(t) + " s";
  return c;
}

// 3. Cone metric identities.
Check criterion3() {
  Check c;
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_apex = 0, worst_pi = 0;
  for (int i = 0; i < 1000; ++i) {
    const double rho = 0.05 + 5 * u(rng);
    const double r = rho * u(rng), r2 = rho * u(rng);
    const double dY = 20 * u(rng);
    worst_apex = std::max(worst_apex, std::abs(cone_distance(0.0, r2, dY, rho) - r2));
    const double far = std::numbers::pi * std::sinh(rho) * (1 + u(rng));
    worst_pi = std::max(worst_pi, std::abs(cone_distance(r, r2, far, rho) - (r + r2)));
  }
  c.expect(worst_apex <= 1e-12, "apex error " + fmt(worst_apex));
  c.expect(worst_pi <= 1e-12, "theta = pi error " + fmt(worst_pi));
  for (int i = 0; i < 1000; ++i) {
    const double rho = 0.05 + 5 * u(rng);
    const double r = rho * u(rng), r2 = rho * u(rng);
    double a = 10 * u(rng), b = 10 * u(rng);
    if (a > b) std::swap(a, b);
    const double da = cone_distance(r, r2, a, rho), db = cone_distance(r, r2, b, rho);
    c.expect(da <= db + 1e-12, "not monotone at dY = " + fmt(a) + ", " + fmt(b));
  }
  if (c.ok) c.detail = "max errors " + fmt(worst_apex) + ", " + fmt(worst_pi);
  return c;
}

// 4. Quotient comparison on the desk example.
Check criterion4() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  const auto g = io::read_space(kData + "/c8.json").graph();
  const auto a = io::action_from_json(io::read_json_file(kData + "/actions/z8_c8.json"), "z8");
  const auto q = io::family_from_json(io::read_json_file(kData + "/c8_family.json"), "family");
  const std::vector<Element> K{4};
  const auto pipe = run_quotient_comparison(g, a, q, K);

  // independent X/K: min over the K-orbit of the cycle distance
  const auto n = g.vertex_count();
  const auto X = oracle::floyd_warshall(n, [&] {
    std::vector<oracle::RawEdge> e;
    for (const auto& edge : g.edges()) e.push_back({edge.u, edge.v, edge.length});
    return e;
  }());
  const auto& orbits = pipe.base_quotient.orbits;
  c.expect(orbits.size() == 4, "expected 4 orbits of C8 under Z/2");
  const double rho = q.rho;
  double D = 0;
  for (std::size_t i = 0; i < orbits.size(); ++i)
    for (std::size_t j = 0; j < orbits.size(); ++j) {
      double d = oracle::inf;
      for (Vertex x : orbits[i])
        for (Vertex y : orbits[j]) d = std::min(d, X[x][y]);
      c.expect(pipe.base_quotient.metric(i, j) == d, "X/K distance mismatch");
      D = std::max(D, d);
    }
  const double lambda =
      std::max({1.0, std::numbers::pi * std::sinh(rho) / (2 * rho), D / (2 * rho)});
  c.expect(std::abs(pipe.comparison.lambda - lambda) < 1e-12, "lambda mismatch");
  const auto& cq = pipe.coneoff_quotient.metric;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < orbits.size(); ++i)
    for (std::size_t j = i + 1; j < orbits.size(); ++j) {
      ++pairs;
      const double dbar = cq(i, j), dxk = pipe.base_quotient.metric(i, j);
      c.expect(dbar <= dxk + kTolerance, "lower bound fails");
      c.expect(dxk <= lambda * dbar + kTolerance, "upper bound fails");
    }
  for (std::size_t p = 0; p < cq.size(); ++p) {
    double nearest = oracle::inf;
    for (std::size_t i = 0; i < orbits.size(); ++i) nearest = std::min(nearest, cq(p, i));
    c.expect(nearest <= 2 * rho + kTolerance, "point farther than 2 rho");
  }
  c.expect(pipe.comparison.holds(), "library comparison reports failure");
  const double t = seconds_since(t0);
  c.expect(t < 1.0, "runtime " + fmt(t) + " s");
  if (c.ok) c.detail = "D = " + fmt(D) + ", lambda = " + fmt(lambda) + ", " + std::to_string(pairs) + " pairs";
  return c;
}

// 5. Orbit graphs of three bundled actions.
Check criterion5() {
  Check c;
  struct Case {
    const char* graph;
    const char* action;
    double r;
  };
  const Case cases[] = {{"c4.json", "actions/z4_c4.json", 1.0},
                        {"c8.json", "actions/z2_antipodal_c8.json", 1.0},
                        {"c6.json", "actions/d6_c6.json", 1.0}};
  std::string summary;
  for (const auto& k : cases) {
    const auto g = io::read_space(kData + "/" + k.graph).graph();
    const auto a = io::action_from_json(io::read_json_file(kData + "/" + k.action), k.action);
    const auto m = path_metric(g);
    const auto og = build_orbit_graph(a, m, k.r);
    // free action on vertices, checked directly on the permutations
    for (Element h = 1; h < og.action.order(); ++h)
      for (Vertex v = 0; v < og.graph.vertex_count(); ++v)
        c.expect(og.action.apply(h, v) != v, std::string(k.action) + ": fixed vertex");
    // N1: brute-force r-capacity of R-balls
    std::vector<std::vector<double>> d(m.size(), std::vector<double>(m.size()));
    for (Vertex x = 0; x < m.size(); ++x)
      for (Vertex y = 0; y < m.size(); ++y) d[x][y] = m(x, y);
    const double R = 2 * k.r + 1;
    std::size_t N1 = 0, N2 = 0;
    for (Vertex x = 0; x < m.size(); ++x) {
      std::vector<std::size_t> ballx;
      for (Vertex y = 0; y < m.size(); ++y)
        if (d[x][y] <= R + 1e-9) ballx.push_back(y);
      N1 = std::max(N1, oracle::brute_capacity(d, ballx, k.r));
      std::size_t near = 0;
      for (Element h = 0; h < a.order(); ++h)
        if (d[x][a.apply(h, x)] <= 2 * R + 1e-9) ++near;
      N2 = std::max(N2, near);
    }
    c.expect(og.capacity_bound == N1, std::string(k.action) + ": N1 mismatch");
    c.expect(og.properness_bound == N2, std::string(k.action) + ": N2 mismatch");
    std::size_t valence = 0;
    for (Vertex v = 0; v < og.graph.vertex_count(); ++v) valence = std::max(valence, og.graph.valence(v));
    c.expect(valence <= N1 * N2, std::string(k.action) + ": valence exceeds N1 N2");
    const auto& dist = og.distortion;
    c.expect(dist.finite && std::isfinite(dist.lipschitz) && std::isfinite(dist.expansion) &&
                 std::isfinite(dist.additive),
             std::string(k.action) + ": infinite distortion");
    summary += std::string(k.action) + " val " + std::to_string(valence) + "<=" +
               std::to_string(N1) + "*" + std::to_string(N2) + " (L=" + fmt(dist.lipschitz) +
               ", E=" + fmt(dist.expansion) + ", C=" + fmt(dist.additive) + "); ";
  }
  if (c.ok) c.detail = summary;
  return c;
}

// 6. Dehn reduction against normal-closure search.
Check criterion6() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(6);
  std::size_t compared = 0, trivial = 0, skipped = 0;
  for (int k = 0; k < 5; ++k) {
    std::uniform_int_distribution<int> count(1, 2), len(20, 40);
    Presentation p;
    std::vector<oracle::Letters> rels;
    for (;;) {
      rels.clear();
      const int nrel = count(rng);
      for (int i = 0; i < nrel; ++i) {
        oracle::Letters r;
        do {
          r = oracle::random_word(rng, 3, std::size_t(len(rng)), true);
        } while (r.front() == -r.back());
        rels.push_back(r);
      }
      if (oracle::max_piece(rels) * 6 >= std::min_element(rels.begin(), rels.end(), [](auto& x, auto& y) {
                                               return x.size() < y.size();
                                             })->size())
        continue;
      p = free_presentation(3);
      for (const auto& r : rels) p.relators.push_back(Word(r));
      if (check_metric_sc(p, Rational{1, 6}).holds) break;
    }
    DehnReducer reducer(p);
    c.expect(reducer.verified(), "presentation not verified C'(1/6)");
    std::size_t max_rel = 0;
    for (const auto& r : rels) max_rel = std::max(max_rel, r.size());
    std::uniform_int_distribution<std::size_t> wlen(0, 12);
    for (int i = 0; i < 200; ++i) {
      const auto w = oracle::random_word(rng, 3, wlen(rng), false);
      const auto verdict = oracle::normal_closure_search(w, rels, w.size() + max_rel, 20000);
      if (verdict == oracle::Closure::unknown) {
        ++skipped;
        continue;
      }
      ++compared;
      const bool got = reducer.reduce(Word(w)).trivial;
      trivial += got;
      c.expect(got == (verdict == oracle::Closure::trivial), "verdict mismatch");
    }
  }
  const double t = seconds_since(t0);
  c.expect(t < 60.0, "runtime " + fmt(t) + " s");
  c.expect(compared > 0, "search never terminated");
  if (c.ok)
    c.detail = std::to_string(compared) + " compared (" + std::to_string(trivial) + " trivial), " +
               std::to_string(skipped) + " undecided, " + fmt(t) + " s";
  return c;
}

// 7. Commensurability against a bounded search.
Check criterion7() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(7);
  const auto us = oracle::reduced_words(2, 6);
  std::uniform_int_distribution<std::size_t> len(1, 6);
  std::size_t positives = 0, pairs = 0;
  while (pairs < 100) {
    const auto g = oracle::reduce(oracle::random_word(rng, 2, len(rng), false));
    oracle::Letters h;
    if (pairs % 2) {
      // h = v g^j v^-1 rewritten, kept within length 6
      std::uniform_int_distribution<int> j(-2, 2), vl(0, 3);
      const int e = j(rng);
      const auto v = oracle::random_word(rng, 2, vl(rng), true);
      h = oracle::reduce(oracle::cat(oracle::cat(v, oracle::pow(g, e == 0 ? 1 : e)), oracle::inv(v)));
      if (h.size() > 6) continue;
    } else {
      h = oracle::reduce(oracle::random_word(rng, 2, len(rng), false));
    }
    if (g.empty() || h.empty()) continue;
    ++pairs;
    const auto brute = oracle::brute_commensurable(g, h, 4, us);
    const auto got = are_commensurable_free(Word(g), Word(h));
    const bool in_box = got.commensurable && got.n <= 4 && std::abs(got.m) <= 4 &&
                        got.conjugator.size() <= 6;
    positives += brute.has_value();
    c.expect(in_box == brute.has_value(), "pair " + std::to_string(pairs) + " disagrees");
    if (got.commensurable) {
      const auto u = got.conjugator.letters();
      c.expect(oracle::reduce(oracle::cat(oracle::cat(u, oracle::pow(h, int(got.m))), oracle::inv(u))) ==
                   oracle::pow(g, int(got.n)),
               "invalid witness");
    }
  }
  const double t = seconds_since(t0);
  c.expect(t < 30.0, "runtime " + fmt(t) + " s");
  if (c.ok) c.detail = "100 pairs, " + std::to_string(positives) + " commensurable, " + fmt(t) + " s";
  return c;
}

// 8. Axis overlaps in the radius-8 ball of F(a, b).
Check criterion8() {
  Check c;
  const auto window = cayley_ball(free_presentation(2), 8);
  const std::vector<std::string> names{"a", "b"};
  const Word a = parse_word("a", names), b = parse_word("b", names);
  const auto axis_a = min_set_axis(window.left_action(a), window);
  const auto axis_b = min_set_axis(window.left_action(b), window);
  c.expect(axis_a.size() == 16, "axis(a) has " + std::to_string(axis_a.size()) + " points");
  double worst = 0;
  for (const auto& u : oracle::reduced_words(2, 4)) {
    const auto shifted = translate(window.left_action(Word(u)), axis_b);
    const auto o = overlap_diameter(window, axis_a, shifted, 0.0);
    worst = std::max(worst, o.value_or(0.0));
  }
  c.expect(worst <= 1.0, "overlap with u.axis(b) is " + fmt(worst));
  const auto a2 = translate(window.left_action(parse_word("a a", names)), axis_a);
  const double same = overlap_diameter(window, axis_a, a2, 0.0).value_or(0.0);
  c.expect(same >= 6.0, "overlap with a^2.axis(a) is " + fmt(same));
  if (c.ok) c.detail = "max overlap " + fmt(worst) + " vs " + fmt(same);
  return c;
}

// 9. Performance and determinism on 150 vertices.
Check criterion9() {
  Check c;
  std::mt19937 rng(9);
  const auto raw = oracle::random_connected(rng, 150, 150, 3);
  const auto m = path_metric(from_raw(150, raw));
  auto t0 = std::chrono::steady_clock::now();
  const auto serial = hyperbolicity_delta(m, 1);
  const double ts = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const auto parallel = hyperbolicity_delta(m, 4);
  const double tp = seconds_since(t0);
  c.expect(ts < 60.0, "serial runtime " + fmt(ts) + " s");
  c.expect(tp < 60.0, "parallel runtime " + fmt(tp) + " s");
  c.expect(serial.delta == parallel.delta, "delta differs");
  c.expect(serial.witness == parallel.witness, "witness differs");
  if (c.ok)
    c.detail = "delta " + fmt(serial.delta) + ", serial " + fmt(ts) + " s, parallel " + fmt(tp) + " s";
  return c;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Check()>> criteria[] = {
      {"H2 satisfies C'(1/6)", criterion1},
      {"four-point oracle equivalence", criterion2},
      {"cone metric identities", criterion3},
      {"quotient comparison on the desk example", criterion4},
      {"orbit-graph construction", criterion5},
      {"Dehn algorithm vs normal-closure search", criterion6},
      {"commensurability vs bounded search", criterion7},
      {"axis overlaps in F(a,b)", criterion8},
      {"delta performance and determinism", criterion9},
  };
  int failed = 0;
  int index = 0;
  for (const auto& [name, fn] : criteria) {
    ++index;
    Check result;
    try {
      result = fn();
    } catch (const std::exception& e) {
      result.fail(std::string("exception: ") + e.what());
    }
    failed += !result.ok;
    std::printf("%s %d %s: %s\n", result.ok ? "PASS" : "FAIL", index, name, result.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
