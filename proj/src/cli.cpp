#include "hypcone/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <numbers>
#include <optional>

#include <CLI11.hpp>

#include "hypcone/actions.hpp"
#include "hypcone/coneoff.hpp"
#include "hypcone/geometry.hpp"
#include "hypcone/io.hpp"
#include "hypcone/metric.hpp"
#include "hypcone/words.hpp"

namespace hypcone::cli {

namespace {

using io::json;
using io::number;

struct RunConfig {
  std::string command;
  std::string graph;
  std::string action;
  std::string family;
  std::string presentation;
  std::string constants;
  std::string word;
  std::string g;
  std::string h;
  std::string lambda = "1/6";
  std::string format = "json";
  double r = 1.0;
  std::optional<double> R;
  double rho = 1.0;
  std::optional<double> rho_opt;
  std::optional<double> delta;
  double alpha = 0.0;
  long radius = 8;
  std::optional<std::size_t> n_max;
  std::size_t rank = 2;
  unsigned threads = 1;
  std::size_t x = 0, y = 0, z = 0;
  std::size_t element = 0;
  std::size_t base = 0;
  std::vector<std::size_t> subset;
  std::vector<std::size_t> subgroup;
  bool strong = false;
  bool expand = false;
};

struct Outcome {
  Outcome(json r, int s = kExitOk, std::optional<WeightedGraph> g = std::nullopt)
      : report(std::move(r)), status(s), graph(std::move(g)) {}
  json report;
  int status = kExitOk;
  std::optional<WeightedGraph> graph;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void need(const std::string& value, const std::string& flag) {
  if (value.empty()) throw UsageError(flag + " is required");
}

json labelled(const std::vector<Vertex>& points, const std::vector<std::string>& labels) {
  json out = json::array();
  for (Vertex v : points) out.push_back(v < labels.size() ? labels[v] : std::to_string(v));
  return out;
}

json numbers(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

io::SpaceInput space(const RunConfig& c) {
  need(c.graph, "--graph");
  return io::read_space(c.graph);
}

WeightedGraph graph_only(const RunConfig& c) {
  auto in = space(c);
  if (!in.has_graph()) throw io::InputError(c.graph + ":/edges: this command needs a graph");
  return in.graph();
}

ActionTable action(const RunConfig& c, std::size_t points) {
  need(c.action, "--action");
  ActionTable a = io::action_from_json(io::read_json_file(c.action), c.action);
  if (a.point_count() != points) {
    throw io::InputError(c.action + ":/perm: action permutes " + std::to_string(a.point_count()) +
                         " points but the space has " + std::to_string(points));
  }
  return a;
}

void check_element(const ActionTable& a, std::size_t g) {
  if (g >= a.order()) throw UsageError("--element " + std::to_string(g) + " is out of range");
}

Presentation presentation(const RunConfig& c) {
  if (c.presentation.empty()) return free_presentation(c.rank);
  return io::read_presentation(c.presentation);
}

std::optional<ScConstants> constants(const RunConfig& c) {
  std::string path = c.constants;
  if (path.empty()) {
    if (const char* env = std::getenv("HYPCONE_CONSTANTS")) path = env;
  }
  if (path.empty()) return std::nullopt;
  return io::constants_from_json(io::read_json_file(path), path);
}

json constants_json(const ScConstants& k) {
  return {{"delta0", number(k.delta0)},
          {"Delta0", number(k.Delta0)},
          {"rho0", number(k.rho0)},
          {"delta1", number(k.delta1)}};
}

ConeFamily family(const RunConfig& c, const ActionTable* a, std::size_t points) {
  need(c.family, "--family");
  ConeFamily q = io::family_from_json(io::read_json_file(c.family), c.family);
  try {
    return normalize_family(std::move(q), a, points);
  } catch (const std::exception& e) {
    throw io::InputError(c.family + ":/cones: " + e.what());
  }
}

std::string word_text(const Word& w, const std::vector<std::string>& names) {
  return to_string(w, names);
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

Outcome cmd_delta(const RunConfig& c) {
  const auto in = space(c);
  const auto m = in.metric();
  const auto cert = hyperbolicity_delta(m, c.threads);
  std::vector<Vertex> w(cert.witness.begin(), cert.witness.end());
  json report = {{"delta", number(cert.delta)}, {"witness", w}, {"points", m.size()}};
  if (!in.labels.empty()) report["witness_labels"] = labelled(w, in.labels);
  return {report};
}

Outcome cmd_gromov(const RunConfig& c) {
  const auto m = space(c).metric();
  for (std::size_t p : {c.x, c.y, c.z}) {
    if (p >= m.size()) throw UsageError("point " + std::to_string(p) + " is out of range");
  }
  return {{{"x", c.x}, {"y", c.y}, {"z", c.z}, {"product", number(gromov_product(m, c.x, c.y, c.z))}}};
}

Outcome cmd_capacity(const RunConfig& c) {
  const auto m = space(c).metric();
  std::vector<Vertex> region = c.subset;
  if (region.empty()) {
    for (Vertex v = 0; v < m.size(); ++v) region.push_back(v);
  }
  const auto rep = capacity(m, region, c.r);
  json report = {{"r", number(c.r)},
                 {"region_size", rep.region.size()},
                 {"capacity", rep.capacity},
                 {"witness_net", rep.witness_net}};
  if (c.R) {
    const auto bg = bounded_geometry_bound(m, c.r, *c.R);
    report["bounded_geometry"] = {{"R", number(*c.R)}, {"bound", bg.bound}, {"center", bg.center}};
  }
  return {report};
}

Outcome cmd_net(const RunConfig& c) {
  const auto m = space(c).metric();
  const auto net = greedy_maximal_net(m, c.r);
  return {{{"r", number(c.r)},
           {"size", net.size()},
           {"net", net},
           {"separated", is_separated(m, net, c.r)}}};
}

Outcome cmd_quasiconvex(const RunConfig& c) {
  if (c.subset.empty()) throw UsageError("--subset is required");
  const auto in = space(c);
  const auto m = in.metric();
  const Subset Y = make_subset(c.subset, m.size());
  if (c.strong) {
    if (!in.has_graph()) throw io::InputError(c.graph + ":/edges: --strong needs a graph");
    const double delta = c.delta ? *c.delta : hyperbolicity_delta(m, c.threads).delta;
    const auto rep = is_strongly_quasiconvex(in.graph(), m, Y, delta);
    json report = {{"strong", true},
                   {"delta", number(delta)},
                   {"holds", rep.holds},
                   {"quasiconvex", rep.quasiconvexity.holds},
                   {"induced_connected", rep.induced_connected},
                   {"max_excess", number(rep.max_excess)}};
    if (rep.quasiconvexity.violation) {
      const auto& v = *rep.quasiconvexity.violation;
      report["violation"] = {v[0], v[1], v[2]};
    }
    if (rep.failing_pair) report["failing_pair"] = {rep.failing_pair->first, rep.failing_pair->second};
    return {report, rep.holds ? kExitOk : kExitCheckFailed};
  }
  const auto rep = is_quasiconvex(m, Y, c.alpha);
  json report = {{"alpha", number(c.alpha)},
                 {"holds", rep.holds},
                 {"worst_excess", number(rep.worst_excess)}};
  if (rep.violation) {
    const auto& v = *rep.violation;
    report["violation"] = {v[0], v[1], v[2]};
  }
  return {report, rep.holds ? kExitOk : kExitCheckFailed};
}

Outcome cmd_properness(const RunConfig& c) {
  const auto m = space(c).metric();
  const auto a = action(c, m.size());
  const auto rep = uniform_properness_bound(a, m, c.r);
  return {{{"r", number(c.r)}, {"order", a.order()}, {"bound", rep.bound}, {"center", rep.center}}};
}

Outcome cmd_translation(const RunConfig& c) {
  const auto m = space(c).metric();
  const auto a = action(c, m.size());
  check_element(a, c.element);
  return {{{"element", c.element},
           {"translation_length", number(translation_length(a, m, c.element))},
           {"min_set", min_set_axis(a, m, c.element)}}};
}

json classification_json(const ClassificationReport& rep) {
  return {{"translation_length", number(rep.translation_length)},
          {"stable_estimates", numbers(rep.stable_estimates)},
          {"steps", rep.steps},
          {"stable_length", number(rep.stable_length)},
          {"verdict", to_string(rep.verdict)}};
}

json classify_report(const PointMap& g, const MetricView& m, Vertex base, std::size_t n_max,
                     const RunConfig& c) {
  const double delta = c.delta.value_or(0.0);
  const auto rep = classify_element(g, m, base, n_max, delta);
  json report = classification_json(rep);
  if (c.rho_opt) {
    report["threshold"] = number(2.0 * std::numbers::pi * std::sinh(*c.rho_opt));
    if (rep.verdict == Verdict::inconclusive) {
      report["min_power"] = nullptr;
    } else {
      const auto p = min_power_for_injectivity(g, m, base, n_max, *c.rho_opt, delta);
      report["min_power"] = p.elliptic ? json("elliptic") : json(p.power);
    }
  }
  return report;
}

Outcome cmd_classify(const RunConfig& c) {
  json report;
  if (!c.action.empty()) {
    const auto m = space(c).metric();
    const auto a = action(c, m.size());
    check_element(a, c.element);
    if (c.base >= m.size()) throw UsageError("--base is out of range");
    const std::size_t n_max = c.n_max.value_or(a.order());
    report = {{"element", c.element}, {"base", c.base}, {"n_max", n_max}};
    report.update(classify_report(a.point_map(c.element), m, c.base, n_max, c));
    return {report};
  }
  need(c.word, "--word");
  const Presentation p = presentation(c);
  const Word g = io::read_word(c.word, p.generators, "--word");
  if (g.empty()) throw UsageError("--word must be nontrivial");
  const CayleyWindow window = cayley_ball(p, c.radius);
  const std::size_t n_max =
      c.n_max.value_or(std::max<std::size_t>(1, static_cast<std::size_t>(c.radius) / g.size()));
  report = {{"word", word_text(g, p.generators)},
            {"radius", c.radius},
            {"window_size", window.size()},
            {"n_max", n_max}};
  report.update(classify_report(window.left_action(g), window, 0, n_max, c));
  return {report};
}

Outcome cmd_orbit_graph(const RunConfig& c) {
  const auto m = space(c).metric();
  const auto a = action(c, m.size());
  const auto og = build_orbit_graph(a, m, c.r);
  const std::size_t bound = og.capacity_bound * og.properness_bound;
  const bool ok = og.action_free && og.edges_invariant && og.max_valence <= bound &&
                  og.distortion.finite;
  json report = {{"r", number(og.r)},
                 {"R", number(og.R)},
                 {"net_representatives", og.net_representatives},
                 {"vertex_count", og.graph.vertex_count()},
                 {"edge_count", og.graph.edge_count()},
                 {"action_free", og.action_free},
                 {"edges_invariant", og.edges_invariant},
                 {"max_valence", og.max_valence},
                 {"N1", og.capacity_bound},
                 {"N2", og.properness_bound},
                 {"valence_bound", bound},
                 {"distortion",
                  {{"lipschitz", number(og.distortion.lipschitz)},
                   {"expansion", number(og.distortion.expansion)},
                   {"additive", number(og.distortion.additive)},
                   {"finite", og.distortion.finite}}},
                 {"graph", io::graph_to_json(og.graph)}};
  return {report, ok ? kExitOk : kExitCheckFailed, og.graph};
}

Outcome cmd_quotient(const RunConfig& c) {
  const auto m = space(c).metric();
  const auto a = action(c, m.size());
  for (Element k : c.subgroup) check_element(a, k);
  const auto q = quotient_metric(m, a, c.subgroup);
  json collapsed = json::array();
  for (const auto& [i, j] : q.collapsed) collapsed.push_back({i, j});
  return {{{"subgroup", a.subgroup_closure(c.subgroup)},
           {"orbits", q.orbits},
           {"distances", io::metric_to_json(q.metric)["distances"]},
           {"degenerate", q.degenerate()},
           {"collapsed", collapsed}}};
}

Outcome cmd_coneoff(const RunConfig& c) {
  const WeightedGraph g = graph_only(c);
  std::optional<ActionTable> a;
  if (!c.action.empty()) a = action(c, g.vertex_count());
  ConeFamily q = family(c, a ? &*a : nullptr, g.vertex_count());
  if (c.expand) {
    if (!a) throw UsageError("--expand needs --action");
    q = expand_family(q, *a);
  }
  const auto X = path_metric(g);
  const auto co = build_coneoff(g, q);
  bool lipschitz = true;
  for (Vertex u = 0; u < g.vertex_count(); ++u) {
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
      if (co.metric(u, v) > X(u, v) + kTolerance) lipschitz = false;
    }
  }
  json report = {{"rho", number(q.rho)},
                 {"base_vertices", co.base_count},
                 {"apices", co.apices},
                 {"rim_edges", co.rim_edges},
                 {"chord_edges", co.chord_edges},
                 {"one_lipschitz", lipschitz},
                 {"family", io::family_to_json(q)},
                 {"graph", io::graph_to_json(co.graph)}};
  return {report, kExitOk, co.graph};
}

json sc_params_json(const SCParameters& p) {
  return {{"delta_X", number(p.delta_X)},
          {"Delta_Q", number(p.Delta_Q)},
          {"inj_Q", number(p.inj_Q)},
          {"rho", number(p.rho)},
          {"threshold", number(2.0 * std::numbers::pi * std::sinh(p.rho))}};
}

SCParameters sc_params(const RunConfig& c) {
  const WeightedGraph g = graph_only(c);
  const auto a = action(c, g.vertex_count());
  const auto q = family(c, &a, g.vertex_count());
  SCParameters p = compute_sc_parameters(g, a, q);
  p.constants = constants(c);
  return p;
}

Outcome cmd_sc_params(const RunConfig& c) {
  const auto p = sc_params(c);
  json report = sc_params_json(p);
  if (p.constants) report["constants"] = constants_json(*p.constants);
  return {report};
}

Outcome cmd_sc_check(const RunConfig& c) {
  const auto p = sc_params(c);
  const auto rep = check_sc_hypotheses(p);
  json clauses = json::array();
  for (const auto& k : rep.clauses) {
    clauses.push_back({{"clause", k.name},
                       {"value", number(k.value)},
                       {"bound", number(k.bound)},
                       {"margin", number(k.margin)},
                       {"holds", k.holds}});
  }
  json report = {{"holds", rep.holds},
                 {"clauses", clauses},
                 {"parameters", sc_params_json(p)},
                 {"constants", constants_json(rep.constants)}};
  return {report, rep.holds ? kExitOk : kExitCheckFailed};
}

Outcome cmd_qi_check(const RunConfig& c) {
  const WeightedGraph g = graph_only(c);
  const auto a = action(c, g.vertex_count());
  for (Element k : c.subgroup) check_element(a, k);
  const auto q = family(c, &a, g.vertex_count());
  const auto pipe = run_quotient_comparison(g, a, q, c.subgroup);
  const auto& cmp = pipe.comparison;
  json report = {{"holds", cmp.holds()},
                 {"rho", number(cmp.rho)},
                 {"D", number(cmp.D)},
                 {"lambda", number(cmp.lambda)},
                 {"pairs_checked", cmp.pairs_checked},
                 {"lower_holds", cmp.lower_holds},
                 {"upper_holds", cmp.upper_holds},
                 {"max_ratio", number(cmp.max_ratio)},
                 {"cobound", number(cmp.cobound)},
                 {"cobounded", cmp.cobounded},
                 {"base_orbits", pipe.base_quotient.orbits.size()},
                 {"coneoff_orbits", pipe.coneoff_quotient.orbits.size()},
                 {"cones", pipe.family.cones.size()}};
  if (cmp.worst_pair) report["worst_pair"] = {cmp.worst_pair->first, cmp.worst_pair->second};
  return {report, cmp.holds() ? kExitOk : kExitCheckFailed};
}

json witness_json(const PieceWitness& w, const std::vector<std::string>& names) {
  return {{"piece", word_text(w.piece, names)},
          {"length", w.piece.size()},
          {"first", word_text(w.first, names)},
          {"second", word_text(w.second, names)},
          {"relators", {w.first_relator, w.second_relator}}};
}

json piece_json(const PieceReport& rep, const Presentation& p) {
  json pieces = json::array();
  for (const Word& w : rep.maximal_pieces) pieces.push_back(word_text(w, p.generators));
  json report = {{"max_piece", rep.max_piece_length},
                 {"min_relator", rep.min_relator_length},
                 {"ratio", number(rep.ratio)},
                 {"symmetrized", rep.symmetrized_count},
                 {"witness_pieces", pieces}};
  if (rep.witness) report["witness"] = witness_json(*rep.witness, p.generators);
  return report;
}

json relators_json(const Presentation& p) {
  json out = json::array();
  for (const Word& r : p.relators) out.push_back(word_text(r, p.generators));
  return out;
}

Outcome cmd_pieces(const RunConfig& c) {
  need(c.presentation, "--presentation");
  const auto p = presentation(c);
  json report = {{"generators", p.generators}, {"relators", relators_json(p)}};
  report.update(piece_json(piece_report(p), p));
  return {report};
}

Outcome cmd_c_prime(const RunConfig& c) {
  need(c.presentation, "--presentation");
  const auto p = presentation(c);
  Rational lambda;
  try {
    lambda = Rational::parse(c.lambda);
  } catch (const std::invalid_argument& e) {
    throw UsageError(std::string("--lambda: ") + e.what());
  }
  const auto rep = check_metric_sc(p, lambda);
  json report = {{"holds", rep.holds}, {"lambda", lambda.str()}};
  report.update(piece_json(rep.pieces, p));
  if (rep.violation) report["violation"] = witness_json(*rep.violation, p.generators);
  report["relators"] = relators_json(p);
  return {report, rep.holds ? kExitOk : kExitCheckFailed};
}

Outcome cmd_dehn(const RunConfig& c) {
  need(c.presentation, "--presentation");
  const auto p = presentation(c);
  const Word w = io::read_word(c.word, p.generators, "--word");
  const auto rep = dehn_reduce(w, p);
  return {{{"word", word_text(w, p.generators)},
           {"reduced", word_text(rep.reduced, p.generators)},
           {"trivial", rep.trivial},
           {"heuristic", rep.heuristic},
           {"steps", rep.steps}}};
}

Outcome cmd_commensurable(const RunConfig& c) {
  need(c.g, "--g");
  need(c.h, "--h");
  const Presentation p = c.presentation.empty() ? free_presentation(26) : presentation(c);
  const Word g = io::read_word(c.g, p.generators, "--g");
  const Word h = io::read_word(c.h, p.generators, "--h");
  const auto rep = are_commensurable_free(g, h);
  json report = {{"g", word_text(g, p.generators)},
                 {"h", word_text(h, p.generators)},
                 {"commensurable", rep.commensurable}};
  if (rep.commensurable) {
    report["n"] = rep.n;
    report["m"] = rep.m;
    report["conjugator"] = word_text(rep.conjugator, p.generators);
  }
  return {report};
}

Outcome cmd_cayley_ball(const RunConfig& c) {
  const auto p = presentation(c);
  const auto window = cayley_ball(p, c.radius);
  json elements = json::array();
  for (const auto& l : window.labels()) elements.push_back(l);
  json report = {{"generators", p.generators},
                 {"radius", c.radius},
                 {"vertex_count", window.size()},
                 {"edge_count", window.graph().edge_count()},
                 {"elements", elements},
                 {"graph", io::graph_to_json(window.graph())}};
  return {report, kExitOk, window.graph()};
}

Outcome cmd_h2(const RunConfig&) {
  const auto p = h2_presentation();
  const Word& r = p.relators.front();
  long x_sum = 0, y_sum = 0;
  for (Letter l : r) (std::abs(l) == 1 ? x_sum : y_sum) += l > 0 ? 1 : -1;
  return {{{"generators", p.generators},
           {"relator", word_text(r, p.generators)},
           {"length", r.size()},
           {"x_exponent_sum", x_sum},
           {"y_exponent_sum", y_sum},
           {"symmetrized", symmetrize(p).size()}}};
}

Outcome cmd_injectivity(const RunConfig& c) {
  InjectivityReport rep;
  if (!c.action.empty()) {
    const auto m = space(c).metric();
    const auto a = action(c, m.size());
    for (Element k : c.subgroup) check_element(a, k);
    if (c.base >= m.size()) throw UsageError("--base is out of range");
    rep = ball_injectivity_check(a, m, c.subgroup, c.base, c.rho);
  } else {
    need(c.presentation, "--presentation");
    rep = ball_injectivity_check(presentation(c), c.rho);
  }
  json report = {{"status", to_string(rep.status)},
                 {"rho", number(c.rho)},
                 {"ball_size", rep.ball_size},
                 {"heuristic", rep.heuristic}};
  if (rep.collision) report["collision"] = {rep.collision->first, rep.collision->second};
  if (!rep.note.empty()) report["note"] = rep.note;
  return {report, rep.status == InjectivityReport::Status::collision ? kExitCheckFailed : kExitOk};
}

// ---------------------------------------------------------------------------
// Command table
// ---------------------------------------------------------------------------

enum Flag : unsigned {
  kGraph = 1u << 0,
  kAction = 1u << 1,
  kFamily = 1u << 2,
  kPresentation = 1u << 3,
  kConstants = 1u << 4,
  kSubset = 1u << 5,
  kSubgroup = 1u << 6,
  kWindow = 1u << 7,
  kWordFlag = 1u << 8,
  kThreads = 1u << 9,
  kR = 1u << 10,
  kRho = 1u << 11,
  kElement = 1u << 12,
};

struct Command {
  const char* name;
  const char* help;
  unsigned flags;
  Outcome (*handler)(const RunConfig&);
};

const Command kCommands[] = {
    {"delta", "hyperbolicity constant of a graph or metric", kGraph | kThreads, cmd_delta},
    {"gromov", "Gromov product <x,y>_z", kGraph, cmd_gromov},
    {"capacity", "r-capacity of a region, optionally the bounded-geometry bound", kGraph | kSubset | kR,
     cmd_capacity},
    {"net", "greedy maximal r-separated subset", kGraph | kR, cmd_net},
    {"quasiconvex", "quasi-convexity or strong quasi-convexity of a subset",
     kGraph | kSubset | kThreads, cmd_quasiconvex},
    {"properness", "uniform properness bound of an action", kGraph | kAction | kR, cmd_properness},
    {"translation", "translation length and min-set of an element", kGraph | kAction | kElement,
     cmd_translation},
    {"classify", "elliptic/loxodromic verdict on a finite window",
     kGraph | kAction | kElement | kPresentation | kWindow | kWordFlag | kRho, cmd_classify},
    {"orbit-graph", "orbit graph G x S0 of an action", kGraph | kAction | kR, cmd_orbit_graph},
    {"quotient", "orbit-space metric for a subgroup", kGraph | kAction | kSubgroup, cmd_quotient},
    {"coneoff", "cone-off of a graph over a family", kGraph | kAction | kFamily, cmd_coneoff},
    {"sc-params", "delta, Delta and inj of a cone family", kGraph | kAction | kFamily | kConstants,
     cmd_sc_params},
    {"sc-check", "small cancellation hypotheses against configured constants",
     kGraph | kAction | kFamily | kConstants, cmd_sc_check},
    {"qi-check", "comparison of X/K with the cone-off quotient",
     kGraph | kAction | kFamily | kSubgroup, cmd_qi_check},
    {"pieces", "piece report of a presentation", kPresentation, cmd_pieces},
    {"c-prime", "metric small cancellation condition C'(lambda)", kPresentation, cmd_c_prime},
    {"dehn", "Dehn reduction of a word", kPresentation | kWordFlag, cmd_dehn},
    {"commensurable", "commensurability of two free-group elements", kPresentation,
     cmd_commensurable},
    {"cayley-ball", "ball in a Cayley graph", kPresentation | kWindow, cmd_cayley_ball},
    {"h2", "the two-generator one-relator presentation H2", 0, cmd_h2},
    {"injectivity", "injectivity of the quotient map on a small ball",
     kGraph | kAction | kPresentation | kSubgroup | kRho | kElement, cmd_injectivity},
};

void add_options(CLI::App* sub, const Command& cmd, RunConfig& c) {
  const unsigned f = cmd.flags;
  const std::string name = cmd.name;
  if (f & kGraph) {
    sub->add_option("--graph,--metric", c.graph, "graph or distance-matrix JSON file");
  }
  if (f & kAction) sub->add_option("--action", c.action, "action JSON file");
  if (f & kFamily) sub->add_option("--family", c.family, "cone family JSON file");
  if (f & kPresentation) sub->add_option("--presentation", c.presentation, "presentation text file");
  if (f & kConstants) sub->add_option("--constants", c.constants, "constants JSON file");
  if (f & kSubset) {
    sub->add_option("--subset,--region", c.subset, "point indices")->delimiter(',');
  }
  if (f & kSubgroup) {
    sub->add_option("--subgroup", c.subgroup, "element indices generating K")->delimiter(',');
  }
  if (f & kWindow) {
    sub->add_option("--radius", c.radius, "window radius");
    sub->add_option("--rank", c.rank, "free rank when no presentation is given");
  }
  if (f & kWordFlag) sub->add_option("--word", c.word, "word, e.g. \"a b A\" or \"x^2 (Y x y)\"");
  if (f & kThreads) sub->add_option("--threads", c.threads, "worker threads (0 = all cores)");
  if (f & kR) sub->add_option("--r", c.r, "separation radius");
  if (f & kElement) {
    sub->add_option("--element", c.element, "group element index");
    sub->add_option("--base", c.base, "base point");
  }
  if (name == "gromov") {
    sub->add_option("--x", c.x)->required();
    sub->add_option("--y", c.y)->required();
    sub->add_option("--z", c.z)->required();
  }
  if (name == "capacity") sub->add_option("--R", c.R, "ball radius for the bounded-geometry bound");
  if (name == "quasiconvex") {
    sub->add_option("--alpha", c.alpha, "quasi-convexity constant");
    sub->add_flag("--strong", c.strong, "check strong quasi-convexity");
    sub->add_option("--delta", c.delta, "hyperbolicity constant (default: computed)");
  }
  if (name == "classify") {
    sub->add_option("--n-max", c.n_max, "largest power examined");
    sub->add_option("--delta", c.delta, "hyperbolicity constant of the window");
    sub->add_option("--rho", c.rho_opt, "also report the least power with |g^n| >= 2 pi sinh rho");
  }
  if (name == "injectivity") sub->add_option("--rho", c.rho, "cone radius")->required();
  if (name == "coneoff") sub->add_flag("--expand", c.expand, "close the family under the action");
  if (name == "c-prime") sub->add_option("--lambda", c.lambda, "rational, e.g. 1/6");
  if (name == "dehn") sub->get_option("--word")->required();
  if (name == "commensurable") {
    sub->set_help_flag("--help", "Print this help message and exit");
    sub->add_option("--g", c.g, "first word")->required();
    sub->add_option("--h", c.h, "second word")->required();
  }
  sub->add_option("--format", c.format, "json, text or dot")
      ->check(CLI::IsMember({"json", "text", "dot"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hyperbolic graphs, group actions and small cancellation"};
  app.name("hypcone");
  app.require_subcommand(1, 1);
  RunConfig config;
  std::map<CLI::App*, const Command*> by_app;
  for (const auto& cmd : kCommands) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    add_options(sub, cmd, config);
    by_app[sub] = &cmd;
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  const Command* cmd = nullptr;
  for (const auto& [sub, c] : by_app) {
    if (sub->parsed()) cmd = c;
  }
  if (!cmd) {
    err << "error: no command given\n";
    return kExitError;
  }
  config.command = cmd->name;

  try {
    Outcome result = cmd->handler(config);
    json report = {{"command", config.command}};
    report.update(result.report);
    if (config.format == "dot") {
      if (!result.graph) throw UsageError("--format dot needs a command that produces a graph");
      json meta = report;
      meta.erase("graph");
      out << io::graph_to_dot(*result.graph, meta);
    } else if (config.format == "text") {
      out << io::to_text(report);
    } else {
      out << report.dump(2) << "\n";
    }
    return result.status;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
}

}  // namespace hypcone::cli
