#include "hypcone/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hypcone::io {

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& where,
                       const std::string& message) {
  throw InputError(source + ":" + (where.empty() ? "/" : where) + ": " + message);
}

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

const json& member(const json& j, const std::string& key, const std::string& ptr,
                   const std::string& source) {
  if (!j.is_object()) fail(source, ptr, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(source, ptr, "missing field \"" + key + "\"");
  return *it;
}

std::size_t as_index(const json& j, const std::string& ptr, const std::string& source) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    fail(source, ptr, "expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

double as_number(const json& j, const std::string& ptr, const std::string& source) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "Infinity") return kInfinity;
  }
  fail(source, ptr, "expected a number");
}

const json& as_array(const json& j, const std::string& ptr, const std::string& source) {
  if (!j.is_array()) fail(source, ptr, "expected an array");
  return j;
}

std::vector<std::size_t> index_list(const json& j, const std::string& ptr,
                                    const std::string& source) {
  std::vector<std::size_t> out;
  const auto& arr = as_array(j, ptr, source);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(as_index(arr[i], child(ptr, i), source));
  return out;
}

std::vector<std::vector<std::size_t>> index_matrix(const json& j, const std::string& ptr,
                                                   const std::string& source) {
  std::vector<std::vector<std::size_t>> out;
  const auto& arr = as_array(j, ptr, source);
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(index_list(arr[i], child(ptr, i), source));
  return out;
}

std::vector<std::string> label_list(const json& j, const std::string& ptr,
                                    const std::string& source) {
  std::vector<std::string> out;
  const auto& arr = as_array(j, ptr, source);
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (arr[i].is_string()) {
      out.push_back(arr[i].get<std::string>());
    } else if (arr[i].is_number()) {
      out.push_back(arr[i].dump());
    } else {
      fail(source, child(ptr, i), "expected a string label");
    }
  }
  return out;
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ":0: cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::string what = e.what();
    if (auto pos = what.find("] "); pos != std::string::npos) what = what.substr(pos + 2);
    throw InputError(source + ":byte " + std::to_string(e.byte) + ": " + what);
  }
}

json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

WeightedGraph graph_from_json(const json& j, const std::string& source) {
  const std::size_t n = as_index(member(j, "vertices", "", source), "/vertices", source);
  WeightedGraph g(n);
  const auto& edges = as_array(member(j, "edges", "", source), "/edges", source);
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string ptr = child("/edges", i);
    const json& e = edges[i];
    std::size_t u = 0, v = 0;
    double length = 1.0;
    if (e.is_array()) {
      if (e.size() != 2 && e.size() != 3) fail(source, ptr, "expected [u, v] or [u, v, length]");
      u = as_index(e[0], child(ptr, 0), source);
      v = as_index(e[1], child(ptr, 1), source);
      if (e.size() == 3) length = as_number(e[2], child(ptr, 2), source);
    } else if (e.is_object()) {
      u = as_index(member(e, "u", ptr, source), child(ptr, "u"), source);
      v = as_index(member(e, "v", ptr, source), child(ptr, "v"), source);
      if (e.contains("length")) length = as_number(e["length"], child(ptr, "length"), source);
    } else {
      fail(source, ptr, "expected an edge");
    }
    try {
      g.add_edge(u, v, length);
    } catch (const std::exception& ex) {
      fail(source, ptr, ex.what());
    }
  }
  if (j.contains("labels")) {
    try {
      g.set_labels(label_list(j["labels"], "/labels", source));
    } catch (const std::invalid_argument& ex) {
      fail(source, "/labels", ex.what());
    }
  }
  return g;
}

FiniteMetricSpace metric_from_json(const json& j, const std::string& source) {
  const auto& rows = as_array(member(j, "distances", "", source), "/distances", source);
  std::vector<std::vector<double>> matrix;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string ptr = child("/distances", i);
    const auto& row = as_array(rows[i], ptr, source);
    std::vector<double> values;
    for (std::size_t k = 0; k < row.size(); ++k) values.push_back(as_number(row[k], child(ptr, k), source));
    matrix.push_back(std::move(values));
  }
  try {
    return FiniteMetricSpace::from_rows(matrix);
  } catch (const std::invalid_argument& ex) {
    fail(source, "/distances", ex.what());
  }
}

ActionTable action_from_json(const json& j, const std::string& source) {
  try {
    if (j.is_object() && j.contains("generator_perms")) {
      const std::size_t n = as_index(member(j, "points", "", source), "/points", source);
      return ActionTable::from_generators(
          n, index_matrix(j["generator_perms"], "/generator_perms", source));
    }
    const auto mult = index_matrix(member(j, "mult", "", source), "/mult", source);
    const auto perm = index_matrix(member(j, "perm", "", source), "/perm", source);
    if (j.contains("order")) {
      const std::size_t order = as_index(j["order"], "/order", source);
      if (order != mult.size()) fail(source, "/order", "order does not match the table size");
    }
    std::vector<std::size_t> gens;
    if (j.contains("generators")) gens = index_list(j["generators"], "/generators", source);
    return ActionTable(mult, perm, gens);
  } catch (const std::invalid_argument& ex) {
    fail(source, "", ex.what());
  } catch (const std::length_error& ex) {
    fail(source, "", ex.what());
  }
}

ConeFamily family_from_json(const json& j, const std::string& source) {
  ConeFamily q;
  q.rho = as_number(member(j, "rho", "", source), "/rho", source);
  if (!(q.rho > 0.0) || !std::isfinite(q.rho)) fail(source, "/rho", "rho must be positive");
  const auto& cones = as_array(member(j, "cones", "", source), "/cones", source);
  for (std::size_t i = 0; i < cones.size(); ++i) {
    const std::string ptr = child("/cones", i);
    ConeEntry c;
    c.Y = index_list(member(cones[i], "Y", ptr, source), child(ptr, "Y"), source);
    if (c.Y.empty()) fail(source, child(ptr, "Y"), "Y must be nonempty");
    if (cones[i].contains("H")) c.H = index_list(cones[i]["H"], child(ptr, "H"), source);
    q.cones.push_back(std::move(c));
  }
  return q;
}

ScConstants constants_from_json(const json& j, const std::string& source) {
  ScConstants c;
  c.delta0 = as_number(member(j, "delta0", "", source), "/delta0", source);
  c.Delta0 = as_number(member(j, "Delta0", "", source), "/Delta0", source);
  c.rho0 = as_number(member(j, "rho0", "", source), "/rho0", source);
  c.delta1 = as_number(member(j, "delta1", "", source), "/delta1", source);
  return c;
}

FiniteMetricSpace SpaceInput::metric() const {
  if (has_graph()) return path_metric(graph());
  return std::get<FiniteMetricSpace>(data);
}

SpaceInput read_space(const std::string& path) {
  const json j = read_json_file(path);
  SpaceInput in;
  if (j.is_object() && j.contains("distances")) {
    in.data = metric_from_json(j, path);
    if (j.contains("labels")) in.labels = label_list(j["labels"], "/labels", path);
  } else {
    WeightedGraph g = graph_from_json(j, path);
    in.labels = g.labels();
    in.data = std::move(g);
  }
  return in;
}

Presentation read_presentation(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return parse_presentation(text);
  } catch (const ParseError& e) {
    throw InputError(path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                     ": " + e.what());
  }
}

Word read_word(const std::string& text, const std::vector<std::string>& generators,
               const std::string& source) {
  try {
    return parse_word(text, generators);
  } catch (const ParseError& e) {
    throw InputError(source + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                     ": " + e.what());
  }
}

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double rounded = std::strtod(buf, nullptr);
  if (rounded == 0.0) rounded = 0.0;  // no negative zero
  return rounded;
}

json graph_to_json(const WeightedGraph& g) {
  json edges = json::array();
  for (const auto& e : g.edges()) edges.push_back({e.u, e.v, number(e.length)});
  json out = {{"vertices", g.vertex_count()}, {"edges", std::move(edges)}};
  if (!g.labels().empty()) out["labels"] = g.labels();
  return out;
}

json metric_to_json(const FiniteMetricSpace& m) {
  json rows = json::array();
  for (Vertex i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (Vertex k = 0; k < m.size(); ++k) row.push_back(number(m(i, k)));
    rows.push_back(std::move(row));
  }
  return {{"distances", std::move(rows)}};
}

json family_to_json(const ConeFamily& q) {
  json cones = json::array();
  for (const auto& c : q.cones) cones.push_back({{"Y", c.Y}, {"H", c.H}});
  return {{"rho", number(q.rho)}, {"cones", std::move(cones)}};
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string graph_to_dot(const WeightedGraph& g, const json& report) {
  std::ostringstream out;
  std::string comment = report.dump();
  for (std::size_t pos = comment.find("*/"); pos != std::string::npos; pos = comment.find("*/")) {
    comment.replace(pos, 2, "* /");
  }
  out << "/* " << comment << " */\n";
  out << "graph G {\n";
  for (Vertex v = 0; v < g.vertex_count(); ++v) {
    out << "  " << v << " [label=\"" << dot_escape(g.label(v)) << "\"];\n";
  }
  for (const auto& e : g.edges()) {
    out << "  " << e.u << " -- " << e.v << " [len=" << number(e.length).dump() << "];\n";
  }
  out << "}\n";
  return out.str();
}

std::string to_text(const json& report) {
  std::ostringstream out;
  for (const auto& [key, value] : report.items()) {
    out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << "\n";
  }
  return out.str();
}

}  // namespace hypcone::io
