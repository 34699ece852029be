#pragma once

#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "hypcone/actions.hpp"
#include "hypcone/coneoff.hpp"
#include "hypcone/metric.hpp"
#include "hypcone/words.hpp"

namespace hypcone::io {

using json = nlohmann::ordered_json;

/// Malformed input. The message reads "source:position: detail" where the
/// position is a byte offset ("byte N"), a JSON pointer, or line:column.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string read_text_file(const std::string& path);
json parse_json(const std::string& text, const std::string& source);
json read_json_file(const std::string& path);

/// Graph: {"vertices": n, "edges": [[u, v], [u, v, length], ...], "labels": [...]}.
WeightedGraph graph_from_json(const json& j, const std::string& source);
/// Metric: {"distances": [[...], ...]} with "inf" for infinite entries.
FiniteMetricSpace metric_from_json(const json& j, const std::string& source);
/// Action: {"order": k, "mult": [[...]], "perm": [[...]], "generators": [...]}
/// or {"points": n, "generator_perms": [[...], ...]}.
ActionTable action_from_json(const json& j, const std::string& source);
/// Family: {"rho": rho, "cones": [{"Y": [...], "H": [...]}, ...]}.
ConeFamily family_from_json(const json& j, const std::string& source);
/// Constants: {"delta0": .., "Delta0": .., "rho0": .., "delta1": ..}, all required.
ScConstants constants_from_json(const json& j, const std::string& source);

/// A graph file or a distance-matrix file.
struct SpaceInput {
  std::variant<WeightedGraph, FiniteMetricSpace> data;
  std::vector<std::string> labels;

  bool has_graph() const { return std::holds_alternative<WeightedGraph>(data); }
  const WeightedGraph& graph() const { return std::get<WeightedGraph>(data); }
  FiniteMetricSpace metric() const;
};
SpaceInput read_space(const std::string& path);

Presentation read_presentation(const std::string& path);
/// Word over the presentation's generators; `source` names it in errors.
Word read_word(const std::string& text, const std::vector<std::string>& generators,
               const std::string& source);

/// Floats rounded to 12 significant digits; infinities as "inf" / "-inf".
json number(double v);
json graph_to_json(const WeightedGraph& g);
json metric_to_json(const FiniteMetricSpace& m);
json family_to_json(const ConeFamily& q);
/// DOT rendering of `g`, with `report` carried as a leading comment.
std::string graph_to_dot(const WeightedGraph& g, const json& report);
/// "key: value" lines for the top-level fields of `report`.
std::string to_text(const json& report);

}  // namespace hypcone::io
