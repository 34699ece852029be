#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hypcone/actions.hpp"
#include "hypcone/metric.hpp"

namespace hypcone {

/// Letter i + 1 is generator i, -(i + 1) its inverse. Zero is never a letter.
using Letter = int;

class Word {
 public:
  Word() = default;
  explicit Word(std::vector<Letter> letters);

  static Word generator(std::size_t index) { return Word({static_cast<Letter>(index + 1)}); }

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  const std::vector<Letter>& letters() const { return letters_; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  /// Formal inverse: reversed with every letter inverted. Not reduced.
  Word inverse() const;
  Word subword(std::size_t pos, std::size_t len) const;
  /// Cyclic rotation starting at `pos`.
  Word rotate(std::size_t pos) const;
  /// Largest generator index + 1 used by the word.
  std::size_t rank() const;

  friend Word operator*(const Word& a, const Word& b);
  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word&, const Word&) = default;

 private:
  std::vector<Letter> letters_;
};

/// Product of `w` with itself k times, freely reduced; k < 0 uses the inverse.
Word power(const Word& w, long k);

/// Order a < A < b < B < ... used for shortlex comparisons.
inline int letter_rank(Letter l) { return 2 * (l > 0 ? l - 1 : -l - 1) + (l < 0 ? 1 : 0); }
bool shortlex_less(const Word& a, const Word& b);

struct WordHash {
  std::size_t operator()(const Word& w) const;
};

Word free_reduce(const Word& w);
bool is_freely_reduced(const Word& w);
bool is_cyclically_reduced(const Word& w);

/// w = conjugator * core * conjugator^-1 after free reduction, with core
/// cyclically reduced.
struct CyclicReduction {
  Word core;
  Word conjugator;
};
CyclicReduction cyclic_reduction(const Word& w);
Word cyclic_reduce(const Word& w);

/// Names used for printing; lowercase for generators, uppercase for inverses.
std::vector<std::string> default_generator_names(std::size_t count);
std::string to_string(const Word& w, const std::vector<std::string>& names);

struct Presentation {
  std::vector<std::string> generators;  // single lowercase letters
  std::vector<Word> relators;           // nonempty, cyclically reduced

  bool is_free() const { return relators.empty(); }
  /// Checks the generator names and relator invariants.
  void validate() const;
};

Presentation free_presentation(std::size_t rank);

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error(message), line_(line), column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Parses one word. Letters a-z are generators and A-Z their inverses; x^n,
/// x^-n, (...)^n and "lhs = rhs" (meaning lhs rhs^-1) are accepted, as is "1"
/// for the identity. Letters must appear in `generators`. Errors carry the
/// 1-based column and the given line number.
Word parse_word(std::string_view text, const std::vector<std::string>& generators,
                std::size_t line = 1);

/// Presentation text: an optional "generators: a b ..." line, then one
/// relator per line. Blank lines and '#' comments are skipped. Without a
/// header the generators are the letters used, in alphabetical order.
/// Relators are stored cyclically reduced.
Presentation parse_presentation(std::string_view text);

/// y^-1 x (y^-1 x y) x^2 (y^-1 x y) ... x^10 (y^-1 x y), cyclically reduced.
Presentation h2_presentation();

/// All cyclic permutations of the relators and their inverses, deduplicated
/// and in shortlex order.
std::vector<Word> symmetrize(const Presentation& p);

struct PieceWitness {
  Word piece;
  Word first;   // symmetrized words sharing the piece as a prefix
  Word second;
  std::size_t first_relator = 0;  // indices into the presentation
  std::size_t second_relator = 0;
};

struct PieceReport {
  std::size_t max_piece_length = 0;
  std::size_t min_relator_length = 0;
  std::size_t symmetrized_count = 0;
  double ratio = 0.0;  // max_piece_length / min_relator_length
  std::optional<PieceWitness> witness;  // first pair attaining the maximum
  std::vector<Word> maximal_pieces;     // distinct pieces of maximal length
};

/// Pieces are common prefixes of two symmetrized words that differ, or that
/// come from different relators. A relator listed twice therefore has
/// itself as a piece.
PieceReport piece_report(const Presentation& p);

struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  /// Accepts "p/q" or an integer.
  static Rational parse(std::string_view text);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

struct MetricScReport {
  bool holds = true;
  Rational lambda;
  PieceReport pieces;
  std::optional<PieceWitness> violation;  // first pair breaking the bound
};

/// C'(lambda): every piece is shorter than lambda times both relators it is a
/// prefix of. Exact integer arithmetic. lambda must lie in (0, 1).
MetricScReport check_metric_sc(const Presentation& p, Rational lambda);

struct DehnResult {
  Word reduced;
  bool trivial = false;
  bool heuristic = false;  // C'(1/6) was not verified for the presentation
  std::size_t steps = 0;
};

/// Dehn's algorithm. Precomputes the symmetrized relators and whether the
/// presentation satisfies C'(1/6).
class DehnReducer {
 public:
  explicit DehnReducer(Presentation p);

  const Presentation& presentation() const { return presentation_; }
  bool verified() const { return verified_; }
  const std::vector<Word>& symmetrized() const { return symmetrized_; }

  /// Repeatedly replaces the leftmost, longest subword that is more than half
  /// of a symmetrized relator by the inverse of the rest of that relator.
  DehnResult reduce(const Word& w) const;
  bool equal(const Word& a, const Word& b) const { return reduce(a * b.inverse()).trivial; }

 private:
  Presentation presentation_;
  std::vector<Word> symmetrized_;
  bool verified_ = false;
};

DehnResult dehn_reduce(const Word& w, const Presentation& p);

struct PrimitiveRoot {
  Word root;
  long exponent = 0;
};

/// w = root^exponent with exponent maximal. Throws std::invalid_argument for
/// the empty (or freely trivial) word.
PrimitiveRoot primitive_root(const Word& w);

bool is_conjugate_free(const Word& w1, const Word& w2);

/// A shortest u with g = u h u^-1 in the free group (shortlex least among
/// shortest), or nullopt when g and h are not conjugate.
std::optional<Word> find_conjugator(const Word& g, const Word& h);

struct Commensurability {
  bool commensurable = false;
  long n = 0;  // g^n = u h^m u^-1, n > 0 minimal
  long m = 0;
  Word conjugator;  // u, shortest
};

/// Throws std::invalid_argument when g or h is trivial.
Commensurability are_commensurable_free(const Word& g, const Word& h);

/// Ball of radius `radius` about the identity in the Cayley graph of `p`
/// with respect to its generators. Vertices are shortlex geodesic words in
/// breadth-first order; edges join x and x a for each generator a.
///
/// For free groups the distance is the word metric |x^-1 y|. Otherwise the
/// presentation must satisfy C'(1/6) (equality is decided by Dehn's
/// algorithm) and the distance is the path metric of the window graph.
class CayleyWindow final : public MetricView {
 public:
  std::size_t size() const override { return elements_.size(); }
  double distance(Vertex x, Vertex y) const override;

  const Presentation& presentation() const { return reducer_.presentation(); }
  std::size_t radius() const { return radius_; }
  const std::vector<Word>& elements() const { return elements_; }
  const WeightedGraph& graph() const { return graph_; }
  std::vector<std::string> labels() const;

  /// Index of the element represented by w, if it lies in the window.
  std::optional<Vertex> find(const Word& w) const;
  /// x -> g x, partial on the window.
  PointMap left_action(const Word& g) const;
  /// Left actions of the generators.
  std::vector<PointMap> generator_actions() const;

  friend CayleyWindow cayley_ball(const Presentation& p, long radius);

 private:
  explicit CayleyWindow(Presentation p) : reducer_(std::move(p)) {}

  DehnReducer reducer_;
  std::size_t radius_ = 0;
  std::vector<Word> elements_;
  std::unordered_map<Word, Vertex, WordHash> index_;  // free groups only
  WeightedGraph graph_;
  FiniteMetricSpace window_metric_;  // non-free groups only
};

/// Throws std::invalid_argument for a negative radius or a non-free
/// presentation without C'(1/6).
CayleyWindow cayley_ball(const Presentation& p, long radius);

}  // namespace hypcone
