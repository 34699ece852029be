#include <doctest.h>

#include <random>

#include "hypcone/actions.hpp"
#include "hypcone/words.hpp"
#include "oracles.hpp"

using namespace hypcone;

namespace {

const std::vector<std::string> kAB{"a", "b"};
const std::vector<std::string> kABC{"a", "b", "c"};

Word w(const std::string& text, const std::vector<std::string>& gens = kAB) {
  return parse_word(text, gens);
}

std::string s(const Word& x, const std::vector<std::string>& gens = kAB) {
  return to_string(x, gens);
}

oracle::Letters letters(const Word& x) { return x.letters(); }

Word word(const oracle::Letters& l) { return Word(l); }

}  // namespace

TEST_SUITE("words") {

TEST_CASE("parsing") {
  CHECK(s(w("a b A")) == "abA");
  CHECK(s(w("abA")) == "abA");
  CHECK(s(w("a^3")) == "aaa");
  CHECK(s(w("a^-2")) == "AA");
  CHECK(s(w("(a b)^2")) == "abab");
  CHECK(s(w("(a B)^-1")) == "bA");
  CHECK(s(w("1")) == "");
  CHECK(s(w("b = a")) == "bA");
  CHECK_THROWS_AS(w("a c"), ParseError);
  CHECK_THROWS_AS(w("(a b"), ParseError);
  CHECK_THROWS_AS(w("a^"), ParseError);
  try {
    w("a  q");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 4);
  }
}

TEST_CASE("presentations") {
  const auto p = parse_presentation("generators: x y\n# comment\nx y X Y\n");
  CHECK(p.generators == std::vector<std::string>{"x", "y"});
  REQUIRE(p.relators.size() == 1);
  CHECK(s(p.relators[0], p.generators) == "xyXY");
  const auto q = parse_presentation("b a B A");
  CHECK(q.generators == kAB);
  CHECK(s(q.relators[0]) == "baBA");
  CHECK_THROWS_AS(parse_presentation("a A"), ParseError);
  CHECK(free_presentation(2).is_free());
}

TEST_CASE("free and cyclic reduction") {
  CHECK(free_reduce(Word({1, 2, -2, -1, 1})) == Word({1}));
  CHECK(is_freely_reduced(Word({1, 2, 1})));
  CHECK_FALSE(is_cyclically_reduced(Word({1, 2, -1})));
  const auto c = cyclic_reduction(Word({1, 2, 2, -1}));
  CHECK(c.core == Word({2, 2}));
  CHECK(free_reduce(c.conjugator * c.core * c.conjugator.inverse()) == Word({1, 2, 2, -1}));
  CHECK(power(Word({1, 2}), 3) == Word({1, 2, 1, 2, 1, 2}));
  CHECK(power(Word({1, 2, -1}), -2) == Word({1, -2, -2, -1}));
  CHECK_THROWS_AS(Word({0}), std::invalid_argument);
}

TEST_CASE("shortlex order") {
  CHECK(shortlex_less(w("a"), w("A")));
  CHECK(shortlex_less(w("A"), w("b")));
  CHECK(shortlex_less(w("B"), w("aa")));
  CHECK_FALSE(shortlex_less(w("ab"), w("ab")));
}

TEST_CASE("property: free reduction agrees with the stack oracle") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 500; ++trial) {
    const auto raw = oracle::random_word(rng, 3, trial % 20, false);
    const Word x(raw);
    CHECK(free_reduce(x).letters() == oracle::reduce(raw));
    CHECK(free_reduce(x * x.inverse()).empty());
  }
}

TEST_CASE("H2 relator") {
  const auto p = h2_presentation();
  const Word& r = p.relators.front();
  CHECK(r.size() == 84);
  long x_sum = 0;
  for (Letter l : r)
    if (std::abs(l) == 1) x_sum += l > 0 ? 1 : -1;
  CHECK(x_sum == 65);
  CHECK(symmetrize(p).size() == 168);
  // the relation written out by hand
  oracle::Letters y_eq;
  for (int i = 1; i <= 10; ++i) {
    for (int k = 0; k < i; ++k) y_eq.push_back(1);
    y_eq.insert(y_eq.end(), {-2, 1, 2});
  }
  oracle::Letters rel = oracle::reduce(oracle::cat(oracle::inv({2}), y_eq));
  const auto parsed = parse_presentation(
      "generators: x y\ny = x (Y x y) x^2 (Y x y) x^3 (Y x y) x^4 (Y x y) x^5 (Y x y) "
      "x^6 (Y x y) x^7 (Y x y) x^8 (Y x y) x^9 (Y x y) x^10 (Y x y)");
  CHECK(is_conjugate_free(parsed.relators.front().inverse(), r));
  CHECK(is_conjugate_free(Word(rel), r));
}

TEST_CASE("H2 pieces") {
  const auto p = h2_presentation();
  const auto rep = piece_report(p);
  CHECK(rep.max_piece_length == oracle::max_piece({letters(p.relators[0])}));
  CHECK(rep.max_piece_length == 20);
  CHECK(rep.min_relator_length == 84);
  REQUIRE(rep.witness.has_value());
  CHECK(rep.witness->piece.size() == 20);
  CHECK(s(rep.witness->piece, p.generators) == "xxxxxxxxYxyxxxxxxxxx");
  const auto sc = check_metric_sc(p, Rational{1, 6});
  CHECK_FALSE(sc.holds);
  CHECK(check_metric_sc(p, Rational{1, 4}).holds);
}

TEST_CASE("commutator pieces") {
  const auto p = parse_presentation("a b A B");
  CHECK(piece_report(p).max_piece_length == 1);
  CHECK(oracle::max_piece({letters(p.relators[0])}) == 1);
  CHECK_FALSE(check_metric_sc(p, Rational{1, 6}).holds);
  CHECK_FALSE(check_metric_sc(p, Rational{1, 4}).holds);
  CHECK(check_metric_sc(p, Rational{1, 3}).holds);
}

TEST_CASE("rationals") {
  const auto r = Rational::parse("2/12");
  CHECK(r.num == 1);
  CHECK(r.den == 6);
  CHECK(r.str() == "1/6");
  CHECK_THROWS_AS(Rational::parse("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(Rational::parse("x"), std::invalid_argument);
  CHECK_THROWS_AS(check_metric_sc(parse_presentation("a b A B"), Rational{1, 1}),
                  std::invalid_argument);
}

TEST_CASE("Dehn reduction in small C'(1/6) groups") {
  for (const char* rel : {"C A c a b a a", "B A A b a c c B"}) {
    const auto p = parse_presentation(std::string("generators: a b c\n") + rel);
    REQUIRE(check_metric_sc(p, Rational{1, 6}).holds);
    const Word r = p.relators.front();
    DehnReducer d(p);
    CHECK(d.verified());
    CHECK(d.reduce(r).trivial);
    CHECK(d.reduce(r.inverse()).trivial);
    const Word c = parse_word("a b", p.generators);
    CHECK(d.reduce(c * r.rotate(3) * c.inverse()).trivial);
    CHECK_FALSE(d.reduce(c).trivial);
    // a long piece of r becomes the inverse of the short remainder
    const auto res = d.reduce(r.subword(0, 5));
    CHECK(res.reduced.size() == r.size() - 5);
    CHECK(d.equal(r.subword(0, 5), r.subword(5, r.size() - 5).inverse()));
  }
  const auto h = dehn_reduce(parse_word("y Y", {"x", "y"}), h2_presentation());
  CHECK(h.trivial);
  CHECK(h.reduced.empty());
  CHECK(h.heuristic);
}

TEST_CASE("property: Dehn verdicts match normal-closure search") {
  const auto p = parse_presentation("generators: a b c\nC A c a b a a");
  const std::vector<oracle::Letters> rels{letters(p.relators[0])};
  std::mt19937 rng(29);
  int compared = 0, trivial = 0;
  for (int trial = 0; trial < 150; ++trial) {
    oracle::Letters raw = oracle::random_word(rng, 3, 1 + trial % 8, true);
    if (trial % 3 == 0) {
      // conjugate of a relator rotation
      const auto rot = word(rels[0]).rotate(trial % 7).letters();
      raw = oracle::reduce(oracle::cat(oracle::cat(raw, rot), oracle::inv(raw)));
    }
    const auto verdict = oracle::normal_closure_search(raw, rels, raw.size() + 7, 20000);
    if (verdict == oracle::Closure::unknown) continue;
    ++compared;
    const bool t = dehn_reduce(Word(raw), p).trivial;
    trivial += t;
    CHECK(t == (verdict == oracle::Closure::trivial));
  }
  CHECK(compared >= 100);
  CHECK(trivial >= 30);
}

TEST_CASE("primitive roots") {
  const auto r = primitive_root(w("abababab"));
  CHECK(s(r.root) == "ab");
  CHECK(r.exponent == 4);
  const auto c = primitive_root(w("b a b a"));
  CHECK(s(c.root) == "ba");
  CHECK(c.exponent == 2);
  CHECK(primitive_root(w("b a b a B")).exponent == 1);
  CHECK(primitive_root(w("a")).exponent == 1);
  CHECK(primitive_root(w("aab")).exponent == 1);
  CHECK(primitive_root(w("A A")).exponent == 2);
  CHECK_THROWS_AS(primitive_root(Word()), std::invalid_argument);
}

TEST_CASE("conjugacy") {
  CHECK(is_conjugate_free(w("ab"), w("ba")));
  CHECK(is_conjugate_free(w("a"), w("b a B")));
  CHECK_FALSE(is_conjugate_free(w("a"), w("A")));
  const auto u = find_conjugator(w("a"), w("b a B"));
  REQUIRE(u.has_value());
  CHECK(free_reduce(*u * w("b a B") * u->inverse()) == w("a"));
  CHECK(s(*u) == "B");
  CHECK_FALSE(find_conjugator(w("ab"), w("aab")).has_value());
}

TEST_CASE("commensurability examples") {
  const auto c = are_commensurable_free(w("a"), w("b a B"));
  CHECK(c.commensurable);
  CHECK(c.n == 1);
  CHECK(c.m == 1);
  CHECK(s(c.conjugator) == "B");
  const auto d = are_commensurable_free(w("a a"), w("a a a"));
  CHECK(d.commensurable);
  CHECK(d.n == 3);
  CHECK(d.m == 2);
  CHECK(d.conjugator.empty());
  const auto e = are_commensurable_free(w("a"), w("A"));
  CHECK(e.m == -1);
  CHECK_FALSE(are_commensurable_free(w("a"), w("b")).commensurable);
  CHECK_FALSE(are_commensurable_free(w("ab"), w("aB")).commensurable);
  CHECK_THROWS_AS(are_commensurable_free(Word(), w("a")), std::invalid_argument);
}

TEST_CASE("property: commensurability witnesses are valid") {
  std::mt19937 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = oracle::random_word(rng, 2, 1 + trial % 5, true);
    auto h = oracle::random_word(rng, 2, 1 + trial % 4, true);
    if (trial % 2) {
      const auto v = oracle::random_word(rng, 2, trial % 4, true);
      h = oracle::reduce(oracle::cat(oracle::cat(v, oracle::pow(g, 1 + trial % 3)), oracle::inv(v)));
    }
    if (h.empty()) continue;
    const auto c = are_commensurable_free(Word(g), Word(h));
    if (trial % 2) CHECK(c.commensurable);
    if (!c.commensurable) continue;
    CHECK(c.n > 0);
    const auto lhs = oracle::pow(g, int(c.n));
    const auto u = c.conjugator.letters();
    CHECK(oracle::reduce(oracle::cat(oracle::cat(u, oracle::pow(h, int(c.m))), oracle::inv(u))) == lhs);
  }
}

TEST_CASE("free Cayley balls") {
  for (long r = 0; r <= 4; ++r) {
    const auto window = cayley_ball(free_presentation(2), r);
    long expected = 1, level = 4;
    for (long k = 1; k <= r; ++k, level *= 3) expected += level;
    CHECK(window.size() == std::size_t(expected));
    CHECK(window.graph().edge_count() + 1 == window.size());
  }
  const auto window = cayley_ball(free_presentation(2), 3);
  CHECK(window.labels().front() == "1");
  CHECK(window.distance(*window.find(w("ab")), *window.find(w("aB"))) == 2.0);
  CHECK(window.distance(*window.find(w("ab")), *window.find(w("Ab"))) == 4.0);
  CHECK_THROWS_AS(cayley_ball(free_presentation(2), -1), std::invalid_argument);
}

TEST_CASE("radius-3 min-set of a is a^-3 .. a^2") {
  const auto window = cayley_ball(free_presentation(2), 3);
  const auto axis = min_set_axis(window.left_action(w("a")), window);
  std::vector<std::string> got;
  for (Vertex v : axis) got.push_back(s(window.elements()[v]));
  std::sort(got.begin(), got.end());
  std::vector<std::string> expected{"", "A", "AA", "AAA", "a", "aa"};
  std::sort(expected.begin(), expected.end());
  CHECK(got == expected);
  CHECK(translation_length(window.left_action(w("a")), window) == 1.0);
}

TEST_CASE("Cayley balls of a one-relator C'(1/6) group") {
  const auto p = parse_presentation("generators: a b c\nC A c a b a a");
  const auto window = cayley_ball(p, 3);
  const auto free = cayley_ball(free_presentation(3), 3);
  // no relations of length <= 6
  CHECK(window.size() == free.size());
  const auto big = cayley_ball(p, 4);
  CHECK(big.size() < cayley_ball(free_presentation(3), 4).size());
  CHECK_THROWS_AS(cayley_ball(parse_presentation("a b A B"), 2), std::invalid_argument);
}

}
