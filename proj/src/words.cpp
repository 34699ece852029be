#include "hypcone/words.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <numeric>
#include <set>
#include <utility>

namespace hypcone {

// ---------------------------------------------------------------------------
// Word
// ---------------------------------------------------------------------------

Word::Word(std::vector<Letter> letters) : letters_(std::move(letters)) {
  for (Letter l : letters_) {
    if (l == 0) throw std::invalid_argument("0 is not a letter");
  }
}

Word Word::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (Letter& l : out) l = -l;
  return Word(std::move(out));
}

Word Word::subword(std::size_t pos, std::size_t len) const {
  if (pos > size() || len > size() - pos) throw std::out_of_range("subword out of range");
  return Word(std::vector<Letter>(letters_.begin() + pos, letters_.begin() + pos + len));
}

Word Word::rotate(std::size_t pos) const {
  if (empty()) return {};
  std::vector<Letter> out(letters_);
  std::rotate(out.begin(), out.begin() + (pos % size()), out.end());
  return Word(std::move(out));
}

std::size_t Word::rank() const {
  std::size_t r = 0;
  for (Letter l : letters_) r = std::max<std::size_t>(r, static_cast<std::size_t>(std::abs(l)));
  return r;
}

Word operator*(const Word& a, const Word& b) {
  std::vector<Letter> out;
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  Word w;
  w.letters_ = std::move(out);
  return w;
}

bool shortlex_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return letter_rank(a[i]) < letter_rank(b[i]);
  }
  return false;
}

std::size_t WordHash::operator()(const Word& w) const {
  std::size_t h = 1469598103934665603ull;
  for (Letter l : w) {
    h ^= static_cast<std::size_t>(l + 64);
    h *= 1099511628211ull;
  }
  return h;
}

Word free_reduce(const Word& w) {
  std::vector<Letter> stack;
  stack.reserve(w.size());
  for (Letter l : w) {
    if (!stack.empty() && stack.back() == -l) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return Word(std::move(stack));
}

bool is_freely_reduced(const Word& w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == -w[i - 1]) return false;
  }
  return true;
}

bool is_cyclically_reduced(const Word& w) {
  return is_freely_reduced(w) && (w.size() < 2 || w[0] != -w[w.size() - 1]);
}

CyclicReduction cyclic_reduction(const Word& w) {
  const Word r = free_reduce(w);
  std::size_t k = 0;
  const std::size_t n = r.size();
  while (2 * k + 1 < n && r[k] == -r[n - 1 - k]) ++k;
  return {r.subword(k, n - 2 * k), r.subword(0, k)};
}

Word cyclic_reduce(const Word& w) { return cyclic_reduction(w).core; }

Word power(const Word& w, long k) {
  if (k == 0) return {};
  const auto [core, conj] = cyclic_reduction(k > 0 ? w : w.inverse());
  const long times = k > 0 ? k : -k;
  std::vector<Letter> letters(conj.begin(), conj.end());
  for (long i = 0; i < times; ++i) letters.insert(letters.end(), core.begin(), core.end());
  const Word back = conj.inverse();
  letters.insert(letters.end(), back.begin(), back.end());
  return Word(std::move(letters));
}

std::vector<std::string> default_generator_names(std::size_t count) {
  if (count > 26) throw std::invalid_argument("at most 26 generators are supported");
  std::vector<std::string> names;
  for (std::size_t i = 0; i < count; ++i) names.emplace_back(1, static_cast<char>('a' + i));
  return names;
}

std::string to_string(const Word& w, const std::vector<std::string>& names) {
  std::string out;
  for (Letter l : w) {
    const std::size_t i = static_cast<std::size_t>(std::abs(l)) - 1;
    std::string name = i < names.size() ? names[i] : std::string(1, static_cast<char>('a' + i));
    if (l < 0) {
      for (char& c : name) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    out += name;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Presentations and parsing
// ---------------------------------------------------------------------------

void Presentation::validate() const {
  std::set<std::string> seen;
  for (const auto& g : generators) {
    if (g.size() != 1 || g[0] < 'a' || g[0] > 'z') {
      throw std::invalid_argument("generator names must be single lowercase letters, got '" + g +
                                  "'");
    }
    if (!seen.insert(g).second) throw std::invalid_argument("duplicate generator '" + g + "'");
  }
  for (const auto& r : relators) {
    if (r.empty()) throw std::invalid_argument("relators must be nonempty");
    if (!is_cyclically_reduced(r)) throw std::invalid_argument("relators must be cyclically reduced");
    if (r.rank() > generators.size()) throw std::invalid_argument("relator uses an unknown generator");
  }
}

Presentation free_presentation(std::size_t rank) { return {default_generator_names(rank), {}}; }

namespace {

constexpr long kMaxExponent = 100000;

class WordParser {
 public:
  WordParser(std::string_view text, const std::vector<std::string>& generators, std::size_t line)
      : text_(text), line_(line) {
    for (std::size_t i = 0; i < generators.size(); ++i) {
      if (generators[i].size() == 1) index_[static_cast<unsigned char>(generators[i][0])] = i + 1;
    }
  }

  Word parse() {
    const Word lhs = sequence();
    skip_space();
    if (at_end()) return free_reduce(lhs);
    if (peek() != '=') fail("unexpected '" + std::string(1, peek()) + "'");
    ++pos_;
    const Word rhs = sequence();
    skip_space();
    if (!at_end()) fail("unexpected '" + std::string(1, peek()) + "'");
    return free_reduce(lhs * rhs.inverse());
  }

 private:
  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(line_, pos_ + 1, message);
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  Word sequence() {
    std::vector<Letter> letters;
    for (;;) {
      skip_space();
      if (at_end() || peek() == ')' || peek() == '=') break;
      const Word f = factor();
      letters.insert(letters.end(), f.begin(), f.end());
    }
    return Word(std::move(letters));
  }

  Word factor() {
    Word base = atom();
    skip_space();
    if (at_end() || peek() != '^') return base;
    ++pos_;
    skip_space();
    bool negative = false;
    if (!at_end() && (peek() == '-' || peek() == '+')) {
      negative = peek() == '-';
      ++pos_;
    }
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected an exponent after '^'");
    long value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc() || value > kMaxExponent) {
      pos_ = start;
      fail("exponent out of range");
    }
    return power(base, negative ? -value : value);
  }

  Word atom() {
    const char c = peek();
    if (c == '(') {
      const std::size_t open = pos_;
      ++pos_;
      Word inner = sequence();
      if (at_end() || peek() != ')') {
        pos_ = open;
        fail("unbalanced '('");
      }
      ++pos_;
      return inner;
    }
    if (c == '1') {
      ++pos_;
      return {};
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
      const std::size_t g = index_[static_cast<unsigned char>(lower)];
      if (g == 0) fail("unknown generator '" + std::string(1, lower) + "'");
      ++pos_;
      const Letter l = static_cast<Letter>(g);
      return Word({std::isupper(static_cast<unsigned char>(c)) ? -l : l});
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string_view text_;
  std::size_t line_;
  std::size_t pos_ = 0;
  std::array<std::size_t, 256> index_{};
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Word parse_word(std::string_view text, const std::vector<std::string>& generators,
                std::size_t line) {
  return WordParser(text, generators, line).parse();
}

Presentation parse_presentation(std::string_view text) {
  struct Line {
    std::size_t number;
    std::string_view body;
  };
  std::vector<Line> relator_lines;
  std::optional<std::vector<std::string>> header;

  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    if (trim(line).empty()) continue;

    const std::string_view t = trim(line);
    constexpr std::string_view key = "generators:";
    if (t.substr(0, key.size()) == key) {
      const std::size_t column = static_cast<std::size_t>(t.data() - line.data()) + 1;
      if (header) throw ParseError(number, column, "duplicate generators line");
      if (!relator_lines.empty()) {
        throw ParseError(number, column, "generators line must precede the relators");
      }
      header.emplace();
      std::string_view rest = t.substr(key.size());
      std::size_t offset = column + key.size() - 1;
      for (std::size_t i = 0; i < rest.size(); ++i) {
        const char c = rest[i];
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') continue;
        if (c < 'a' || c > 'z') {
          throw ParseError(number, offset + i + 1, "generator names must be lowercase letters");
        }
        const std::string name(1, c);
        if (std::find(header->begin(), header->end(), name) != header->end()) {
          throw ParseError(number, offset + i + 1, "duplicate generator '" + name + "'");
        }
        if (i + 1 < rest.size() && std::isalpha(static_cast<unsigned char>(rest[i + 1]))) {
          throw ParseError(number, offset + i + 2, "generator names must be single letters");
        }
        header->push_back(name);
      }
      continue;
    }
    relator_lines.push_back({number, line});
  }

  Presentation p;
  if (header) {
    p.generators = *header;
  } else {
    std::set<char> used;
    for (const auto& l : relator_lines) {
      for (char c : l.body) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
          used.insert(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        }
      }
    }
    for (char c : used) p.generators.emplace_back(1, c);
  }
  for (const auto& l : relator_lines) {
    Word r = cyclic_reduce(parse_word(l.body, p.generators, l.number));
    if (r.empty()) {
      const std::size_t column =
          static_cast<std::size_t>(trim(l.body).data() - l.body.data()) + 1;
      throw ParseError(l.number, column, "relator is freely trivial");
    }
    p.relators.push_back(std::move(r));
  }
  return p;
}

Presentation h2_presentation() {
  const Word x = Word::generator(0), y = Word::generator(1);
  const Word block = y.inverse() * x * y;
  Word r = y.inverse();
  for (long i = 1; i <= 10; ++i) r = r * power(x, i) * block;
  return {{"x", "y"}, {cyclic_reduce(r)}};
}

std::vector<Word> symmetrize(const Presentation& p) {
  std::vector<Word> out;
  for (const Word& r : p.relators) {
    for (const Word& s : {r, r.inverse()}) {
      for (std::size_t i = 0; i < s.size(); ++i) out.push_back(s.rotate(i));
    }
  }
  std::sort(out.begin(), out.end(), shortlex_less);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Pieces and C'(lambda)
// ---------------------------------------------------------------------------

namespace {

struct Tagged {
  Word word;
  std::size_t relator;
};

std::vector<Tagged> tagged_symmetrization(const Presentation& p) {
  std::vector<Tagged> out;
  for (std::size_t k = 0; k < p.relators.size(); ++k) {
    const Word& r = p.relators[k];
    for (const Word& s : {r, r.inverse()}) {
      for (std::size_t i = 0; i < s.size(); ++i) out.push_back({s.rotate(i), k});
    }
  }
  std::sort(out.begin(), out.end(), [](const Tagged& a, const Tagged& b) {
    if (a.word != b.word) return shortlex_less(a.word, b.word);
    return a.relator < b.relator;
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Tagged& a, const Tagged& b) {
                          return a.word == b.word && a.relator == b.relator;
                        }),
            out.end());
  return out;
}

std::size_t common_prefix(const Word& a, const Word& b) {
  const std::size_t n = std::min(a.size(), b.size());
  std::size_t k = 0;
  while (k < n && a[k] == b[k]) ++k;
  return k;
}

// Calls visit(i, j, lcp) for every pair of distinct tagged words.
template <typename Visit>
void for_each_piece(const std::vector<Tagged>& t, Visit&& visit) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = i + 1; j < t.size(); ++j) visit(i, j, common_prefix(t[i].word, t[j].word));
  }
}

PieceWitness make_witness(const std::vector<Tagged>& t, std::size_t i, std::size_t j,
                          std::size_t lcp) {
  return {t[i].word.subword(0, lcp), t[i].word, t[j].word, t[i].relator, t[j].relator};
}

}  // namespace

PieceReport piece_report(const Presentation& p) {
  PieceReport report;
  const auto tagged = tagged_symmetrization(p);
  report.symmetrized_count = symmetrize(p).size();
  for (const Word& r : p.relators) {
    if (report.min_relator_length == 0 || r.size() < report.min_relator_length) {
      report.min_relator_length = r.size();
    }
  }
  std::set<Word> maximal;
  for_each_piece(tagged, [&](std::size_t i, std::size_t j, std::size_t lcp) {
    if (lcp == 0 || lcp < report.max_piece_length) return;
    if (lcp > report.max_piece_length) {
      report.max_piece_length = lcp;
      report.witness = make_witness(tagged, i, j, lcp);
      maximal.clear();
    }
    maximal.insert(tagged[i].word.subword(0, lcp));
  });
  report.maximal_pieces.assign(maximal.begin(), maximal.end());
  std::sort(report.maximal_pieces.begin(), report.maximal_pieces.end(), shortlex_less);
  if (report.min_relator_length > 0) {
    report.ratio = static_cast<double>(report.max_piece_length) /
                   static_cast<double>(report.min_relator_length);
  }
  return report;
}

Rational Rational::parse(std::string_view text) {
  text = trim(text);
  auto number = [&](std::string_view s) {
    std::int64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
    }
    return v;
  };
  Rational r;
  const std::size_t slash = text.find('/');
  if (slash == std::string_view::npos) {
    r.num = number(text);
  } else {
    r.num = number(trim(text.substr(0, slash)));
    r.den = number(trim(text.substr(slash + 1)));
  }
  if (r.den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
  if (r.den < 0) {
    r.num = -r.num;
    r.den = -r.den;
  }
  const std::int64_t g = std::gcd(r.num, r.den);
  if (g > 1) {
    r.num /= g;
    r.den /= g;
  }
  return r;
}

std::string Rational::str() const {
  return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

MetricScReport check_metric_sc(const Presentation& p, Rational lambda) {
  if (lambda.num <= 0 || lambda.num >= lambda.den) {
    throw std::invalid_argument("lambda must lie strictly between 0 and 1, got " + lambda.str());
  }
  MetricScReport report;
  report.lambda = lambda;
  report.pieces = piece_report(p);
  const auto tagged = tagged_symmetrization(p);
  for_each_piece(tagged, [&](std::size_t i, std::size_t j, std::size_t lcp) {
    if (report.violation || lcp == 0) return;
    const auto shorter =
        static_cast<std::int64_t>(std::min(tagged[i].word.size(), tagged[j].word.size()));
    if (static_cast<std::int64_t>(lcp) * lambda.den >= lambda.num * shorter) {
      report.holds = false;
      report.violation = make_witness(tagged, i, j, lcp);
    }
  });
  return report;
}

// ---------------------------------------------------------------------------
// Dehn's algorithm
// ---------------------------------------------------------------------------

DehnReducer::DehnReducer(Presentation p) : presentation_(std::move(p)) {
  presentation_.validate();
  symmetrized_ = symmetrize(presentation_);
  verified_ = presentation_.is_free() || check_metric_sc(presentation_, {1, 6}).holds;
}

DehnResult DehnReducer::reduce(const Word& w) const {
  DehnResult result;
  result.heuristic = !verified_;
  Word current = free_reduce(w);
  for (;;) {
    const std::size_t n = current.size();
    bool found = false;
    std::size_t start = 0, length = 0, rest = 0, which = 0;
    for (std::size_t i = 0; i < n && !found; ++i) {
      for (std::size_t j = 0; j < symmetrized_.size(); ++j) {
        const Word& r = symmetrized_[j];
        std::size_t l = 0;
        while (l < r.size() && i + l < n && current[i + l] == r[l]) ++l;
        if (2 * l <= r.size()) continue;
        const std::size_t remaining = r.size() - l;
        if (!found || l > length || (l == length && remaining < rest)) {
          found = true;
          start = i;
          length = l;
          rest = remaining;
          which = j;
        }
      }
    }
    if (!found) break;
    const Word& r = symmetrized_[which];
    const Word replacement = r.subword(length, rest).inverse();
    current = free_reduce(current.subword(0, start) * replacement *
                          current.subword(start + length, n - start - length));
    ++result.steps;
  }
  result.trivial = current.empty();
  result.reduced = std::move(current);
  return result;
}

DehnResult dehn_reduce(const Word& w, const Presentation& p) { return DehnReducer(p).reduce(w); }

// ---------------------------------------------------------------------------
// Roots, conjugacy, commensurability
// ---------------------------------------------------------------------------

PrimitiveRoot primitive_root(const Word& w) {
  const auto [core, conj] = cyclic_reduction(w);
  if (core.empty()) throw std::invalid_argument("the trivial word has no primitive root");
  const std::size_t n = core.size();
  // Failure function of the core; its smallest period divides n iff the core
  // is a proper power.
  std::vector<std::size_t> fail(n + 1, 0);
  for (std::size_t i = 1, k = 0; i < n; ++i) {
    while (k > 0 && core[i] != core[k]) k = fail[k];
    if (core[i] == core[k]) ++k;
    fail[i + 1] = k;
  }
  const std::size_t period = n - fail[n];
  PrimitiveRoot out;
  if (n % period == 0) {
    out.exponent = static_cast<long>(n / period);
    out.root = conj * core.subword(0, period) * conj.inverse();
  } else {
    out.exponent = 1;
    out.root = conj * core * conj.inverse();
  }
  return out;
}

namespace {

// Positions i with core.rotate(i) == target.
std::vector<std::size_t> rotation_matches(const Word& core, const Word& target) {
  std::vector<std::size_t> out;
  if (core.size() != target.size()) return out;
  for (std::size_t i = 0; i < core.size(); ++i) {
    bool ok = true;
    for (std::size_t k = 0; k < core.size() && ok; ++k) {
      ok = core[(i + k) % core.size()] == target[k];
    }
    if (ok) out.push_back(i);
  }
  return out;
}

}  // namespace

bool is_conjugate_free(const Word& w1, const Word& w2) {
  const Word a = cyclic_reduce(w1), b = cyclic_reduce(w2);
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  return !rotation_matches(b, a).empty();
}

std::optional<Word> find_conjugator(const Word& g, const Word& h) {
  const auto [gc, c] = cyclic_reduction(g);
  const auto [hc, d] = cyclic_reduction(h);
  if (gc.empty() || hc.empty()) {
    if (gc.empty() && hc.empty()) return Word{};
    return std::nullopt;
  }
  const auto matches = rotation_matches(hc, gc);
  if (matches.empty()) return std::nullopt;

  // h core = p q and g core = q p, so g = (c p^-1 d^-1) h (c p^-1 d^-1)^-1.
  const Word p = hc.subword(0, matches.front());
  const Word u0 = free_reduce(c * p.inverse() * d.inverse());

  // Every conjugator is u0 z^j with z the root of h.
  const Word z = primitive_root(h).root;
  const long bound = 2 * static_cast<long>(u0.size()) + 1;
  Word best = u0;
  for (long j = -bound; j <= bound; ++j) {
    Word candidate = free_reduce(u0 * power(z, j));
    if (shortlex_less(candidate, best)) best = std::move(candidate);
  }
  return best;
}

Commensurability are_commensurable_free(const Word& g, const Word& h) {
  const Word fg = free_reduce(g), fh = free_reduce(h);
  if (fg.empty() || fh.empty()) {
    throw std::invalid_argument("commensurability needs nontrivial elements");
  }
  const PrimitiveRoot rg = primitive_root(fg), rh = primitive_root(fh);
  Commensurability out;
  for (long sign : {1L, -1L}) {
    const Word target = sign > 0 ? rh.root : free_reduce(rh.root.inverse());
    auto u = find_conjugator(rg.root, target);
    if (!u) continue;
    const long d = std::gcd(rg.exponent, rh.exponent);
    out.commensurable = true;
    out.n = rh.exponent / d;
    out.m = sign * rg.exponent / d;
    out.conjugator = std::move(*u);
    return out;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Cayley windows
// ---------------------------------------------------------------------------

double CayleyWindow::distance(Vertex x, Vertex y) const {
  if (!presentation().is_free()) return window_metric_(x, y);
  const Word& a = elements_[x];
  const Word& b = elements_[y];
  return static_cast<double>(a.size() + b.size() - 2 * common_prefix(a, b));
}

std::vector<std::string> CayleyWindow::labels() const {
  std::vector<std::string> out;
  out.reserve(elements_.size());
  for (const Word& w : elements_) {
    out.push_back(w.empty() ? "1" : to_string(w, presentation().generators));
  }
  return out;
}

std::optional<Vertex> CayleyWindow::find(const Word& w) const {
  if (presentation().is_free()) {
    auto it = index_.find(free_reduce(w));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  for (Vertex v = 0; v < elements_.size(); ++v) {
    if (reducer_.equal(w, elements_[v])) return v;
  }
  return std::nullopt;
}

PointMap CayleyWindow::left_action(const Word& g) const {
  PointMap out(elements_.size());
  for (Vertex x = 0; x < elements_.size(); ++x) out[x] = find(g * elements_[x]);
  return out;
}

std::vector<PointMap> CayleyWindow::generator_actions() const {
  std::vector<PointMap> out;
  for (std::size_t i = 0; i < presentation().generators.size(); ++i) {
    out.push_back(left_action(Word::generator(i)));
  }
  return out;
}

CayleyWindow cayley_ball(const Presentation& p, long radius) {
  if (radius < 0) throw std::invalid_argument("radius must be non-negative");
  CayleyWindow window(p);
  if (!window.reducer_.verified()) {
    throw std::invalid_argument("Cayley balls of non-free groups need a C'(1/6) presentation");
  }
  window.radius_ = static_cast<std::size_t>(radius);
  const std::size_t rank = p.generators.size();
  std::vector<Letter> alphabet;
  for (std::size_t i = 0; i < rank; ++i) {
    alphabet.push_back(static_cast<Letter>(i + 1));
    alphabet.push_back(-static_cast<Letter>(i + 1));
  }
  auto& elements = window.elements_;
  const bool free = p.is_free();

  // level_start[k] = index of the first element of length k.
  std::vector<std::size_t> level_start{0, 1};
  elements.push_back(Word{});
  if (free) window.index_.emplace(Word{}, 0);

  auto find_near = [&](const Word& w, std::size_t level) -> std::optional<Vertex> {
    if (free) {
      auto it = window.index_.find(free_reduce(w));
      if (it == window.index_.end()) return std::nullopt;
      return it->second;
    }
    const std::size_t lo = level_start[level >= 2 ? level - 2 : 0];
    const std::size_t hi = elements.size();
    for (Vertex v = lo; v < hi; ++v) {
      if (window.reducer_.equal(w, elements[v])) return v;
    }
    return std::nullopt;
  };

  for (std::size_t k = 0; k < window.radius_; ++k) {
    const std::size_t begin = level_start[k], end = level_start[k + 1];
    for (std::size_t v = begin; v < end; ++v) {
      for (Letter l : alphabet) {
        const Word& x = elements[v];
        if (!x.empty() && x[x.size() - 1] == -l) continue;
        Word candidate = x * Word({l});
        if (!free && find_near(candidate, k + 1)) continue;
        if (free) window.index_.emplace(candidate, elements.size());
        elements.push_back(std::move(candidate));
      }
    }
    level_start.push_back(elements.size());
    if (level_start.back() == end) break;
  }

  std::vector<std::size_t> level(elements.size());
  for (std::size_t k = 0; k + 1 < level_start.size(); ++k) {
    for (std::size_t v = level_start[k]; v < level_start[k + 1]; ++v) level[v] = k;
  }
  const std::size_t top = level_start.size() - 2;
  window.graph_ = WeightedGraph(elements.size());
  for (Vertex v = 0; v < elements.size(); ++v) {
    for (std::size_t i = 0; i < rank; ++i) {
      const Word target = elements[v] * Word::generator(i);
      std::optional<Vertex> w;
      if (free) {
        w = find_near(target, 0);
      } else {
        const std::size_t lo = level_start[level[v] == 0 ? 0 : level[v] - 1];
        const std::size_t hi = level_start[std::min(level[v] + 1, top) + 1];
        for (Vertex c = lo; c < hi && !w; ++c) {
          if (window.reducer_.equal(target, elements[c])) w = c;
        }
      }
      if (w) window.graph_.add_edge(v, *w, 1.0);
    }
  }
  window.graph_.set_labels(window.labels());
  if (!free) window.window_metric_ = path_metric(window.graph_);
  return window;
}

}  // namespace hypcone
