#include "densitylab/parse.hpp"

#include <cctype>

#include "densitylab/error.hpp"

namespace densitylab {

namespace {

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(text) {}

  void finish() {
    skip();
    if (pos_ != text_.size()) fail("end of input");
  }

  [[noreturn]] void fail(const std::string& expected) const {
    throw ParseError(pos_, expected, text_);
  }

  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < text_.size() && text_[pos_] == c;
  }

  bool accept(char c) {
    if (!peek(c)) return false;
    ++pos_;
    return true;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("'") + c + "'");
  }

  std::string word() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalpha(static_cast<unsigned char>(text_[pos_])))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  Integer integer() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("integer");
    return Integer(text_.substr(start, pos_ - start));
  }

  std::uint64_t small(const char* what) {
    std::size_t at = pos_;
    Integer v = integer();
    auto u = to_u64(v);
    if (!u) {
      pos_ = at;
      fail(std::string(what) + " below 2^64");
    }
    return *u;
  }

  Rational weight() {
    skip();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '/' ||
            text_[pos_] == '.')) {
      ++pos_;
    }
    auto w = parse_rational(text_.substr(start, pos_ - start));
    if (!w) {
      pos_ = start;
      fail("rational weight");
    }
    return *w;
  }

  std::vector<Integer> integer_list(char close) {
    std::vector<Integer> out;
    if (peek(close)) return out;
    do out.push_back(integer());
    while (accept(','));
    return out;
  }

  SymbolicSet set() {
    std::size_t at = (skip(), pos_);
    const std::string w = word();
    if (w == "empty") return SymbolicSet::empty();
    if (w == "full") return SymbolicSet::full();
    if (w == "finite") {
      expect('(');
      auto xs = integer_list(')');
      expect(')');
      return SymbolicSet::finite(std::move(xs));
    }
    if (w == "periodic") {
      expect('(');
      auto m = small("modulus");
      expect(';');
      std::vector<std::uint64_t> rs;
      if (!peek(')')) {
        do rs.push_back(small("residue"));
        while (accept(','));
      }
      expect(')');
      return SymbolicSet::periodic(m, std::move(rs));
    }
    if (w == "blocks") {
      expect('(');
      if (!peek('[')) {
        if (word() != "dexp") fail("'dexp' or '['");
        expect(')');
        return SymbolicSet::blocks(BlockSource::double_exponential());
      }
      std::vector<Interval> ivs;
      do {
        expect('[');
        Interval iv;
        iv.lo = integer();
        expect(',');
        iv.hi = integer();
        expect(')');
        ivs.push_back(std::move(iv));
      } while (accept(','));
      expect(')');
      return SymbolicSet::blocks(BlockSource::explicit_blocks(std::move(ivs)));
    }
    if (w == "scale") {
      expect('(');
      auto t = small("scale factor");
      expect(',');
      auto inner = set();
      expect(')');
      return scale(inner, t);
    }
    if (w == "union" || w == "inter" || w == "diff") {
      expect('(');
      auto a = set();
      expect(',');
      auto b = set();
      expect(')');
      if (w == "union") return SymbolicSet::union_of(a, b);
      if (w == "inter") return SymbolicSet::intersection_of(a, b);
      return SymbolicSet::difference_of(a, b);
    }
    if (w == "compl") {
      expect('(');
      auto a = set();
      expect(')');
      return SymbolicSet::complement_of(a);
    }
    pos_ = at;
    fail("set expression (empty, full, finite, periodic, blocks, scale, union, inter, diff, compl)");
  }

  IndexSequence sequence() {
    std::size_t at = (skip(), pos_);
    const std::string w = word();
    if (w == "all") {
      expect('(');
      auto n = integer();
      expect(')');
      return IndexSequence::all(n);
    }
    if (w == "explicit") {
      expect('(');
      auto xs = integer_list(')');
      expect(')');
      return IndexSequence::explicit_points(std::move(xs));
    }
    if (w == "dexp") {
      expect('(');
      auto k = small("term count");
      expect(')');
      return IndexSequence::double_exponential(k);
    }
    if (w == "doubled") {
      expect('(');
      auto inner = sequence();
      expect(')');
      return IndexSequence::doubled(std::move(inner));
    }
    if (w == "geom") {
      expect('(');
      auto first = integer();
      expect(',');
      auto ratio = integer();
      expect(',');
      auto k = small("term count");
      expect(')');
      return IndexSequence::geometric(first, ratio, k);
    }
    pos_ = at;
    fail("sequence expression (all, explicit, dexp, doubled, geom)");
  }

  PermutationRule permutation() {
    std::size_t at = (skip(), pos_);
    const std::string w = word();
    if (w == "id") return PermutationRule::identity();
    if (w == "qswap") return PermutationRule::quarter_block_swap();
    if (w == "table") {
      expect('(');
      std::vector<std::vector<Integer>> cycles;
      while (accept('(')) {
        std::vector<Integer> cycle;
        while (!peek(')')) {
          cycle.push_back(integer());
          accept(',');
        }
        expect(')');
        cycles.push_back(std::move(cycle));
      }
      expect(')');
      return PermutationRule::from_cycles(cycles);
    }
    if (w == "pair") {
      expect('(');
      auto a = set();
      expect(',');
      auto b = set();
      expect(')');
      return pairing_permutation(a, b);
    }
    if (w == "restrict") {
      expect('(');
      auto p = permutation();
      expect(',');
      auto f = set();
      expect(')');
      return restrict_pairing(p, f);
    }
    if (w == "comp") {
      expect('(');
      auto p = permutation();
      expect(',');
      auto q = permutation();
      expect(')');
      return PermutationRule::compose(std::move(p), std::move(q));
    }
    if (w == "inv") {
      expect('(');
      auto p = permutation();
      expect(')');
      return PermutationRule::inverse(std::move(p));
    }
    pos_ = at;
    fail("permutation expression (id, table, pair, qswap, restrict, comp, inv)");
  }

  MeasureRule measure(bool allow_mixture = true) {
    std::size_t at = (skip(), pos_);
    const std::string w = word();
    if (w == "sublim" || w == "combo") {
      expect('(');
      auto seq = sequence();
      expect(')');
      return w == "sublim" ? MeasureRule::subsequence_limit(std::move(seq))
                           : MeasureRule::blumlinger_combo(std::move(seq));
    }
    if (w == "mix" && allow_mixture) {
      expect('(');
      std::vector<std::pair<Rational, MeasureRule>> terms;
      do {
        auto wt = weight();
        expect(':');
        terms.emplace_back(std::move(wt), measure(false));
      } while (accept(','));
      expect(')');
      return MeasureRule::mixture(std::move(terms));
    }
    pos_ = at;
    fail(allow_mixture ? "measure expression (sublim, combo, mix)" : "primitive measure (sublim, combo)");
  }

 private:
  const std::string& text_;
  std::size_t pos_ = 0;
};

template <typename F>
auto parse_whole(const std::string& text, F&& f) {
  Parser p(text);
  auto out = f(p);
  p.finish();
  return out;
}

}  // namespace

SymbolicSet parse_set(const std::string& text) {
  return parse_whole(text, [](Parser& p) { return p.set(); });
}

IndexSequence parse_sequence(const std::string& text) {
  return parse_whole(text, [](Parser& p) { return p.sequence(); });
}

PermutationRule parse_permutation(const std::string& text) {
  return parse_whole(text, [](Parser& p) { return p.permutation(); });
}

MeasureRule parse_measure(const std::string& text) {
  return parse_whole(text, [](Parser& p) { return p.measure(); });
}

}  // namespace densitylab
