#include "residua/dsl.h"

#include <cctype>
#include <set>

#include "residua/error.h"

namespace residua {

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.n != b.n || a.generators != b.generators || a.points != b.points || a.name != b.name ||
      a.args.size() != b.args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!(*a.args[i] == *b.args[i])) return false;
  return true;
}

namespace expr {

namespace {
ExprPtr make(Expr::Kind kind, std::uint64_t n = 0, std::vector<ExprPtr> args = {}) {
  Expr e;
  e.kind = kind;
  e.n = n;
  e.args = std::move(args);
  return std::make_shared<const Expr>(std::move(e));
}
}  // namespace

ExprPtr trivial() { return make(Expr::Kind::Trivial); }
ExprPtr cyclic(std::uint64_t n) { return make(Expr::Kind::Cyclic, n); }
ExprPtr symmetric(std::uint64_t n) { return make(Expr::Kind::Symmetric, n); }
ExprPtr alternating(std::uint64_t n) { return make(Expr::Kind::Alternating, n); }
ExprPtr perm(std::uint64_t degree, std::vector<Expr::Generator> gens) {
  Expr e;
  e.kind = Expr::Kind::Perm;
  e.n = degree;
  e.generators = std::move(gens);
  return std::make_shared<const Expr>(std::move(e));
}
ExprPtr integers() { return make(Expr::Kind::Int); }
ExprPtr dinf() { return make(Expr::Kind::Dinf); }
ExprPtr product(std::vector<ExprPtr> factors) { return make(Expr::Kind::Product, 0, std::move(factors)); }
ExprPtr power(ExprPtr base, std::optional<std::uint64_t> points) {
  Expr e;
  e.kind = Expr::Kind::Power;
  e.points = points;
  e.args = {std::move(base)};
  return std::make_shared<const Expr>(std::move(e));
}
ExprPtr wreath(ExprPtr base, ExprPtr top) { return make(Expr::Kind::Wreath, 0, {std::move(base), std::move(top)}); }
ExprPtr tower(ExprPtr base, std::uint64_t n) { return make(Expr::Kind::Tower, n, {std::move(base)}); }
ExprPtr named(std::string name) {
  Expr e;
  e.kind = Expr::Kind::Named;
  e.name = std::move(name);
  return std::make_shared<const Expr>(std::move(e));
}

}  // namespace expr

// ---------------------------------------------------------------- parser

namespace {

const std::set<std::string> kExprStart = {"1", "Z", "Dinf", "C(", "S(", "A(", "perm(", "power(", "wreath(", "tower(", "prod(", "name"};

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  ExprPtr run() {
    ExprPtr e = expr(0);
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input", {"end of input"});
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg, std::set<std::string> expected, std::optional<std::size_t> at = std::nullopt) const {
    throw ParseError(at.value_or(pos_), msg, std::move(expected));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(pos_ < s_.size() ? std::string("unexpected '") + s_[pos_] + "'" : "unexpected end of input", {std::string(1, c)});
    ++pos_;
  }

  std::string ident() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  // Decimal integer in [lo, hi]; range errors point at the integer.
  std::uint64_t integer(std::uint64_t lo, std::uint64_t hi, const char* what) {
    skip();
    const std::size_t start = pos_;
    if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail(std::string("expected ") + what, {"integer"});
    std::uint64_t v = 0;
    bool overflow = false;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      const std::uint64_t d = static_cast<std::uint64_t>(s_[pos_] - '0');
      if (v > (UINT64_MAX - d) / 10) overflow = true;
      else v = v * 10 + d;
      ++pos_;
    }
    if (overflow || v < lo || v > hi)
      fail(std::string(what) + " must be in " + std::to_string(lo) + ".." + std::to_string(hi), {"integer in range"}, start);
    return v;
  }

  Expr::Generator generator(std::uint64_t degree) {
    Expr::Generator gen;
    std::set<std::uint32_t> used;
    skip();
    const std::size_t start = pos_;
    expect('(');
    if (peek(')')) {
      ++pos_;
      return gen;
    }
    pos_ = start;
    while (peek('(')) {
      ++pos_;
      Expr::Cycle cyc;
      do {
        skip();
        const std::size_t at = pos_;
        auto p = static_cast<std::uint32_t>(integer(0, degree - 1, "point"));
        if (!used.insert(p).second) fail("point " + std::to_string(p) + " repeats within a generator", {"distinct point"}, at);
        cyc.push_back(p);
      } while (!peek(')'));
      ++pos_;
      gen.push_back(std::move(cyc));
    }
    return gen;
  }

  ExprPtr expr(std::size_t depth) {
    if (depth > kMaxNesting) fail("expression nested too deeply", kExprStart);
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input", kExprStart);
    const std::size_t start = pos_;
    const char c = s_[pos_];
    if (c == '1') {
      ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("only the trivial group is written as a number", kExprStart, start);
      return expr::trivial();
    }
    if (!std::isalpha(static_cast<unsigned char>(c)) && c != '_')
      fail(std::string("unexpected '") + c + "'", kExprStart);
    const std::string id = ident();
    const bool call = peek('(');
    if (!call) {
      if (id == "Z") return expr::integers();
      if (id == "Dinf") return expr::dinf();
      if (id == "C" || id == "S" || id == "A" || id == "perm" || id == "power" || id == "wreath" || id == "tower" || id == "prod")
        fail("'" + id + "' needs arguments", {"("});
      return expr::named(id);
    }
    ++pos_;
    ExprPtr out;
    if (id == "C") {
      out = expr::cyclic(integer(1, kMaxOrderArg, "order"));
    } else if (id == "S") {
      out = expr::symmetric(integer(1, kMaxDegree, "degree"));
    } else if (id == "A") {
      out = expr::alternating(integer(1, kMaxDegree, "degree"));
    } else if (id == "perm") {
      const std::uint64_t degree = integer(1, kMaxDegree, "degree");
      expect(';');
      std::vector<Expr::Generator> gens{generator(degree)};
      while (peek(',')) {
        ++pos_;
        gens.push_back(generator(degree));
      }
      out = expr::perm(degree, std::move(gens));
    } else if (id == "power") {
      ExprPtr base = expr(depth + 1);
      expect(',');
      skip();
      std::optional<std::uint64_t> pts;
      if (peek('N')) {
        ++pos_;
      } else if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        pts = integer(1, kMaxPoints, "point count");
      } else {
        fail("expected a point set", {"N", "integer"});
      }
      out = expr::power(std::move(base), pts);
    } else if (id == "wreath") {
      ExprPtr base = expr(depth + 1);
      expect(',');
      out = expr::wreath(std::move(base), expr(depth + 1));
    } else if (id == "tower") {
      ExprPtr base = expr(depth + 1);
      expect(',');
      out = expr::tower(std::move(base), integer(1, kMaxTower, "tower height"));
    } else if (id == "prod") {
      std::vector<ExprPtr> factors{expr(depth + 1)};
      while (peek(',')) {
        ++pos_;
        factors.push_back(expr(depth + 1));
      }
      out = expr::product(std::move(factors));
    } else {
      fail("unknown constructor '" + id + "'", {"C", "S", "A", "perm", "power", "wreath", "tower", "prod"}, start);
    }
    expect(')');
    return out;
  }
};

std::string print_gen(const Expr::Generator& g) {
  if (g.empty()) return "()";
  std::string out;
  for (const auto& c : g) {
    out += "(";
    for (std::size_t i = 0; i < c.size(); ++i) out += (i ? " " : "") + std::to_string(c[i]);
    out += ")";
  }
  return out;
}

}  // namespace

ExprPtr parse_expr(std::string_view text) { return Parser(text).run(); }

std::string print_expr(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::Trivial: return "1";
    case K::Int: return "Z";
    case K::Dinf: return "Dinf";
    case K::Cyclic: return "C(" + std::to_string(e.n) + ")";
    case K::Symmetric: return "S(" + std::to_string(e.n) + ")";
    case K::Alternating: return "A(" + std::to_string(e.n) + ")";
    case K::Perm: {
      std::string out = "perm(" + std::to_string(e.n) + ";";
      for (std::size_t i = 0; i < e.generators.size(); ++i) out += (i ? ", " : " ") + print_gen(e.generators[i]);
      return out + ")";
    }
    case K::Product: {
      std::string out = "prod(";
      for (std::size_t i = 0; i < e.args.size(); ++i) out += (i ? ", " : "") + print_expr(*e.args[i]);
      return out + ")";
    }
    case K::Power: return "power(" + print_expr(*e.args[0]) + ", " + (e.points ? std::to_string(*e.points) : "N") + ")";
    case K::Wreath: return "wreath(" + print_expr(*e.args[0]) + ", " + print_expr(*e.args[1]) + ")";
    case K::Tower: return "tower(" + print_expr(*e.args[0]) + ", " + std::to_string(e.n) + ")";
    case K::Named: return e.name;
  }
  return "";
}

nlohmann::json to_json(const Expr& e) {
  using K = Expr::Kind;
  static const char* names[] = {"trivial", "cyclic", "symmetric", "alternating", "perm", "int", "dinf",
                                "product", "power", "wreath", "tower", "named"};
  nlohmann::json j{{"kind", names[static_cast<int>(e.kind)]}};
  switch (e.kind) {
    case K::Cyclic:
    case K::Symmetric:
    case K::Alternating: j["n"] = e.n; break;
    case K::Perm: j["degree"] = e.n; j["generators"] = e.generators; break;
    case K::Power: j["points"] = e.points ? nlohmann::json(*e.points) : nlohmann::json("N"); break;
    case K::Tower: j["n"] = e.n; break;
    case K::Named: j["name"] = e.name; break;
    default: break;
  }
  if (!e.args.empty()) {
    j["args"] = nlohmann::json::array();
    for (const auto& a : e.args) j["args"].push_back(to_json(*a));
  }
  return j;
}

}  // namespace residua
