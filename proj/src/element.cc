#include "residua/element.h"

#include "residua/error.h"

namespace residua {

namespace {

std::strong_ordering cmp_big(const BigInt& a, const BigInt& b) {
  if (a == b) return std::strong_ordering::equal;
  return a < b ? std::strong_ordering::less : std::strong_ordering::greater;
}

struct Comparer {
  std::strong_ordering operator()(const Perm& a, const Perm& b) const {
    if (auto c = a.image.size() <=> b.image.size(); c != 0) return c;
    return a.image <=> b.image;
  }
  std::strong_ordering operator()(const Integer& a, const Integer& b) const { return cmp_big(a.value, b.value); }
  std::strong_ordering operator()(const Modular& a, const Modular& b) const {
    if (auto c = a.modulus <=> b.modulus; c != 0) return c;
    return a.residue <=> b.residue;
  }
  std::strong_ordering operator()(const Dihedral& a, const Dihedral& b) const {
    if (auto c = a.flip <=> b.flip; c != 0) return c;
    return cmp_big(a.translation, b.translation);
  }
  std::strong_ordering operator()(const Tuple& a, const Tuple& b) const { return a.parts <=> b.parts; }
  std::strong_ordering operator()(const FinSupport& a, const FinSupport& b) const {
    auto ia = a.values.begin();
    auto ib = b.values.begin();
    for (; ia != a.values.end() && ib != b.values.end(); ++ia, ++ib) {
      if (auto c = ia->first <=> ib->first; c != 0) return c;
      if (auto c = ia->second <=> ib->second; c != 0) return c;
    }
    return a.values.size() <=> b.values.size();
  }
  std::strong_ordering operator()(const WreathPair& a, const WreathPair& b) const {
    if (auto c = a.fs <=> b.fs; c != 0) return c;
    return a.top <=> b.top;
  }
  template <class A, class B>
  std::strong_ordering operator()(const A&, const B&) const {
    return std::strong_ordering::equal;  // unreachable: indices compared first
  }
};

}  // namespace

Element::Element() : rep_(std::make_shared<const Rep>(Rep{Tuple{}})) {}

Element::Element(Rep rep) : rep_(std::make_shared<const Rep>(std::move(rep))) {}

bool operator==(const Element& a, const Element& b) {
  if (a.rep_ == b.rep_) return true;
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Element& a, const Element& b) {
  if (a.rep_ == b.rep_) return std::strong_ordering::equal;
  if (auto c = a.rep_->v.index() <=> b.rep_->v.index(); c != 0) return c;
  return std::visit(Comparer{}, a.rep_->v, b.rep_->v);
}

namespace {

std::string perm_text(const Perm& p) {
  std::string out;
  std::vector<bool> seen(p.image.size(), false);
  for (std::uint32_t i = 0; i < p.image.size(); ++i) {
    if (seen[i] || p.image[i] == i) continue;
    out += "(";
    std::uint32_t j = i;
    bool first = true;
    while (!seen[j]) {
      seen[j] = true;
      if (!first) out += " ";
      out += std::to_string(j);
      first = false;
      j = p.image[j];
    }
    out += ")";
  }
  return out.empty() ? "()" : out;
}

}  // namespace

std::string to_text(const Element& e) {
  struct V {
    std::string operator()(const Perm& p) const { return perm_text(p); }
    std::string operator()(const Integer& i) const { return i.value.str(); }
    std::string operator()(const Modular& m) const { return std::to_string(m.residue); }
    std::string operator()(const Dihedral& d) const {
      return "d(" + d.translation.str() + "," + (d.flip ? "1" : "0") + ")";
    }
    std::string operator()(const Tuple& t) const {
      std::string out = "<";
      for (std::size_t i = 0; i < t.parts.size(); ++i) out += (i ? ", " : "") + to_text(t.parts[i]);
      return out + ">";
    }
    std::string operator()(const FinSupport& f) const {
      std::string out = "{";
      bool first = true;
      for (const auto& [p, v] : f.values) {
        out += (first ? "" : ", ") + to_text(p) + ":" + to_text(v);
        first = false;
      }
      return out + "}";
    }
    std::string operator()(const WreathPair& w) const { return "[" + to_text(w.fs) + "; " + to_text(w.top) + "]"; }
  };
  return std::visit(V{}, e.rep().v);
}

nlohmann::json to_json(const Element& e) {
  struct V {
    nlohmann::json operator()(const Perm& p) const { return p.image; }
    nlohmann::json operator()(const Integer& i) const { return bigint_json(i.value); }
    nlohmann::json operator()(const Modular& m) const { return m.residue; }
    nlohmann::json operator()(const Dihedral& d) const {
      return {{"t", bigint_json(d.translation)}, {"flip", d.flip ? 1 : 0}};
    }
    nlohmann::json operator()(const Tuple& t) const {
      nlohmann::json parts = nlohmann::json::array();
      for (const auto& p : t.parts) parts.push_back(to_json(p));
      return {{"tuple", parts}};
    }
    nlohmann::json operator()(const FinSupport& f) const { return {{"fs", values(f)}}; }
    nlohmann::json operator()(const WreathPair& w) const {
      const auto* f = get_if<FinSupport>(w.fs);
      return {{"fs", f ? values(*f) : nlohmann::json::object()}, {"top", to_json(w.top)}};
    }
    static nlohmann::json values(const FinSupport& f) {
      nlohmann::json out = nlohmann::json::object();
      for (const auto& [p, v] : f.values) out[to_text(p)] = to_json(v);
      return out;
    }
  };
  return std::visit(V{}, e.rep().v);
}

Element perm_from_cycles(std::uint32_t degree, const std::vector<std::vector<std::uint32_t>>& cycles) {
  std::vector<std::uint32_t> image(degree);
  for (std::uint32_t i = 0; i < degree; ++i) image[i] = i;
  std::vector<bool> used(degree, false);
  for (const auto& cycle : cycles) {
    for (std::size_t k = 0; k < cycle.size(); ++k) {
      std::uint32_t a = cycle[k];
      if (a >= degree) throw PreconditionError("cycle point " + std::to_string(a) + " out of range for degree " + std::to_string(degree));
      if (used[a]) throw PreconditionError("point " + std::to_string(a) + " repeated in cycles");
      used[a] = true;
      image[a] = cycle[(k + 1) % cycle.size()];
    }
  }
  return make_perm_element(std::move(image));
}

}  // namespace residua
