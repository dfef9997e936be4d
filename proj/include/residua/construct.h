#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "residua/chain.h"
#include "residua/dsl.h"

namespace residua {

/// Named constructions accepted as bare identifiers. Unknown names, and
/// known groups without a computable model, raise Unregistered.
bool is_registered(const std::string& name);
ExprPtr resolve_named(const std::string& name);

GroupPtr build_group(const Expr& e);

/// Finite groups of at most this order get their derived series; larger
/// ones the single step G > 1.
inline constexpr std::uint64_t kDerivedSeriesCap = 5000;

/// The chain used by `verify` and `tree` for an expression. Throws
/// Unregistered when no constructor applies.
ChainSchema build_chain(const Expr& e);

struct DepthInterval {
  Ordinal lower;
  Ordinal upper;
  std::optional<Ordinal> paper_claimed;
  std::string claim_source;
  std::vector<std::string> flags;
  bool discrepancy = false;

  nlohmann::json to_json() const;
};

/// Bounds on the residual-finiteness depth: lower from standing facts
/// (0 trivial, 1 finite, w infinite), upper from the constructed chain.
DepthInterval depth_interval(const Expr& e);

}  // namespace residua
