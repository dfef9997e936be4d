#pragma once

// Group expressions:
//   expr   := "1" | "Z" | "Dinf" | "C(" int ")" | "S(" int ")" | "A(" int ")"
//           | "perm(" int ";" gens ")" | "power(" expr "," points ")"
//           | "wreath(" expr "," expr ")" | "tower(" expr "," int ")"
//           | "prod(" expr {"," expr} ")" | name
//   gens   := gen {"," gen};  gen := "()" | cycle {cycle};  cycle := "(" int {int} ")"
//   points := "N" | int

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace residua {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Trivial, Cyclic, Symmetric, Alternating, Perm, Int, Dinf, Product, Power, Wreath, Tower, Named };
  using Cycle = std::vector<std::uint32_t>;
  using Generator = std::vector<Cycle>;

  Kind kind = Kind::Trivial;
  std::uint64_t n = 0;                  // Cyclic/Symmetric/Alternating order, Perm degree, Tower height
  std::vector<Generator> generators;    // Perm
  std::optional<std::uint64_t> points;  // Power: nullopt is N
  std::vector<ExprPtr> args;            // Product, Power, Wreath, Tower
  std::string name;                     // Named

  friend bool operator==(const Expr& a, const Expr& b);
};

namespace expr {
ExprPtr trivial();
ExprPtr cyclic(std::uint64_t n);
ExprPtr symmetric(std::uint64_t n);
ExprPtr alternating(std::uint64_t n);
ExprPtr perm(std::uint64_t degree, std::vector<Expr::Generator> gens);
ExprPtr integers();
ExprPtr dinf();
ExprPtr product(std::vector<ExprPtr> factors);
ExprPtr power(ExprPtr base, std::optional<std::uint64_t> points);
ExprPtr wreath(ExprPtr base, ExprPtr top);
ExprPtr tower(ExprPtr base, std::uint64_t n);
ExprPtr named(std::string name);
}  // namespace expr

/// Limits enforced by the parser.
inline constexpr std::uint64_t kMaxOrderArg = std::uint64_t{1} << 31;  // C(n)
inline constexpr std::uint64_t kMaxDegree = 64;                        // S, A, perm
inline constexpr std::uint64_t kMaxTower = 64;
inline constexpr std::uint64_t kMaxPoints = 4096;
inline constexpr std::size_t kMaxNesting = 200;

/// Throws ParseError with the byte offset and the expected tokens.
ExprPtr parse_expr(std::string_view text);
std::string print_expr(const Expr& e);

nlohmann::json to_json(const Expr& e);

}  // namespace residua
