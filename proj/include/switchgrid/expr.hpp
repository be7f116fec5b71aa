#pragma once

#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>

namespace sg {

namespace detail {
struct ExprNode;
}

/// Scalar coefficient expression over the time variable `t` and the state
/// variables `x1..xk`. Grammar (see README for the full EBNF): decimal
/// literals, binary `+ - * / ^`, unary minus, and the function set
/// {exp, log, sqrt, abs, sin, cos, tanh, min, max} with min/max binary.
/// `^` binds tightest and is right-associative, then unary minus, then
/// `* /`, then `+ -` (left-associative).
///
/// Expr values are immutable after parse; eval is re-entrant and safe to
/// call from many threads.
class Expr {
 public:
  Expr() = default;

  /// Parses `text` against state dimension `k`. Throws Error{kParse} with a
  /// byte offset on syntax errors, unknown identifiers (including variables
  /// outside t, x1..xk) and function arity mismatches.
  static Expr parse(std::string_view text, int dim);

  static Expr constant(double value);

  /// IEEE-754 evaluation; total for finite inputs (NaN/inf propagate).
  double eval(double t, std::span<const double> x) const;

  std::set<std::string> free_vars() const;
  bool uses_time() const;

  int dim() const { return dim_; }
  bool empty() const { return root_ == nullptr; }
  explicit operator bool() const { return root_ != nullptr; }

  /// Pretty-printed form; reparsing it yields a structurally identical tree.
  std::string str() const;

  bool same_tree(const Expr& other) const;

 private:
  Expr(std::shared_ptr<const detail::ExprNode> root, int dim);

  std::shared_ptr<const detail::ExprNode> root_;
  int dim_ = 0;
};

}  // namespace sg
