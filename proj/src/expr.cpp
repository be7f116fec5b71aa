#include "switchgrid/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <utility>
#include <vector>

#include "switchgrid/error.hpp"
#include "detail/text.hpp"

namespace sg {

namespace detail {

struct ExprNode {
  enum Kind : unsigned char {
    kConst,
    kTime,
    kVar,
    kNeg,
    kAdd,
    kSub,
    kMul,
    kDiv,
    kPow,
    kCall,
  };
  enum Func : unsigned char { kExp, kLog, kSqrt, kAbs, kSin, kCos, kTanh, kMin, kMax };

  Kind kind;
  Func func = kExp;
  double value = 0.0;
  int var = 0;  // 0-based index of x variable
  std::shared_ptr<const ExprNode> a, b;
};

}  // namespace detail

namespace {

using Node = detail::ExprNode;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_leaf(Node::Kind kind) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Node::kConst;
  n->value = v;
  return n;
}

NodePtr make_var(int index) {
  auto n = std::make_shared<Node>();
  n->kind = Node::kVar;
  n->var = index;
  return n;
}

NodePtr make_unary(Node::Kind kind, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->a = std::move(a);
  return n;
}

NodePtr make_binary(Node::Kind kind, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = kind;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr make_call(Node::Func func, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = Node::kCall;
  n->func = func;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

struct FuncInfo {
  const char* name;
  Node::Func func;
  int arity;
};

constexpr FuncInfo kFuncTable[] = {
    {"exp", Node::kExp, 1},  {"log", Node::kLog, 1},  {"sqrt", Node::kSqrt, 1},
    {"abs", Node::kAbs, 1},  {"sin", Node::kSin, 1},  {"cos", Node::kCos, 1},
    {"tanh", Node::kTanh, 1}, {"min", Node::kMin, 2}, {"max", Node::kMax, 2},
};

const FuncInfo* find_func(std::string_view name) {
  for (const auto& f : kFuncTable)
    if (name == f.name) return &f;
  return nullptr;
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : s_(text), dim_(dim) {}

  NodePtr parse_all() {
    skip_ws();
    if (pos_ >= s_.size()) fail_at(pos_, "empty expression");
    NodePtr e = expression();
    skip_ws();
    if (pos_ < s_.size())
      fail_at(pos_, detail::cat("unexpected '", s_[pos_], "'"));
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int dim_;

  [[noreturn]] void fail_at(std::size_t pos, const std::string& what) {
    fail(ErrorCode::kParse, detail::cat(what, " at byte ", pos));
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  bool eat(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  // expression = term { ("+"|"-") term }
  NodePtr expression() {
    NodePtr e = term();
    for (;;) {
      char c = peek();
      if (c == '+' || c == '-') {
        ++pos_;
        NodePtr rhs = term();
        e = make_binary(c == '+' ? Node::kAdd : Node::kSub, std::move(e), std::move(rhs));
      } else {
        return e;
      }
    }
  }

  // term = unary { ("*"|"/") unary }
  NodePtr term() {
    NodePtr e = unary();
    for (;;) {
      char c = peek();
      if (c == '*' || c == '/') {
        ++pos_;
        NodePtr rhs = unary();
        e = make_binary(c == '*' ? Node::kMul : Node::kDiv, std::move(e), std::move(rhs));
      } else {
        return e;
      }
    }
  }

  // unary = "-" unary | power
  NodePtr unary() {
    if (eat('-')) return make_unary(Node::kNeg, unary());
    return power();
  }

  // power = primary [ "^" unary ]   (right-associative; exponent may be signed)
  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) {
      NodePtr exponent = unary();
      return make_binary(Node::kPow, std::move(base), std::move(exponent));
    }
    return base;
  }

  NodePtr primary() {
    char c = peek();
    if (c == '(') {
      ++pos_;
      NodePtr e = expression();
      if (!eat(')')) fail_at(pos_, "expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    if (c == '\0') fail_at(pos_, "unexpected end of expression");
    fail_at(pos_, detail::cat("unexpected '", c, "'"));
  }

  NodePtr number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (pos_ == start || (pos_ == start + 1 && s_[start] == '.'))
      fail_at(start, "malformed number");
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t mark = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        pos_ = mark;  // not an exponent; leave 'e' for the caller to reject
      } else {
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    std::string token(s_.substr(start, pos_ - start));
    return make_const(std::strtod(token.c_str(), nullptr));
  }

  NodePtr identifier() {
    std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_'))
      ++pos_;
    std::string_view name = s_.substr(start, pos_ - start);

    if (name == "t") return make_leaf(Node::kTime);

    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
      if (digits && name[1] != '0') {
        long index = std::strtol(std::string(name.substr(1)).c_str(), nullptr, 10);
        if (index < 1 || index > dim_)
          fail_at(start, detail::cat("unknown identifier '", std::string(name),
                                     "' (state dimension is ", dim_, ")"));
        return make_var(static_cast<int>(index - 1));
      }
    }

    const FuncInfo* func = find_func(name);
    if (func == nullptr)
      fail_at(start, detail::cat("unknown identifier '", std::string(name), "'"));

    if (!eat('(')) fail_at(pos_, detail::cat("expected '(' after '", std::string(name), "'"));
    std::vector<NodePtr> args;
    args.push_back(expression());
    while (eat(',')) args.push_back(expression());
    if (!eat(')')) fail_at(pos_, "expected ')'");
    if (static_cast<int>(args.size()) != func->arity)
      fail_at(start, detail::cat("function '", std::string(name), "' expects ", func->arity,
                                 func->arity == 1 ? " argument, got " : " arguments, got ",
                                 args.size()));
    return make_call(func->func, std::move(args[0]),
                     func->arity == 2 ? std::move(args[1]) : nullptr);
  }
};

double eval_node(const Node* n, double t, std::span<const double> x) {
  switch (n->kind) {
    case Node::kConst:
      return n->value;
    case Node::kTime:
      return t;
    case Node::kVar:
      return x[static_cast<std::size_t>(n->var)];
    case Node::kNeg:
      return -eval_node(n->a.get(), t, x);
    case Node::kAdd:
      return eval_node(n->a.get(), t, x) + eval_node(n->b.get(), t, x);
    case Node::kSub:
      return eval_node(n->a.get(), t, x) - eval_node(n->b.get(), t, x);
    case Node::kMul:
      return eval_node(n->a.get(), t, x) * eval_node(n->b.get(), t, x);
    case Node::kDiv:
      return eval_node(n->a.get(), t, x) / eval_node(n->b.get(), t, x);
    case Node::kPow:
      return std::pow(eval_node(n->a.get(), t, x), eval_node(n->b.get(), t, x));
    case Node::kCall: {
      double a = eval_node(n->a.get(), t, x);
      switch (n->func) {
        case Node::kExp:
          return std::exp(a);
        case Node::kLog:
          return std::log(a);
        case Node::kSqrt:
          return std::sqrt(a);
        case Node::kAbs:
          return std::fabs(a);
        case Node::kSin:
          return std::sin(a);
        case Node::kCos:
          return std::cos(a);
        case Node::kTanh:
          return std::tanh(a);
        case Node::kMin:
        case Node::kMax: {
          double b = eval_node(n->b.get(), t, x);
          if (std::isnan(a) || std::isnan(b))
            return std::numeric_limits<double>::quiet_NaN();
          return n->func == Node::kMin ? std::min(a, b) : std::max(a, b);
        }
      }
      break;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void collect_vars(const Node* n, std::set<std::string>& out) {
  if (n == nullptr) return;
  if (n->kind == Node::kTime) out.insert("t");
  if (n->kind == Node::kVar) out.insert(detail::cat("x", n->var + 1));
  collect_vars(n->a.get(), out);
  collect_vars(n->b.get(), out);
}

bool node_uses_time(const Node* n) {
  if (n == nullptr) return false;
  if (n->kind == Node::kTime) return true;
  return node_uses_time(n->a.get()) || node_uses_time(n->b.get());
}

// Precedence levels used by the printer: 1 add/sub, 2 mul/div, 3 unary
// minus, 4 pow, 5 atoms. A child is parenthesized when its level is below
// what its position requires, so the printed form reparses to the same tree.
int node_level(const Node* n) {
  switch (n->kind) {
    case Node::kAdd:
    case Node::kSub:
      return 1;
    case Node::kMul:
    case Node::kDiv:
      return 2;
    case Node::kNeg:
      return 3;
    case Node::kPow:
      return 4;
    default:
      return 5;
  }
}

void print_node(const Node* n, int min_level, std::string& out) {
  bool parens = node_level(n) < min_level;
  if (parens) out += '(';
  switch (n->kind) {
    case Node::kConst:
      out += detail::double_to_string(n->value);
      break;
    case Node::kTime:
      out += 't';
      break;
    case Node::kVar:
      out += detail::cat("x", n->var + 1);
      break;
    case Node::kNeg:
      out += '-';
      print_node(n->a.get(), 3, out);
      break;
    case Node::kAdd:
    case Node::kSub:
      print_node(n->a.get(), 1, out);
      out += n->kind == Node::kAdd ? " + " : " - ";
      print_node(n->b.get(), 2, out);
      break;
    case Node::kMul:
    case Node::kDiv:
      print_node(n->a.get(), 2, out);
      out += n->kind == Node::kMul ? "*" : "/";
      print_node(n->b.get(), 3, out);
      break;
    case Node::kPow:
      print_node(n->a.get(), 5, out);
      out += '^';
      print_node(n->b.get(), 3, out);
      break;
    case Node::kCall: {
      static const char* names[] = {"exp", "log", "sqrt", "abs", "sin", "cos", "tanh", "min", "max"};
      out += names[n->func];
      out += '(';
      print_node(n->a.get(), 0, out);
      if (n->b) {
        out += ", ";
        print_node(n->b.get(), 0, out);
      }
      out += ')';
      break;
    }
  }
  if (parens) out += ')';
}

bool nodes_equal(const Node* a, const Node* b) {
  if (a == b) return true;
  if (a == nullptr || b == nullptr) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Node::kConst:
      return a->value == b->value;
    case Node::kTime:
      return true;
    case Node::kVar:
      return a->var == b->var;
    case Node::kCall:
      if (a->func != b->func) return false;
      [[fallthrough]];
    default:
      return nodes_equal(a->a.get(), b->a.get()) && nodes_equal(a->b.get(), b->b.get());
  }
}

}  // namespace

Expr::Expr(std::shared_ptr<const detail::ExprNode> root, int dim)
    : root_(std::move(root)), dim_(dim) {}

Expr Expr::parse(std::string_view text, int dim) {
  if (dim < 0) fail(ErrorCode::kInvalidArgument, "expression dimension must be >= 0");
  Parser parser(text, dim);
  return Expr(parser.parse_all(), dim);
}

Expr Expr::constant(double value) {
  if (std::isnan(value)) fail(ErrorCode::kInvalidArgument, "constant expression must not be NaN");
  if (value < 0) return Expr(make_unary(Node::kNeg, make_const(-value)), 0);
  return Expr(make_const(value), 0);
}

double Expr::eval(double t, std::span<const double> x) const {
  if (root_ == nullptr) fail(ErrorCode::kInvalidArgument, "eval on empty expression");
  if (static_cast<int>(x.size()) < dim_)
    fail(ErrorCode::kInvalidArgument,
         detail::cat("eval: state vector has ", x.size(), " entries, expression needs ", dim_));
  return eval_node(root_.get(), t, x);
}

std::set<std::string> Expr::free_vars() const {
  std::set<std::string> out;
  collect_vars(root_.get(), out);
  return out;
}

bool Expr::uses_time() const { return node_uses_time(root_.get()); }

std::string Expr::str() const {
  if (root_ == nullptr) return "";
  std::string out;
  print_node(root_.get(), 0, out);
  return out;
}

bool Expr::same_tree(const Expr& other) const {
  return nodes_equal(root_.get(), other.root_.get());
}

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kValidation:
      return "validation";
    case ErrorCode::kCfl:
      return "cfl";
    case ErrorCode::kNumeric:
      return "numeric";
    case ErrorCode::kLimit:
      return "limit";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kInternal:
      return "internal";
  }
  return "unknown";
}

}  // namespace sg
