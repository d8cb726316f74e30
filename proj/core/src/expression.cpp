#include "mpass/expression.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "mpass/errors.hpp"

namespace mpass {
namespace {

using Node = Expression::Node;
using NodePtr = Expression::NodePtr;
using Op = Expression::Op;

NodePtr make_node(Op op, std::vector<NodePtr> args = {}, double value = 0.0, int index = 0) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->value = value;
  node->index = index;
  node->args = std::move(args);
  return node;
}

class Parser {
 public:
  Parser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  NodePtr parse() {
    NodePtr result = expr();
    skip_space();
    if (pos_ != text_.size()) {
      throw ParseError(std::string("unexpected '") + text_[pos_] + "'", pos_);
    }
    return result;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) throw ParseError(std::string("expected '") + c + "', got end of input", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(Op::Add, {lhs, term()});
      } else if (accept('-')) {
        lhs = make_node(Op::Sub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(Op::Mul, {lhs, factor()});
      } else if (accept('/')) {
        lhs = make_node(Op::Div, {lhs, factor()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    if (accept('-')) return make_node(Op::Neg, {factor()});
    NodePtr b = base();
    if (accept('^')) {
      skip_space();
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      if (start == pos_) throw ParseError("expected integer exponent", start);
      const std::string digits(text_.substr(start, pos_ - start));
      if (digits.size() > 6) throw ParseError("exponent too large", start);
      b = make_node(Op::Pow, {b}, 0.0, std::stoi(digits));
    }
    return b;
  }

  NodePtr base() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    throw ParseError(std::string("unexpected '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      const std::size_t exp_start = pos_;
      digits();
      if (exp_start == pos_) pos_ = save;  // "2e" is 2 followed by an identifier
    }
    const std::string literal(text_.substr(start, pos_ - start));
    if (literal == ".") throw ParseError("malformed number", start);
    char* end = nullptr;
    const double value = std::strtod(literal.c_str(), &end);
    if (end != literal.c_str() + literal.size()) throw ParseError("malformed number", start);
    return make_node(Op::Constant, {}, value);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    const std::string name(text_.substr(start, pos_ - start));

    if (name.size() >= 2 && name[0] == 'x' &&
        std::all_of(name.begin() + 1, name.end(), [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
      if (name.size() > 8) throw ParseError("unknown identifier '" + name + "'", start);
      const int index = std::stoi(name.substr(1));
      if (index < 1 || index > dim_) {
        throw ParseError("unknown identifier '" + name + "' (dimension is " + std::to_string(dim_) + ")", start);
      }
      return make_node(Op::Variable, {}, 0.0, index - 1);
    }

    Op op;
    std::size_t min_arity = 1;
    std::size_t max_arity = 1;
    if (name == "abs") {
      op = Op::Abs;
    } else if (name == "sqrt") {
      op = Op::Sqrt;
    } else if (name == "max") {
      op = Op::Max;
      min_arity = 2;
      max_arity = SIZE_MAX;
    } else if (name == "min") {
      op = Op::Min;
      min_arity = 2;
      max_arity = SIZE_MAX;
    } else if (name == "norm") {
      op = Op::Norm;
      max_arity = SIZE_MAX;
    } else {
      throw ParseError("unknown identifier '" + name + "'", start);
    }

    expect('(');
    std::vector<NodePtr> args{expr()};
    while (accept(',')) args.push_back(expr());
    expect(')');
    if (args.size() < min_arity || args.size() > max_arity) {
      throw ParseError("arity mismatch: " + name + " takes " +
                           (max_arity == 1 ? std::string("1 argument") : "at least " + std::to_string(min_arity) +
                                                                              " arguments") +
                           ", got " + std::to_string(args.size()),
                       start);
    }
    return make_node(op, std::move(args));
  }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

bool is_constant(const Node& node) {
  if (node.op == Op::Variable) return false;
  return std::all_of(node.args.begin(), node.args.end(), [](const NodePtr& a) { return is_constant(*a); });
}

void collect_warnings(const Node& node, std::vector<std::string>& out) {
  if (node.op == Op::Sqrt && !is_constant(node)) {
    out.emplace_back("sqrt is not Lipschitz where its argument vanishes");
  }
  if (node.op == Op::Div && !is_constant(*node.args[1])) {
    out.emplace_back("division by a non-constant expression is not globally Lipschitz");
  }
  for (const auto& arg : node.args) collect_warnings(*arg, out);
}

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void print(const Node& node, std::string& out) {
  auto binary = [&](const char* op) {
    out += '(';
    print(*node.args[0], out);
    out += op;
    print(*node.args[1], out);
    out += ')';
  };
  auto call = [&](const char* name) {
    out += name;
    out += '(';
    for (std::size_t i = 0; i < node.args.size(); ++i) {
      if (i) out += ", ";
      print(*node.args[i], out);
    }
    out += ')';
  };
  switch (node.op) {
    case Op::Constant: out += format_number(node.value); break;
    case Op::Variable: out += "x" + std::to_string(node.index + 1); break;
    case Op::Add: binary(" + "); break;
    case Op::Sub: binary(" - "); break;
    case Op::Mul: binary(" * "); break;
    case Op::Div: binary(" / "); break;
    case Op::Pow:
      out += '(';
      print(*node.args[0], out);
      out += '^' + std::to_string(node.index) + ')';
      break;
    case Op::Neg:
      out += "(-";
      print(*node.args[0], out);
      out += ')';
      break;
    case Op::Abs: call("abs"); break;
    case Op::Max: call("max"); break;
    case Op::Min: call("min"); break;
    case Op::Sqrt: call("sqrt"); break;
    case Op::Norm: call("norm"); break;
  }
}

double eval(const Node& node, const Vec& x) {
  switch (node.op) {
    case Op::Constant: return node.value;
    case Op::Variable: return x[node.index];
    case Op::Add: return eval(*node.args[0], x) + eval(*node.args[1], x);
    case Op::Sub: return eval(*node.args[0], x) - eval(*node.args[1], x);
    case Op::Mul: return eval(*node.args[0], x) * eval(*node.args[1], x);
    case Op::Div: {
      const double num = eval(*node.args[0], x);
      const double den = eval(*node.args[1], x);
      if (den == 0.0) throw DomainError("division by zero");
      return num / den;
    }
    case Op::Pow: {
      const double b = eval(*node.args[0], x);
      double r = 1.0;
      for (int k = 0; k < node.index; ++k) r *= b;
      return r;
    }
    case Op::Neg: return -eval(*node.args[0], x);
    case Op::Abs: return std::abs(eval(*node.args[0], x));
    case Op::Max: {
      double r = eval(*node.args[0], x);
      for (std::size_t i = 1; i < node.args.size(); ++i) r = std::max(r, eval(*node.args[i], x));
      return r;
    }
    case Op::Min: {
      double r = eval(*node.args[0], x);
      for (std::size_t i = 1; i < node.args.size(); ++i) r = std::min(r, eval(*node.args[i], x));
      return r;
    }
    case Op::Sqrt: {
      const double a = eval(*node.args[0], x);
      if (a < 0.0) throw DomainError("sqrt of a negative number");
      return std::sqrt(a);
    }
    case Op::Norm: {
      double s = 0.0;
      for (const auto& arg : node.args) {
        const double a = eval(*arg, x);
        s += a * a;
      }
      return std::sqrt(s);
    }
  }
  return 0.0;
}

struct Dual {
  double v;
  Vec g;
};

Dual eval_dual(const Node& node, const Vec& x) {
  const auto n = x.size();
  switch (node.op) {
    case Op::Constant: return {node.value, Vec::Zero(n)};
    case Op::Variable: {
      Vec g = Vec::Zero(n);
      g[node.index] = 1.0;
      return {x[node.index], std::move(g)};
    }
    case Op::Add: {
      Dual a = eval_dual(*node.args[0], x);
      Dual b = eval_dual(*node.args[1], x);
      return {a.v + b.v, a.g + b.g};
    }
    case Op::Sub: {
      Dual a = eval_dual(*node.args[0], x);
      Dual b = eval_dual(*node.args[1], x);
      return {a.v - b.v, a.g - b.g};
    }
    case Op::Mul: {
      Dual a = eval_dual(*node.args[0], x);
      Dual b = eval_dual(*node.args[1], x);
      return {a.v * b.v, a.g * b.v + b.g * a.v};
    }
    case Op::Div: {
      Dual a = eval_dual(*node.args[0], x);
      Dual b = eval_dual(*node.args[1], x);
      if (b.v == 0.0) throw DomainError("division by zero");
      return {a.v / b.v, (a.g * b.v - b.g * a.v) / (b.v * b.v)};
    }
    case Op::Pow: {
      Dual b = eval_dual(*node.args[0], x);
      const int k = node.index;
      if (k == 0) return {1.0, Vec::Zero(n)};
      double lower = 1.0;  // b^(k-1)
      for (int i = 0; i < k - 1; ++i) lower *= b.v;
      return {lower * b.v, b.g * (k * lower)};
    }
    case Op::Neg: {
      Dual a = eval_dual(*node.args[0], x);
      return {-a.v, -a.g};
    }
    case Op::Abs: {
      Dual a = eval_dual(*node.args[0], x);
      const double s = a.v > 0.0 ? 1.0 : (a.v < 0.0 ? -1.0 : 0.0);
      return {std::abs(a.v), a.g * s};
    }
    case Op::Max:
    case Op::Min: {
      Dual best = eval_dual(*node.args[0], x);
      for (std::size_t i = 1; i < node.args.size(); ++i) {
        Dual cand = eval_dual(*node.args[i], x);
        const bool better = node.op == Op::Max ? cand.v > best.v : cand.v < best.v;
        if (better) best = std::move(cand);
      }
      return best;
    }
    case Op::Sqrt: {
      Dual a = eval_dual(*node.args[0], x);
      if (a.v < 0.0) throw DomainError("sqrt of a negative number");
      const double r = std::sqrt(a.v);
      if (r == 0.0) return {0.0, Vec::Zero(n)};
      return {r, a.g * (0.5 / r)};
    }
    case Op::Norm: {
      double s = 0.0;
      Vec g = Vec::Zero(n);
      for (const auto& arg : node.args) {
        Dual a = eval_dual(*arg, x);
        s += a.v * a.v;
        g += a.g * a.v;
      }
      const double r = std::sqrt(s);
      if (r == 0.0) return {0.0, Vec::Zero(n)};
      return {r, g / r};
    }
  }
  return {0.0, Vec::Zero(n)};
}

bool tie(double a, double b) { return std::abs(a - b) <= 1e-9 * (1.0 + std::max(std::abs(a), std::abs(b))); }

bool kink(const Node& node, const Vec& x) {
  for (const auto& arg : node.args) {
    if (kink(*arg, x)) return true;
  }
  switch (node.op) {
    case Op::Abs:
    case Op::Sqrt: return tie(eval(*node.args[0], x), 0.0);
    case Op::Norm: return tie(eval(node, x), 0.0);
    case Op::Max:
    case Op::Min: {
      std::vector<double> values;
      values.reserve(node.args.size());
      for (const auto& arg : node.args) values.push_back(eval(*arg, x));
      std::sort(values.begin(), values.end());
      return node.op == Op::Max ? tie(values[values.size() - 1], values[values.size() - 2]) : tie(values[0], values[1]);
    }
    default: return false;
  }
}

}  // namespace

Expression::Expression(NodePtr root, int dim) : root_(std::move(root)), dim_(dim) {
  collect_warnings(*root_, warnings_);
  std::sort(warnings_.begin(), warnings_.end());
  warnings_.erase(std::unique(warnings_.begin(), warnings_.end()), warnings_.end());
}

Expression Expression::parse(std::string_view text, int dim) {
  if (dim < 1) throw ParseError("dimension must be positive", 0);
  Parser parser(text, dim);
  return Expression(parser.parse(), dim);
}

std::string Expression::to_string() const {
  std::string out;
  print(*root_, out);
  return out;
}

double Expression::evaluate(const Vec& x) const { return eval(*root_, x); }

double Expression::evaluate_with_gradient(const Vec& x, Vec& gradient) const {
  Dual d = eval_dual(*root_, x);
  gradient = std::move(d.g);
  return d.v;
}

bool Expression::near_kink(const Vec& x) const { return kink(*root_, x); }

bool structurally_equal(const Expression::Node& a, const Expression::Node& b) {
  if (a.op != b.op || a.args.size() != b.args.size()) return false;
  if (a.op == Op::Constant && a.value != b.value) return false;
  if ((a.op == Op::Variable || a.op == Op::Pow) && a.index != b.index) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!structurally_equal(*a.args[i], *b.args[i])) return false;
  }
  return true;
}

bool operator==(const Expression& a, const Expression& b) {
  return a.dim_ == b.dim_ && structurally_equal(*a.root_, *b.root_);
}

}  // namespace mpass
