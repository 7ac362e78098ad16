#include "thermogeo/expr.hpp"

#include <cctype>
#include <charconv>
#include <vector>

namespace thermogeo {

struct Expression::Node {
  enum class Op { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Exp, Ln } op = Op::Number;
  double number = 0.0;
  std::shared_ptr<const Node> lhs, rhs;
  bool has_v = false;
};

namespace {

using Node = Expression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr leaf(double x) {
  auto n = std::make_shared<Node>();
  n->number = x;
  return n;
}

NodePtr make(Node::Op op, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->has_v = (a && a->has_v) || (b && b->has_v);
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip();
    if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg + " at column " + std::to_string(i_ + 1), i_);
  }

  void skip() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
  }

  bool eat(char c) {
    skip();
    if (i_ < s_.size() && s_[i_] == c) {
      ++i_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr a = term();
    for (;;) {
      if (eat('+'))
        a = make(Node::Op::Add, a, term());
      else if (eat('-'))
        a = make(Node::Op::Sub, a, term());
      else
        return a;
    }
  }

  NodePtr term() {
    NodePtr a = unary();
    for (;;) {
      if (eat('*'))
        a = make(Node::Op::Mul, a, unary());
      else if (eat('/'))
        a = make(Node::Op::Div, a, unary());
      else
        return a;
    }
  }

  NodePtr unary() {
    if (eat('-')) return make(Node::Op::Neg, unary());
    if (eat('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (eat('^')) return make(Node::Op::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (i_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[i_];
    if (c == '(') {
      ++i_;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = i_;
      while (i_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[i_]))) ++i_;
      const std::string_view id = s_.substr(start, i_ - start);
      if (id == "V") {
        auto n = std::make_shared<Node>();
        n->op = Node::Op::Var;
        n->has_v = true;
        return n;
      }
      if (id == "exp" || id == "ln") {
        if (!eat('(')) fail("expected '(' after " + std::string(id));
        NodePtr arg = expr();
        if (!eat(')')) fail("expected ')'");
        return make(id == "exp" ? Node::Op::Exp : Node::Op::Ln, arg);
      }
      i_ = start;
      fail("unknown identifier '" + std::string(id) + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    // from_chars would also take "inf" and "nan"; restrict to plain decimals.
    const std::size_t start = i_;
    while (i_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[i_])) || s_[i_] == '.')) ++i_;
    if (i_ < s_.size() && (s_[i_] == 'e' || s_[i_] == 'E')) {
      std::size_t j = i_ + 1;
      if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
      if (j < s_.size() && std::isdigit(static_cast<unsigned char>(s_[j]))) {
        i_ = j;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) ++i_;
      }
    }
    double x = 0.0;
    const auto [end, ec] = std::from_chars(s_.data() + start, s_.data() + i_, x);
    if (ec != std::errc() || end != s_.data() + i_) {
      i_ = start;
      fail("malformed number");
    }
    return leaf(x);
  }

  std::string_view s_;
  std::size_t i_ = 0;
};

Taylor3 eval_node(const Node& n, const Taylor3& v) {
  switch (n.op) {
    case Node::Op::Number: return Taylor3(n.number);
    case Node::Op::Var: return v;
    case Node::Op::Neg: return -eval_node(*n.lhs, v);
    case Node::Op::Add: return eval_node(*n.lhs, v) + eval_node(*n.rhs, v);
    case Node::Op::Sub: return eval_node(*n.lhs, v) - eval_node(*n.rhs, v);
    case Node::Op::Mul: return eval_node(*n.lhs, v) * eval_node(*n.rhs, v);
    case Node::Op::Div: return eval_node(*n.lhs, v) / eval_node(*n.rhs, v);
    case Node::Op::Pow:
      // A constant exponent keeps negative bases usable (V^2 at V < 0).
      if (!n.rhs->has_v) return pow(eval_node(*n.lhs, v), eval_node(*n.rhs, v).value());
      return pow(eval_node(*n.lhs, v), eval_node(*n.rhs, v));
    case Node::Op::Exp: return exp(eval_node(*n.lhs, v));
    case Node::Op::Ln: return log(eval_node(*n.lhs, v));
  }
  return Taylor3(0.0);
}

}  // namespace

Expression Expression::parse(std::string_view text) {
  Expression e;
  e.root_ = Parser(text).parse();
  e.source_ = std::string(text);
  return e;
}

Taylor3 Expression::eval(double v) const { return eval_node(*root_, Taylor3::variable(v)); }

bool Expression::depends_on_v() const { return root_->has_v; }

Profile Expression::profile() const {
  auto root = root_;
  return [root](double v) { return eval_node(*root, Taylor3::variable(v)); };
}

}  // namespace thermogeo
