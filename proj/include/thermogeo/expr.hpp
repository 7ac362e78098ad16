#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

#include "thermogeo/errors.hpp"
#include "thermogeo/models.hpp"

namespace thermogeo {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t pos) : Error(what), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

// A function of V written in a small grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?        right associative
//   primary := number | 'V' | ('exp' | 'ln') '(' expr ')' | '(' expr ')'
class Expression {
 public:
  struct Node;

  static Expression parse(std::string_view text);

  // Value and derivatives in V through order three.
  Taylor3 eval(double v) const;
  double value(double v) const { return eval(v).value(); }
  bool depends_on_v() const;
  const std::string& source() const { return source_; }
  Profile profile() const;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

}  // namespace thermogeo
