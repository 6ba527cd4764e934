#include "orlicz_gauge/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "orlicz_gauge/errors.hpp"

namespace orlicz {

struct ParamExpression::Node {
  enum class Op { kNumber, kVariable, kAdd, kSub, kMul, kDiv, kPow, kNeg, kCall };
  Op op = Op::kNumber;
  double number = 0.0;
  std::string function;
  std::vector<std::shared_ptr<const Node>> args;
};

namespace {

using Node = ParamExpression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_node(Node::Op op, std::vector<NodePtr> args = {}) {
  auto node = std::make_shared<Node>();
  node->op = op;
  node->args = std::move(args);
  return node;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    NodePtr root = expression();
    skip_space();
    if (pos_ != text_.size()) error("unexpected trailing input");
    return root;
  }

 private:
  [[noreturn]] void error(const std::string& what) const {
    fail(ErrorCode::kValidation, "expression '" + std::string(text_) +
                                     "': " + what + " at offset " +
                                     std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expression() {
    NodePtr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make_node(Node::Op::kAdd, {lhs, term()});
      } else if (accept('-')) {
        lhs = make_node(Node::Op::kSub, {lhs, term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_node(Node::Op::kMul, {lhs, unary()});
      } else if (accept('/')) {
        lhs = make_node(Node::Op::kDiv, {lhs, unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_node(Node::Op::kNeg, {unary()});
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_node(Node::Op::kPow, {base, unary()});
    return base;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) error("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = expression();
      if (!accept(')')) error("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return identifier();
    }
    error(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::string rest(text_.substr(pos_));
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(rest, &used);
    } catch (const std::exception&) {
      error("malformed number");
    }
    pos_ += used;
    auto node = std::make_shared<Node>();
    node->op = Node::Op::kNumber;
    node->number = value;
    return node;
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(text_.substr(start, pos_ - start));
    if (name == "n") return make_node(Node::Op::kVariable);
    if (name == "pi" || name == "e") {
      auto node = std::make_shared<Node>();
      node->op = Node::Op::kNumber;
      node->number = name == "pi" ? std::numbers::pi : std::numbers::e;
      return node;
    }
    static const std::vector<std::pair<std::string, std::size_t>> kFunctions = {
        {"exp", 1}, {"log", 1}, {"sqrt", 1}, {"abs", 1},
        {"sin", 1}, {"cos", 1}, {"tan", 1},  {"pow", 2},
        {"min", 2}, {"max", 2}};
    std::size_t arity = 0;
    for (const auto& [fname, farity] : kFunctions) {
      if (fname == name) arity = farity;
    }
    if (arity == 0) error("unknown identifier '" + name + "'");
    if (!accept('(')) error("expected '(' after " + name);
    std::vector<NodePtr> args;
    args.push_back(expression());
    while (accept(',')) args.push_back(expression());
    if (!accept(')')) error("expected ')' closing " + name);
    if (args.size() != arity) error("wrong argument count for " + name);
    auto node = std::make_shared<Node>();
    node->op = Node::Op::kCall;
    node->function = name;
    node->args = std::move(args);
    return node;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double eval(const Node& node, double n) {
  switch (node.op) {
    case Node::Op::kNumber:
      return node.number;
    case Node::Op::kVariable:
      return n;
    case Node::Op::kAdd:
      return eval(*node.args[0], n) + eval(*node.args[1], n);
    case Node::Op::kSub:
      return eval(*node.args[0], n) - eval(*node.args[1], n);
    case Node::Op::kMul:
      return eval(*node.args[0], n) * eval(*node.args[1], n);
    case Node::Op::kDiv:
      return eval(*node.args[0], n) / eval(*node.args[1], n);
    case Node::Op::kPow:
      return std::pow(eval(*node.args[0], n), eval(*node.args[1], n));
    case Node::Op::kNeg:
      return -eval(*node.args[0], n);
    case Node::Op::kCall:
      break;
  }
  const double a = eval(*node.args[0], n);
  const std::string& f = node.function;
  if (f == "exp") return std::exp(a);
  if (f == "log") return std::log(a);
  if (f == "sqrt") return std::sqrt(a);
  if (f == "abs") return std::fabs(a);
  if (f == "sin") return std::sin(a);
  if (f == "cos") return std::cos(a);
  if (f == "tan") return std::tan(a);
  const double b = eval(*node.args[1], n);
  if (f == "pow") return std::pow(a, b);
  if (f == "min") return std::fmin(a, b);
  return std::fmax(a, b);
}

}  // namespace

ParamExpression::ParamExpression(std::string_view source)
    : source_(source), root_(Parser(source).parse()) {}

double ParamExpression::evaluate(double n) const { return eval(*root_, n); }

double evaluate_expression(std::string_view source, double n) {
  return ParamExpression(source).evaluate(n);
}

}  // namespace orlicz
