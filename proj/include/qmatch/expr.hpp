#pragma once
// Arithmetic expressions over named operands, used by metric functions.
// Grammar: + - * /, unary -, parentheses, numeric literals, identifiers,
// and the builtins min(x,y) / max(x,y).

#include "qmatch/errors.hpp"

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

namespace qmatch::expr {

enum class NodeKind { Number, Variable, Negate, Add, Subtract, Multiply, Divide, Min, Max };

struct Node;
using NodeRef = std::shared_ptr<const Node>;

struct Node {
    NodeKind kind;
    double number = 0.0;    // Number
    std::string name;       // Variable
    NodeRef lhs;            // unary operand for Negate
    NodeRef rhs;
};

// Parses `text` into an expression tree. Throws InputError on grammar errors.
NodeRef parse(std::string_view text);

// Evaluates the tree against a variable valuation. Throws EvalError on an
// unbound variable or division by zero.
double evaluate(const Node& node, const std::map<std::string, double>& vars);

std::set<std::string> free_variables(const Node& node);

}  // namespace qmatch::expr
