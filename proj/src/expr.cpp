#include "qmatch/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>

namespace qmatch::expr {

namespace {

struct Parser {
    std::string_view text;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw InputError("expression error at offset " + std::to_string(pos) + ": " + what +
                         " in \"" + std::string(text) + "\"");
    }

    void skip_space() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_space();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    char peek() {
        skip_space();
        return pos < text.size() ? text[pos] : '\0';
    }

    NodeRef make(NodeKind kind, NodeRef lhs = nullptr, NodeRef rhs = nullptr) {
        auto n = std::make_shared<Node>();
        n->kind = kind;
        n->lhs = std::move(lhs);
        n->rhs = std::move(rhs);
        return n;
    }

    NodeRef parse_expr() {
        NodeRef left = parse_term();
        for (;;) {
            if (eat('+')) {
                left = make(NodeKind::Add, left, parse_term());
            } else if (eat('-')) {
                left = make(NodeKind::Subtract, left, parse_term());
            } else {
                return left;
            }
        }
    }

    NodeRef parse_term() {
        NodeRef left = parse_factor();
        for (;;) {
            if (eat('*')) {
                left = make(NodeKind::Multiply, left, parse_factor());
            } else if (eat('/')) {
                left = make(NodeKind::Divide, left, parse_factor());
            } else {
                return left;
            }
        }
    }

    NodeRef parse_factor() {
        if (eat('-')) return make(NodeKind::Negate, parse_factor());
        return parse_primary();
    }

    NodeRef parse_primary() {
        skip_space();
        if (pos >= text.size()) fail("unexpected end of expression");
        char c = text[pos];
        if (c == '(') {
            ++pos;
            NodeRef inner = parse_expr();
            if (!eat(')')) fail("expected ')'");
            return inner;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
        fail(std::string("unexpected character '") + c + "'");
    }

    NodeRef parse_number() {
        std::size_t start = pos;
        while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
            ++pos;
        if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
            ++pos;
            if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        }
        double value = 0.0;
        auto [ptr, ec] = std::from_chars(text.data() + start, text.data() + pos, value);
        if (ec != std::errc() || ptr != text.data() + pos) fail("malformed number");
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Number;
        n->number = value;
        return n;
    }

    NodeRef parse_ident() {
        std::size_t start = pos;
        while (pos < text.size() &&
               (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
            ++pos;
        std::string name(text.substr(start, pos - start));
        if (peek() == '(') {
            if (name != "min" && name != "max") fail("unknown function '" + name + "'");
            eat('(');
            NodeRef a = parse_expr();
            if (!eat(',')) fail("expected ',' in " + name + "(..)");
            NodeRef b = parse_expr();
            if (!eat(')')) fail("expected ')' closing " + name + "(..)");
            return make(name == "min" ? NodeKind::Min : NodeKind::Max, a, b);
        }
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::Variable;
        n->name = std::move(name);
        return n;
    }
};

void collect_variables(const Node& node, std::set<std::string>& out) {
    switch (node.kind) {
        case NodeKind::Number: return;
        case NodeKind::Variable: out.insert(node.name); return;
        default:
            if (node.lhs) collect_variables(*node.lhs, out);
            if (node.rhs) collect_variables(*node.rhs, out);
    }
}

}  // namespace

NodeRef parse(std::string_view text) {
    Parser p{text};
    NodeRef root = p.parse_expr();
    p.skip_space();
    if (p.pos != text.size()) p.fail("trailing input");
    return root;
}

double evaluate(const Node& node, const std::map<std::string, double>& vars) {
    switch (node.kind) {
        case NodeKind::Number: return node.number;
        case NodeKind::Variable: {
            auto it = vars.find(node.name);
            if (it == vars.end()) throw EvalError("unbound variable '" + node.name + "'");
            return it->second;
        }
        case NodeKind::Negate: return -evaluate(*node.lhs, vars);
        case NodeKind::Add: return evaluate(*node.lhs, vars) + evaluate(*node.rhs, vars);
        case NodeKind::Subtract: return evaluate(*node.lhs, vars) - evaluate(*node.rhs, vars);
        case NodeKind::Multiply: return evaluate(*node.lhs, vars) * evaluate(*node.rhs, vars);
        case NodeKind::Divide: {
            double denom = evaluate(*node.rhs, vars);
            if (denom == 0.0) throw EvalError("division by zero");
            return evaluate(*node.lhs, vars) / denom;
        }
        case NodeKind::Min: return std::min(evaluate(*node.lhs, vars), evaluate(*node.rhs, vars));
        case NodeKind::Max: return std::max(evaluate(*node.lhs, vars), evaluate(*node.rhs, vars));
    }
    throw EvalError("corrupt expression node");
}

std::set<std::string> free_variables(const Node& node) {
    std::set<std::string> out;
    collect_variables(node, out);
    return out;
}

}  // namespace qmatch::expr
