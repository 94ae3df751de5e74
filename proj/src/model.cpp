#include "rafu/model.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>

namespace rafu {

namespace {

using namespace ast;

// ---------------------------------------------------------------------------
// Tokenizer

enum class TokKind { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End };

struct Token {
    TokKind kind;
    std::string text;
    double number = 0.0;
    std::size_t line = 1;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& src) : src_(src) {}

    Token next() {
        skip_ws();
        Token t;
        t.line = line_;
        t.column = column_;
        if (pos_ >= src_.size()) {
            t.kind = TokKind::End;
            return t;
        }
        const char c = src_[pos_];
        switch (c) {
            case '+': return single(t, TokKind::Plus);
            case '-': return single(t, TokKind::Minus);
            case '*': return single(t, TokKind::Star);
            case '/': return single(t, TokKind::Slash);
            case '^': return single(t, TokKind::Caret);
            case '(': return single(t, TokKind::LParen);
            case ')': return single(t, TokKind::RParen);
            case ',': return single(t, TokKind::Comma);
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(t);
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident(t);
        throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
    }

private:
    Token single(Token t, TokKind k) {
        t.kind = k;
        t.text = src_[pos_];
        advance();
        return t;
    }

    Token number(Token t) {
        const char* begin = src_.c_str() + pos_;
        char* end = nullptr;
        t.number = std::strtod(begin, &end);
        if (end == begin) throw ParseError("malformed number", line_, column_);
        t.kind = TokKind::Number;
        t.text.assign(begin, static_cast<std::size_t>(end - begin));
        // strtod accepts a leading sign and hex floats; the switch above
        // already routed signs away, so only consume what we scanned
        for (const char* p = begin; p != end; ++p) advance();
        return t;
    }

    Token ident(Token t) {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            advance();
        t.kind = TokKind::Ident;
        t.text = src_.substr(start, pos_ - start);
        return t;
    }

    void skip_ws() {
        while (pos_ < src_.size() &&
               std::isspace(static_cast<unsigned char>(src_[pos_])))
            advance();
    }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    const std::string& src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

// ---------------------------------------------------------------------------
// Parser: ^ binds tighter than unary minus, then * /, then + -; all
// left-associative except ^.

std::optional<Func> func_by_name(const std::string& name) {
    if (name == "sin") return Func::Sin;
    if (name == "cos") return Func::Cos;
    if (name == "exp") return Func::Exp;
    if (name == "ln") return Func::Ln;
    if (name == "sqrt") return Func::Sqrt;
    if (name == "abs") return Func::Abs;
    if (name == "min") return Func::Min;
    if (name == "max") return Func::Max;
    return std::nullopt;
}

std::size_t func_arity(Func f) {
    return (f == Func::Min || f == Func::Max) ? 2 : 1;
}

class Parser {
public:
    explicit Parser(const std::string& src) : lexer_(src) { bump(); }

    ModelAst run() {
        ExprPtr root = additive();
        expect(TokKind::End, "end of input");
        return ModelAst(std::move(root), std::move(variables_));
    }

private:
    ExprPtr additive() {
        ExprPtr lhs = multiplicative();
        while (cur_.kind == TokKind::Plus || cur_.kind == TokKind::Minus) {
            const BinaryOp op = cur_.kind == TokKind::Plus ? BinaryOp::Add : BinaryOp::Sub;
            bump();
            lhs = make(Binary{op, std::move(lhs), multiplicative()});
        }
        return lhs;
    }

    ExprPtr multiplicative() {
        ExprPtr lhs = unary();
        while (cur_.kind == TokKind::Star || cur_.kind == TokKind::Slash) {
            const BinaryOp op = cur_.kind == TokKind::Star ? BinaryOp::Mul : BinaryOp::Div;
            bump();
            lhs = make(Binary{op, std::move(lhs), unary()});
        }
        return lhs;
    }

    ExprPtr unary() {
        if (cur_.kind == TokKind::Minus) {
            bump();
            return make(Negate{unary()});
        }
        return power();
    }

    ExprPtr power() {
        ExprPtr base = primary();
        if (cur_.kind == TokKind::Caret) {
            bump();
            return make(Binary{BinaryOp::Pow, std::move(base), unary()});
        }
        return base;
    }

    ExprPtr primary() {
        switch (cur_.kind) {
            case TokKind::Number: {
                ExprPtr e = make(Literal{cur_.number});
                bump();
                return e;
            }
            case TokKind::LParen: {
                bump();
                ExprPtr e = additive();
                expect(TokKind::RParen, "')'");
                return e;
            }
            case TokKind::Ident: {
                const Token name = cur_;
                bump();
                if (cur_.kind != TokKind::LParen) {
                    variables_.insert(name.text);
                    return make(Variable{name.text});
                }
                const auto func = func_by_name(name.text);
                if (!func)
                    throw ParseError("unknown function '" + name.text + "'", name.line,
                                     name.column);
                bump();
                std::vector<ExprPtr> args;
                args.push_back(additive());
                while (cur_.kind == TokKind::Comma) {
                    bump();
                    args.push_back(additive());
                }
                expect(TokKind::RParen, "')'");
                if (args.size() != func_arity(*func))
                    throw ParseError("'" + name.text + "' takes " +
                                         std::to_string(func_arity(*func)) +
                                         " argument(s), got " + std::to_string(args.size()),
                                     name.line, name.column);
                return make(Call{*func, std::move(args)});
            }
            default:
                throw ParseError("unexpected '" + describe(cur_) + "'", cur_.line, cur_.column);
        }
    }

    static std::string describe(const Token& t) {
        return t.kind == TokKind::End ? "end of input" : t.text;
    }

    void expect(TokKind k, const std::string& what) {
        if (cur_.kind != k)
            throw ParseError("expected " + what + ", found '" + describe(cur_) + "'",
                             cur_.line, cur_.column);
        if (k != TokKind::End) bump();
    }

    template <typename Node>
    static ExprPtr make(Node&& node) {
        return std::make_shared<const Expr>(Expr{std::forward<Node>(node)});
    }

    void bump() { cur_ = lexer_.next(); }

    Lexer lexer_;
    Token cur_;
    std::set<std::string> variables_;
};

// ---------------------------------------------------------------------------
// Evaluation

double point_coord(const Box& box, const std::string& name) {
    auto it = box.find(name);
    if (it == box.end()) throw std::invalid_argument("unbound variable '" + name + "'");
    if (const double* v = std::get_if<double>(&it->second)) return *v;
    throw std::invalid_argument("variable '" + name +
                                "' is an interval in a point evaluation");
}

Interval interval_coord(const Box& box, const std::string& name) {
    auto it = box.find(name);
    if (it == box.end()) throw std::invalid_argument("unbound variable '" + name + "'");
    if (const double* v = std::get_if<double>(&it->second)) return Interval::point(*v);
    return std::get<Interval>(it->second);
}

double eval_point_node(const ExprPtr& e, const Box& box) {
    struct Visitor {
        const Box& box;
        double operator()(const Literal& n) const { return n.value; }
        double operator()(const Variable& n) const { return point_coord(box, n.name); }
        double operator()(const Negate& n) const { return -eval_point_node(n.operand, box); }
        double operator()(const Binary& n) const {
            const double a = eval_point_node(n.lhs, box);
            const double b = eval_point_node(n.rhs, box);
            switch (n.op) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div: return a / b;
                case BinaryOp::Pow: return std::pow(a, b);
            }
            return 0.0; // unreachable
        }
        double operator()(const Call& n) const {
            const double a = eval_point_node(n.args[0], box);
            switch (n.func) {
                case Func::Sin: return std::sin(a);
                case Func::Cos: return std::cos(a);
                case Func::Exp: return std::exp(a);
                case Func::Ln: return std::log(a);
                case Func::Sqrt: return std::sqrt(a);
                case Func::Abs: return std::abs(a);
                case Func::Min: return std::min(a, eval_point_node(n.args[1], box));
                case Func::Max: return std::max(a, eval_point_node(n.args[1], box));
            }
            return 0.0; // unreachable
        }
    };
    return std::visit(Visitor{box}, e->node);
}

Interval eval_interval_node(const ExprPtr& e, const Box& box) {
    struct Visitor {
        const Box& box;
        Interval operator()(const Literal& n) const { return Interval::point(n.value); }
        Interval operator()(const Variable& n) const { return interval_coord(box, n.name); }
        Interval operator()(const Negate& n) const { return -eval_interval_node(n.operand, box); }
        Interval operator()(const Binary& n) const {
            const Interval a = eval_interval_node(n.lhs, box);
            const Interval b = eval_interval_node(n.rhs, box);
            switch (n.op) {
                case BinaryOp::Add: return a + b;
                case BinaryOp::Sub: return a - b;
                case BinaryOp::Mul: return a * b;
                case BinaryOp::Div: return a / b;
                case BinaryOp::Pow: {
                    if (!b.is_point() || b.lo != std::floor(b.lo) ||
                        std::abs(b.lo) > 1e9)
                        throw EvalError(
                            "interval evaluation supports ^ for integer exponents only");
                    return pow_int(a, static_cast<long long>(b.lo));
                }
            }
            return {}; // unreachable
        }
        Interval operator()(const Call& n) const {
            const Interval a = eval_interval_node(n.args[0], box);
            switch (n.func) {
                case Func::Sin: return sin(a);
                case Func::Cos: return cos(a);
                case Func::Exp: return exp(a);
                case Func::Ln: return log(a);
                case Func::Sqrt: return sqrt(a);
                case Func::Abs: return abs(a);
                case Func::Min: return min(a, eval_interval_node(n.args[1], box));
                case Func::Max: return max(a, eval_interval_node(n.args[1], box));
            }
            return {}; // unreachable
        }
    };
    return std::visit(Visitor{box}, e->node);
}

} // namespace

ModelAst parse(const std::string& source) { return Parser(source).run(); }

double eval_point(const ModelAst& ast, const Box& point) {
    return eval_point_node(ast.root(), point);
}

Interval eval_interval(const ModelAst& ast, const Box& box) {
    return eval_interval_node(ast.root(), box);
}

Interval eval_vertex(const ModelAst& ast, const Box& box, std::size_t max_interval_coords) {
    std::vector<Box::const_iterator> spans;
    for (auto it = box.begin(); it != box.end(); ++it)
        if (std::holds_alternative<Interval>(it->second)) spans.push_back(it);
    if (spans.size() > max_interval_coords)
        throw std::invalid_argument(
            "vertex evaluation over " + std::to_string(spans.size()) +
            " interval coordinates exceeds the limit of " +
            std::to_string(max_interval_coords) + "; use the interval strategy instead");

    Box corner = box;
    double lo = 0.0, hi = 0.0;
    const std::size_t corners = std::size_t{1} << spans.size();
    for (std::size_t mask = 0; mask < corners; ++mask) {
        for (std::size_t j = 0; j < spans.size(); ++j) {
            const Interval& iv = std::get<Interval>(spans[j]->second);
            corner[spans[j]->first] = (mask >> j) & 1 ? iv.hi : iv.lo;
        }
        const double v = eval_point(ast, corner);
        if (!std::isfinite(v))
            throw EvalError("corner evaluation produced a non-finite value");
        lo = mask == 0 ? v : std::min(lo, v);
        hi = mask == 0 ? v : std::max(hi, v);
    }
    return {lo, hi};
}

} // namespace rafu
