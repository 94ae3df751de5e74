#ifndef RAFU_MODEL_HPP
#define RAFU_MODEL_HPP

#include <map>
#include <memory>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "rafu/interval.hpp"

namespace rafu {

/// Parse failure with the 1-based position of the offending token.
struct ParseError : std::runtime_error {
    ParseError(const std::string& what, std::size_t line_, std::size_t column_)
        : std::runtime_error("syntax error at " + std::to_string(line_) + ":" +
                             std::to_string(column_) + ": " + what),
          line(line_),
          column(column_) {}
    std::size_t line;
    std::size_t column;
};

namespace ast {

enum class BinaryOp { Add, Sub, Mul, Div, Pow };
enum class Func { Sin, Cos, Exp, Ln, Sqrt, Abs, Min, Max };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Literal {
    double value;
};
struct Variable {
    std::string name;
};
struct Negate {
    ExprPtr operand;
};
struct Binary {
    BinaryOp op;
    ExprPtr lhs;
    ExprPtr rhs;
};
struct Call {
    Func func;
    std::vector<ExprPtr> args;
};

struct Expr {
    std::variant<Literal, Variable, Negate, Binary, Call> node;
};

} // namespace ast

/// Variable binding for one evaluation: a point value for aleatory
/// coordinates, an interval for epistemic ones.
using BoxCoord = std::variant<double, Interval>;
using Box = std::map<std::string, BoxCoord>;

/// Parsed arithmetic expression, immutable after parse.
class ModelAst {
public:
    ModelAst(ast::ExprPtr root, std::set<std::string> variables)
        : root_(std::move(root)), variables_(std::move(variables)) {}

    const ast::ExprPtr& root() const { return root_; }
    const std::set<std::string>& variables() const { return variables_; }

private:
    ast::ExprPtr root_;
    std::set<std::string> variables_;
};

/// Parses an expression over + - * / ^ (right-associative), unary minus,
/// parentheses and the functions sin, cos, exp, ln, sqrt, abs, min, max.
ModelAst parse(const std::string& source);

/// IEEE double evaluation at a pure point; NaN/Inf propagate so callers
/// can flag the sample instead of aborting. Throws on an unbound variable
/// or an interval coordinate.
double eval_point(const ModelAst& ast, const Box& point);

/// Guaranteed outer enclosure of the range of the model over the box, by
/// natural interval extension node by node. May overestimate when a
/// variable repeats. Throws EvalError on domain violations (division by
/// an interval containing 0, ln touching <= 0, non-integer exponent).
Interval eval_interval(const ModelAst& ast, const Box& box);

/// [min, max] over all corners of the box; exact when the model is
/// monotone in each interval coordinate, otherwise an inner
/// approximation. Refuses boxes with more interval coordinates than
/// max_interval_coords. Throws EvalError when a corner evaluates to a
/// non-finite value.
Interval eval_vertex(const ModelAst& ast, const Box& box,
                     std::size_t max_interval_coords = 12);

} // namespace rafu

#endif
