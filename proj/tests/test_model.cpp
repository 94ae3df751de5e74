#include "doctest.h"

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "rafu/model.hpp"
#include "rafu/rng.hpp"

using rafu::Box;
using rafu::EvalError;
using rafu::Interval;
using rafu::ModelAst;
using rafu::ParseError;
using rafu::RngStream;

namespace {

double at(const std::string& src, const Box& box = {}) {
    return eval_point(rafu::parse(src), box);
}

} // namespace

TEST_CASE("operator precedence and associativity") {
    CHECK(at("1+2*3") == 7.0);
    CHECK(at("(1+2)*3") == 9.0);
    CHECK(at("2^3^2") == 512.0); // right-associative
    CHECK(at("-2^2") == -4.0);   // unary minus binds looser than ^
    CHECK(at("2*-3") == -6.0);
    CHECK(at("--2") == 2.0);
    CHECK(at("10-4-3") == 3.0);
    CHECK(at("12/3/2") == 2.0);
    CHECK(at("2^0.5") == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(at(" 1e3 + 0.5 ") == 1000.5);
    CHECK(at("min(3, max(1, 2))") == 2.0);
    CHECK(at("abs(-2) + sqrt(4) + ln(exp(1))") == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("parse errors carry a position") {
    CHECK_THROWS_AS(rafu::parse(""), ParseError);
    CHECK_THROWS_AS(rafu::parse("1 +"), ParseError);
    CHECK_THROWS_AS(rafu::parse("(1"), ParseError);
    CHECK_THROWS_AS(rafu::parse("1 2"), ParseError);
    CHECK_THROWS_AS(rafu::parse("1 @ 2"), ParseError);
    CHECK_THROWS_AS(rafu::parse("foo(1)"), ParseError);
    CHECK_THROWS_AS(rafu::parse("sin(1, 2)"), ParseError);
    CHECK_THROWS_AS(rafu::parse("min(1)"), ParseError);
    try {
        rafu::parse("1 +\n* 2");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(e.column == 1);
        CHECK(std::string(e.what()).find("2:1") != std::string::npos);
    }
}

TEST_CASE("variables are collected from the source") {
    const auto ast = rafu::parse("x1 + e1*sin(x1) - under_score");
    CHECK(ast.variables() == std::set<std::string>{"e1", "under_score", "x1"});
    CHECK(rafu::parse("1 + 2").variables().empty());
}

TEST_CASE("point evaluation") {
    const auto ast = rafu::parse("x*y + 1");
    CHECK(eval_point(ast, {{"x", 2.0}, {"y", 3.0}}) == 7.0);
    CHECK_THROWS_AS(eval_point(ast, {{"x", 2.0}}), std::invalid_argument);
    CHECK_THROWS_AS(eval_point(ast, {{"x", 2.0}, {"y", Interval(0.0, 1.0)}}),
                    std::invalid_argument);
    // non-finite values propagate instead of throwing
    CHECK(std::isnan(eval_point(rafu::parse("ln(x)"), {{"x", -1.0}})));
    CHECK(std::isinf(eval_point(rafu::parse("1/x"), {{"x", 0.0}})));
}

TEST_CASE("interval evaluation basics") {
    const Box box = {{"x", Interval(-1.0, 2.0)}};
    CHECK(eval_interval(rafu::parse("x^2"), box) == Interval(0.0, 4.0));
    // the dependency problem: x*x overestimates x^2
    CHECK(eval_interval(rafu::parse("x*x"), box) == Interval(-2.0, 4.0));
    CHECK(eval_interval(rafu::parse("x - x"), box) == Interval(-3.0, 3.0));
    CHECK(eval_interval(rafu::parse("2 + 3"), {}) == Interval(5.0, 5.0));
    CHECK(eval_interval(rafu::parse("x^0"), box) == Interval(1.0, 1.0));
    CHECK(eval_interval(rafu::parse("x^3"), {{"x", Interval(-2.0, 1.0)}}) ==
          Interval(-8.0, 1.0));
    CHECK(eval_interval(rafu::parse("x^-2"), {{"x", Interval(2.0, 4.0)}}) ==
          Interval(0.0625, 0.25));
    CHECK(eval_interval(rafu::parse("min(x, y)"),
                        {{"x", Interval(0.0, 2.0)}, {"y", Interval(1.0, 3.0)}}) ==
          Interval(0.0, 2.0));
    CHECK(eval_interval(rafu::parse("max(x, y)"),
                        {{"x", Interval(0.0, 2.0)}, {"y", Interval(1.0, 3.0)}}) ==
          Interval(1.0, 3.0));
    CHECK(eval_interval(rafu::parse("abs(x)"), box) == Interval(0.0, 2.0));
    // mixed point and interval coordinates
    CHECK(eval_interval(rafu::parse("a + x"), {{"a", 10.0}, {"x", Interval(0.0, 1.0)}}) ==
          Interval(10.0, 11.0));
}

TEST_CASE("interval evaluation flags domain violations") {
    const Box around_zero = {{"x", Interval(-1.0, 1.0)}};
    CHECK_THROWS_AS(eval_interval(rafu::parse("1/x"), around_zero), EvalError);
    CHECK_THROWS_AS(eval_interval(rafu::parse("ln(x)"), {{"x", Interval(0.0, 1.0)}}),
                    EvalError);
    CHECK_THROWS_AS(eval_interval(rafu::parse("sqrt(x)"), around_zero), EvalError);
    CHECK_THROWS_AS(eval_interval(rafu::parse("x^-1"), around_zero), EvalError);
    CHECK_THROWS_AS(eval_interval(rafu::parse("x^1.5"), {{"x", Interval(1.0, 2.0)}}),
                    EvalError);
    CHECK_THROWS_AS(
        eval_interval(rafu::parse("x^y"),
                      {{"x", Interval(1.0, 2.0)}, {"y", Interval(0.0, 2.0)}}),
        EvalError);
}

TEST_CASE("trigonometric enclosures catch interior extrema") {
    const double pi = 3.141592653589793;
    const Interval s = eval_interval(rafu::parse("sin(x)"), {{"x", Interval(0.0, pi)}});
    CHECK(s.lo == 0.0);
    CHECK(s.hi == 1.0);
    const Interval c = eval_interval(rafu::parse("cos(x)"), {{"x", Interval(0.0, 2.0)}});
    CHECK(c.hi == 1.0);
    CHECK(c.lo == doctest::Approx(std::cos(2.0)).epsilon(1e-15));
    // a full period pins both bounds
    CHECK(eval_interval(rafu::parse("sin(x)"), {{"x", Interval(0.0, 7.0)}}) ==
          Interval(-1.0, 1.0));
}

TEST_CASE("vertex evaluation is exact for monotone models") {
    const auto ast = rafu::parse("exp(x) + 3*y - z");
    const Box box = {{"x", Interval(-1.0, 0.5)},
                     {"y", Interval(2.0, 3.0)},
                     {"z", Interval(0.0, 4.0)}};
    const Interval v = eval_vertex(ast, box);

    // brute-force grid including the corners
    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (int i = 0; i <= 10; ++i)
        for (int j = 0; j <= 10; ++j)
            for (int k = 0; k <= 10; ++k) {
                const Box pt = {{"x", -1.0 + 1.5 * i / 10.0},
                                {"y", 2.0 + 1.0 * j / 10.0},
                                {"z", 0.0 + 4.0 * k / 10.0}};
                const double f = eval_point(ast, pt);
                lo = first ? f : std::min(lo, f);
                hi = first ? f : std::max(hi, f);
                first = false;
            }
    CHECK(v.lo == lo);
    CHECK(v.hi == hi);

    // monotone and separable, so the natural extension agrees
    const Interval iv = eval_interval(ast, box);
    CHECK(v.lo == doctest::Approx(iv.lo).epsilon(1e-15));
    CHECK(v.hi == doctest::Approx(iv.hi).epsilon(1e-15));
}

TEST_CASE("vertex evaluation misses interior extrema") {
    const double pi = 3.141592653589793;
    const auto ast = rafu::parse("sin(x)");
    const Box box = {{"x", Interval(0.0, pi)}};
    const Interval v = eval_vertex(ast, box);
    const Interval iv = eval_interval(ast, box);
    CHECK(v.hi < 0.5);      // both corners sit near sin = 0
    CHECK(iv.hi == 1.0);    // the enclosure still contains the peak
    CHECK(iv.lo <= v.lo);
    CHECK(v.hi <= iv.hi);
}

TEST_CASE("vertex evaluation guards") {
    Box wide;
    for (int i = 0; i < 13; ++i)
        wide["v" + std::to_string(i)] = Interval(0.0, 1.0);
    std::string src = "v0";
    for (int i = 1; i < 13; ++i) src += " + v" + std::to_string(i);
    const auto ast = rafu::parse(src);
    CHECK_THROWS_AS(eval_vertex(ast, wide), std::invalid_argument);
    CHECK(eval_vertex(ast, wide, 13) == Interval(0.0, 13.0));

    CHECK_THROWS_AS(eval_vertex(rafu::parse("1/x"), {{"x", Interval(0.0, 1.0)}}),
                    EvalError);
}

TEST_CASE("interval enclosure sandwiches point and vertex values") {
    const std::vector<std::string> sources = {
        "x + y*z", "x*x - y/(z + 5)", "sin(x) + exp(y/4) - z^2",
        "sqrt(abs(x)) * max(y, z) + min(x, 1.5)"};
    RngStream gen(31, 7);
    for (const auto& src : sources) {
        const auto ast = rafu::parse(src);
        for (int rep = 0; rep < 50; ++rep) {
            Box box;
            Box point;
            for (const char* name : {"x", "y", "z"}) {
                const double lo = -3.0 + 4.0 * gen.next_uniform();
                const double w = 2.0 * gen.next_uniform();
                box[name] = Interval(lo, lo + w);
                point[name] = lo + w * gen.next_uniform();
            }
            const Interval iv = eval_interval(ast, box);
            const Interval v = eval_vertex(ast, box);
            const double f = eval_point(ast, point);
            const double slack = 1e-9 * (1.0 + std::abs(iv.lo) + std::abs(iv.hi));
            CHECK(iv.lo - slack <= f);
            CHECK(f <= iv.hi + slack);
            CHECK(iv.lo - slack <= v.lo);
            CHECK(v.hi <= iv.hi + slack);
        }
    }
}
