#include "eife/problems.hpp"

#include "eife/errors.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

namespace eife {

namespace {

using std::numbers::pi;

double coord(Point x, std::size_t a) { return a < x.size() ? x[a] : 0.0; }

} // namespace

double Problem::boundary_value(double t, Point x) const {
    if (bc != BoundaryKind::Dirichlet || !boundary) return 0.0;
    return boundary(t, x);
}

double Problem::boundary_rate(double t, Point x) const {
    if (bc != BoundaryKind::Dirichlet || !boundary) return 0.0;
    if (boundary_dt) return boundary_dt(t, x);
    const double delta = 1e-6 * std::max(1.0, std::abs(t));
    return (boundary(t + delta, x) - boundary(t - delta, x)) / (2.0 * delta);
}

Problem builtin_linear_rd() {
    Problem p;
    p.name = "linear_rd";
    p.diffusion = 0.5;
    const double half_pi2 = 0.5 * pi * pi;
    p.reaction = [half_pi2](double t, Point x, double u) {
        return -half_pi2 * u +
               half_pi2 * std::exp(-pi * pi * t) * std::sin(pi * coord(x, 0)) * std::sin(pi * coord(x, 1));
    };
    p.reaction_du = [half_pi2](double, Point, double) { return -half_pi2; };
    p.exact = [](double t, Point x) {
        return std::exp(-pi * pi * t) * (std::sin(pi * coord(x, 0)) - 1.0) * std::sin(pi * coord(x, 1));
    };
    p.initial = [exact = p.exact](Point x) { return exact(0.0, x); };
    p.bc = BoundaryKind::HomogeneousDirichlet;
    p.lower = {0.5, 0.0};
    p.upper = {2.5, 1.0};
    p.final_time = 1.0;
    return p;
}

Problem builtin_allen_cahn_wave(double eps) {
    if (!(eps > 0.0)) throw ConfigError("allen_cahn_wave: eps must be positive");
    Problem p;
    p.name = "allen_cahn_wave";
    p.diffusion = 1.0;
    const double inv_eps2 = 1.0 / (eps * eps);
    p.reaction = [inv_eps2](double, Point, double u) { return -(u * u * u - u) * inv_eps2; };
    p.reaction_du = [inv_eps2](double, Point, double u) { return -(3.0 * u * u - 1.0) * inv_eps2; };
    const double width = 2.0 * std::sqrt(2.0) * eps;
    const double speed = 3.0 / (std::sqrt(2.0) * eps);
    p.exact = [width, speed](double t, Point x) {
        return 0.5 * (1.0 - std::tanh((coord(x, 0) - speed * t) / width));
    };
    p.boundary = p.exact;
    p.boundary_dt = [width, speed](double t, Point x) {
        const double c = std::cosh((coord(x, 0) - speed * t) / width);
        return 0.5 * speed / (width * c * c);
    };
    p.initial = [exact = p.exact](Point x) { return exact(0.0, x); };
    p.bc = BoundaryKind::Dirichlet;
    p.lower = {0.0, 0.0, 0.0};
    p.upper = {std::sqrt(2.0), 0.125, 0.125};
    p.final_time = 3.0 * std::sqrt(2.0) * eps / 5.0;
    return p;
}

double flory_huggins_reaction(double u, double theta, double theta_c) {
    if (!(std::abs(u) < 1.0)) {
        std::ostringstream msg;
        msg << "Flory-Huggins reaction evaluated at u = " << u << " outside (-1, 1)";
        throw DomainError(msg.str(), u);
    }
    return 0.5 * theta * std::log((1.0 - u) / (1.0 + u)) + theta_c * u;
}

Problem builtin_flory_huggins(double eps, double theta, double theta_c, std::uint64_t seed) {
    if (!(eps > 0.0)) throw ConfigError("flory_huggins: eps must be positive");
    Problem p;
    p.name = "flory_huggins";
    p.diffusion = eps * eps;
    p.reaction = [theta, theta_c](double, Point, double u) { return flory_huggins_reaction(u, theta, theta_c); };
    p.reaction_du = [theta, theta_c](double, Point, double u) { return -theta / (1.0 - u * u) + theta_c; };
    p.random_initial = RandomInitialData{seed, -0.9, 0.9};
    p.energy = FloryHugginsParams{eps, theta, theta_c};
    p.bc = BoundaryKind::Periodic;
    p.lower = {0.0, 0.0, 0.0};
    p.upper = {1.0, 1.0, 1.0};
    p.final_time = 20.0;
    return p;
}

double seeded_uniform(std::uint64_t seed, std::uint64_t counter, double low, double high) {
    // SplitMix64 finalizer applied to a seed-offset counter.
    std::uint64_t z = seed + (counter + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    z ^= z >> 31;
    const double unit = static_cast<double>(z >> 11) * 0x1.0p-53;
    return low + (high - low) * unit;
}

// ---------------------------------------------------------------------------
// Expressions

struct Expression::Node {
    enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call } kind;
    double value = 0.0;
    int var = 0; // 0:t 1:x 2:y 3:z 4:u
    std::string func;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Kind = Expression::Node::Kind;

class Parser {
public:
    explicit Parser(std::string_view src) : src_(src) {}

    NodePtr parse() {
        NodePtr n = expr();
        skip();
        if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
        return n;
    }

private:
    std::string_view src_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const {
        throw ConfigError("expression '" + std::string(src_) + "': " + what + " at column " +
                          std::to_string(pos_ + 1));
    }

    void skip() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < src_.size() && src_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    static NodePtr make(Kind k, NodePtr l, NodePtr r = nullptr) {
        auto n = std::make_shared<Expression::Node>();
        n->kind = k;
        n->lhs = std::move(l);
        n->rhs = std::move(r);
        return n;
    }

    NodePtr expr() {
        NodePtr n = term();
        for (;;) {
            if (accept('+')) n = make(Kind::Add, n, term());
            else if (accept('-')) n = make(Kind::Sub, n, term());
            else return n;
        }
    }

    NodePtr term() {
        NodePtr n = unary();
        for (;;) {
            if (accept('*')) n = make(Kind::Mul, n, unary());
            else if (accept('/')) n = make(Kind::Div, n, unary());
            else return n;
        }
    }

    NodePtr unary() {
        if (accept('-')) return make(Kind::Neg, unary());
        if (accept('+')) return unary();
        return power();
    }

    // Right-associative; binds tighter than unary minus on its left operand only.
    NodePtr power() {
        NodePtr base = primary();
        if (accept('^')) return make(Kind::Pow, base, unary());
        return base;
    }

    NodePtr primary() {
        skip();
        if (pos_ >= src_.size()) fail("unexpected end of input");
        const char c = src_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr n = expr();
            if (!accept(')')) fail("expected ')'");
            return n;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
        fail("unexpected '" + std::string(1, c) + "'");
    }

    NodePtr number() {
        const char* begin = src_.data() + pos_;
        char* end = nullptr;
        const std::string tail(begin, src_.size() - pos_);
        const double v = std::strtod(tail.c_str(), &end);
        const auto used = static_cast<std::size_t>(end - tail.c_str());
        if (used == 0) fail("malformed number");
        pos_ += used;
        auto n = std::make_shared<Expression::Node>();
        n->kind = Kind::Number;
        n->value = v;
        return n;
    }

    NodePtr identifier() {
        const std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
            ++pos_;
        }
        const std::string name(src_.substr(start, pos_ - start));
        static const char* vars[] = {"t", "x", "y", "z", "u"};
        for (int i = 0; i < 5; ++i) {
            if (name == vars[i]) {
                auto n = std::make_shared<Expression::Node>();
                n->kind = Kind::Var;
                n->var = i;
                return n;
            }
        }
        if (name == "pi") {
            auto n = std::make_shared<Expression::Node>();
            n->kind = Kind::Number;
            n->value = pi;
            return n;
        }
        static const char* funcs[] = {"exp", "ln", "log", "tanh", "sin", "cos", "sqrt"};
        for (const char* f : funcs) {
            if (name == f) {
                if (!accept('(')) fail("expected '(' after " + name);
                NodePtr arg = expr();
                if (!accept(')')) fail("expected ')'");
                auto n = std::make_shared<Expression::Node>();
                n->kind = Kind::Call;
                n->func = name == "log" ? "ln" : name;
                n->lhs = std::move(arg);
                return n;
            }
        }
        pos_ = start;
        fail("unknown identifier '" + name + "'");
    }
};

double eval(const Expression::Node& n, const double* vars) {
    switch (n.kind) {
    case Kind::Number: return n.value;
    case Kind::Var: return vars[n.var];
    case Kind::Neg: return -eval(*n.lhs, vars);
    case Kind::Add: return eval(*n.lhs, vars) + eval(*n.rhs, vars);
    case Kind::Sub: return eval(*n.lhs, vars) - eval(*n.rhs, vars);
    case Kind::Mul: return eval(*n.lhs, vars) * eval(*n.rhs, vars);
    case Kind::Div: return eval(*n.lhs, vars) / eval(*n.rhs, vars);
    case Kind::Pow: return std::pow(eval(*n.lhs, vars), eval(*n.rhs, vars));
    case Kind::Call: {
        const double a = eval(*n.lhs, vars);
        if (n.func == "exp") return std::exp(a);
        if (n.func == "tanh") return std::tanh(a);
        if (n.func == "sin") return std::sin(a);
        if (n.func == "cos") return std::cos(a);
        if (n.func == "ln") {
            if (!(a > 0.0)) throw DomainError("ln of non-positive argument " + std::to_string(a), a);
            return std::log(a);
        }
        if (!(a >= 0.0)) throw DomainError("sqrt of negative argument " + std::to_string(a), a);
        return std::sqrt(a);
    }
    }
    return 0.0;
}

} // namespace

Expression Expression::compile(std::string_view source) {
    Expression e;
    e.source_ = std::string(source);
    e.root_ = Parser(source).parse();
    return e;
}

double Expression::operator()(double t, Point x, double u) const {
    const double vars[5] = {t, coord(x, 0), coord(x, 1), coord(x, 2), u};
    return eval(*root_, vars);
}

Problem make_custom_problem(const CustomProblemSpec& spec) {
    if (spec.reaction.empty()) throw ConfigError("custom problem: missing key 'problem.f'");
    if (spec.initial.empty() && spec.exact.empty()) throw ConfigError("custom problem: missing key 'problem.u0'");
    if (spec.lower.empty() || spec.lower.size() != spec.upper.size()) {
        throw ConfigError("custom problem: 'mesh.lower' and 'mesh.upper' are required");
    }
    Problem p;
    p.name = spec.name;
    p.diffusion = spec.diffusion;
    p.bc = spec.bc;
    p.lower = spec.lower;
    p.upper = spec.upper;
    p.final_time = spec.final_time;

    const Expression f = Expression::compile(spec.reaction);
    p.reaction = [f](double t, Point x, double u) { return f(t, x, u); };
    if (!spec.exact.empty()) {
        const Expression ex = Expression::compile(spec.exact);
        p.exact = [ex](double t, Point x) { return ex(t, x); };
    }
    if (!spec.initial.empty()) {
        const Expression u0 = Expression::compile(spec.initial);
        p.initial = [u0](Point x) { return u0(0.0, x); };
    } else {
        p.initial = [exact = p.exact](Point x) { return exact(0.0, x); };
    }
    if (spec.bc == BoundaryKind::Dirichlet) {
        if (!spec.boundary.empty()) {
            const Expression g = Expression::compile(spec.boundary);
            p.boundary = [g](double t, Point x) { return g(t, x); };
        } else if (p.exact) {
            p.boundary = p.exact;
        } else {
            throw ConfigError("custom problem: dirichlet bc needs 'problem.g' or 'problem.exact'");
        }
    }
    return p;
}

} // namespace eife
