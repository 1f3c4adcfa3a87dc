#include "levikit/expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>
#include <optional>

#include "levikit/sampling.hpp"

namespace levikit {

// ---------------------------------------------------------------------------
// Construction and access

namespace {

std::shared_ptr<Node> make_node(Op op) {
  auto n = std::make_shared<Node>();
  n->op = op;
  return n;
}

bool is_unary(Op op) {
  switch (op) {
    case Op::neg:
    case Op::conj:
    case Op::re:
    case Op::im:
    case Op::abs2:
    case Op::abs:
      return true;
    default:
      return false;
  }
}

bool is_binary(Op op) {
  return op == Op::add || op == Op::sub || op == Op::mul || op == Op::div;
}

}  // namespace

Expr::Expr() : node_(make_node(Op::literal)) {}

Expr Expr::literal(cplx value) {
  auto n = make_node(Op::literal);
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int index) {
  if (index < 1) throw Error(ErrorCode::invalid_argument, "variable index must start at 1");
  auto n = make_node(Op::variable);
  n->index = index;
  return Expr(std::move(n));
}

Expr Expr::parameter(std::string name) {
  auto n = make_node(Op::parameter);
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr arg) {
  if (!is_unary(op)) throw Error(ErrorCode::invalid_argument, "not a unary operator");
  auto n = make_node(op);
  n->args.push_back(std::move(arg));
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (!is_binary(op)) throw Error(ErrorCode::invalid_argument, "not a binary operator");
  auto n = make_node(op);
  n->args.push_back(std::move(lhs));
  n->args.push_back(std::move(rhs));
  return Expr(std::move(n));
}

Expr Expr::ipow(Expr base, int exponent) {
  auto n = make_node(Op::ipow);
  n->index = exponent;
  n->args.push_back(std::move(base));
  return Expr(std::move(n));
}

Expr Expr::fpow(Expr base, int num, int den, Branch branch) {
  if (den == 0) throw Error(ErrorCode::invalid_argument, "zero denominator in exponent");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const int g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (den == 1) {
    throw Error(ErrorCode::invalid_argument, "fractional exponent reduces to an integer");
  }
  auto n = make_node(Op::fpow);
  n->num = num;
  n->den = den;
  n->branch = branch;
  n->args.push_back(std::move(base));
  return Expr(std::move(n));
}

Expr Expr::rpow(Expr base, double exponent) {
  auto n = make_node(Op::rpow);
  n->exponent = exponent;
  n->args.push_back(std::move(base));
  return Expr(std::move(n));
}

Op Expr::op() const noexcept { return node_->op; }
cplx Expr::value() const noexcept { return node_->value; }
int Expr::index() const noexcept { return node_->index; }
int Expr::num() const noexcept { return node_->num; }
int Expr::den() const noexcept { return node_->den; }
Branch Expr::branch() const noexcept { return node_->branch; }
double Expr::exponent() const noexcept { return node_->exponent; }
const std::string& Expr::name() const noexcept { return node_->name; }
std::size_t Expr::arity() const noexcept { return node_->args.size(); }
const Expr& Expr::arg(std::size_t i) const { return node_->args.at(i); }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  const Node& x = *a.node_;
  const Node& y = *b.node_;
  if (x.op != y.op || x.args.size() != y.args.size()) return false;
  switch (x.op) {
    case Op::literal:
      if (x.value != y.value) return false;
      break;
    case Op::variable:
    case Op::ipow:
      if (x.index != y.index) return false;
      break;
    case Op::parameter:
      if (x.name != y.name) return false;
      break;
    case Op::fpow:
      if (x.num != y.num || x.den != y.den || x.branch != y.branch) return false;
      break;
    case Op::rpow:
      if (x.exponent != y.exponent) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < x.args.size(); ++i) {
    if (!(x.args[i] == y.args[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

class Parser {
 public:
  Parser(std::string_view text, int n, bool allow_parameters)
      : s_(text), n_(n), allow_parameters_(allow_parameters) {}

  Expr run() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(pos_, msg); }
  [[noreturn]] void fail_at(std::size_t at, const std::string& msg) const {
    throw ParseError(at, msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  Expr parse_sum() {
    Expr lhs = parse_term();
    for (;;) {
      const char c = peek();
      if (c == '+') {
        ++pos_;
        lhs = Expr::binary(Op::add, lhs, parse_term());
      } else if (c == '-') {
        ++pos_;
        lhs = Expr::binary(Op::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        lhs = Expr::binary(Op::mul, lhs, parse_factor());
      } else if (c == '/') {
        ++pos_;
        lhs = Expr::binary(Op::div, lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    if (peek() == '-') {
      ++pos_;
      skip_ws();
      // A minus sign directly on an unpowered number literal is part of the literal.
      if (pos_ < s_.size() && (digit(s_[pos_]) || s_[pos_] == '.')) {
        const std::size_t save = pos_;
        const cplx v = parse_number();
        if (peek() != '^') return Expr::literal(-v);
        pos_ = save;
      }
      return Expr::unary(Op::neg, parse_factor());
    }
    Expr base = parse_base();
    if (!consume('^')) return base;
    return parse_exponent(std::move(base));
  }

  Expr parse_exponent(Expr base) {
    const char c = peek();
    if (c == '{') {
      ++pos_;
      skip_ws();
      const std::size_t at = pos_;
      bool negative = consume('-');
      skip_ws();
      if (pos_ >= s_.size() || !(digit(s_[pos_]) || s_[pos_] == '.')) fail("expected real exponent");
      const cplx v = parse_number();
      if (v.imag() != 0.0) fail_at(at, "real exponent must be real");
      expect('}');
      return Expr::rpow(std::move(base), negative ? -v.real() : v.real());
    }
    if (c == '(') {
      ++pos_;
      const std::size_t at = pos_;
      const int num = parse_int();
      if (!consume('/')) fail("expected '/' in fractional exponent");
      const int den = parse_int();
      if (den <= 0) fail_at(at, "exponent denominator must be positive");
      if (!consume(',')) fail_at(at, "fractional power requires a branch annotation");
      skip_ws();
      const std::size_t name_at = pos_;
      const std::string name = read_identifier();
      Branch branch;
      if (name == "principal") {
        branch = Branch::principal;
      } else if (name == "poscut") {
        branch = Branch::poscut;
      } else {
        fail_at(name_at, "unknown branch '" + name + "'");
      }
      expect(')');
      try {
        return Expr::fpow(std::move(base), num, den, branch);
      } catch (const Error& e) {
        fail_at(at, e.what());
      }
    }
    return Expr::ipow(std::move(base), parse_int());
  }

  int parse_int() {
    skip_ws();
    const std::size_t at = pos_;
    bool negative = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    if (pos_ >= s_.size() || !digit(s_[pos_])) fail_at(at, "expected integer");
    int value = 0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), value);
    if (ec != std::errc()) fail_at(at, "integer out of range");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    if (pos_ < s_.size() && (s_[pos_] == '.' || ident_char(s_[pos_]))) {
      fail_at(at, "expected integer");
    }
    return negative ? -value : value;
  }

  // Unsigned decimal literal with optional exponent and optional 'i' suffix.
  cplx parse_number() {
    const std::size_t at = pos_;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == s_.data() + pos_) fail_at(at, "malformed number");
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    if (pos_ < s_.size() && s_[pos_] == 'i' &&
        (pos_ + 1 >= s_.size() || !ident_char(s_[pos_ + 1]))) {
      ++pos_;
      return {0.0, v};
    }
    if (pos_ < s_.size() && ident_char(s_[pos_])) fail_at(at, "malformed number");
    return {v, 0.0};
  }

  std::string read_identifier() {
    const std::size_t start = pos_;
    if (pos_ >= s_.size() || !ident_start(s_[pos_])) fail("expected identifier");
    while (pos_ < s_.size() && ident_char(s_[pos_])) ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }

  // Matches "(re +/- im i)" exactly; restores the position otherwise.
  std::optional<cplx> try_complex_literal() {
    const std::size_t save = pos_;
    auto fail_soft = [&]() -> std::optional<cplx> {
      pos_ = save;
      return std::nullopt;
    };
    if (!consume('(')) return fail_soft();
    skip_ws();
    bool negative = false;
    if (pos_ < s_.size() && s_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    if (pos_ >= s_.size() || !(digit(s_[pos_]) || s_[pos_] == '.')) return fail_soft();
    cplx re;
    try {
      re = parse_number();
    } catch (const ParseError&) {
      return fail_soft();
    }
    if (re.imag() != 0.0) return fail_soft();
    const char sign = peek();
    if (sign != '+' && sign != '-') return fail_soft();
    ++pos_;
    skip_ws();
    if (pos_ >= s_.size() || !(digit(s_[pos_]) || s_[pos_] == '.')) return fail_soft();
    cplx im;
    try {
      im = parse_number();
    } catch (const ParseError&) {
      return fail_soft();
    }
    if (im.real() != 0.0) return fail_soft();
    if (!consume(')')) return fail_soft();
    const double r = negative ? -re.real() : re.real();
    const double i = sign == '-' ? -im.imag() : im.imag();
    return cplx{r, i};
  }

  Expr parse_base() {
    const char c = peek();
    if (c == '\0') fail("unexpected end of input");
    if (c == '(') {
      if (auto lit = try_complex_literal()) return Expr::literal(*lit);
      ++pos_;
      Expr inner = parse_sum();
      expect(')');
      return inner;
    }
    if (digit(c) || c == '.') return Expr::literal(parse_number());
    if (!ident_start(c)) fail("unexpected character '" + std::string(1, c) + "'");

    const std::size_t at = pos_;
    const std::string id = read_identifier();
    if (id == "i") return Expr::literal({0.0, 1.0});
    if (id.size() > 1 && id[0] == 'z' &&
        id.find_first_not_of("0123456789", 1) == std::string::npos) {
      const int index = std::stoi(id.substr(1));
      if (index == 0) fail_at(at, "variable index must start at 1");
      if (index > n_) {
        fail_at(at, "variable index " + std::to_string(index) + " exceeds dimension " +
                        std::to_string(n_));
      }
      return Expr::variable(index);
    }
    static const std::map<std::string, Op, std::less<>> functions = {
        {"conj", Op::conj}, {"re", Op::re}, {"im", Op::im}, {"abs2", Op::abs2}, {"abs", Op::abs}};
    if (auto it = functions.find(id); it != functions.end()) {
      expect('(');
      Expr inner = parse_sum();
      expect(')');
      return Expr::unary(it->second, std::move(inner));
    }
    if (id == "z") fail_at(at, "variable needs an index");
    if (!allow_parameters_) fail_at(at, "unknown identifier '" + id + "'");
    return Expr::parameter(id);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int n_;
  bool allow_parameters_;
};

}  // namespace

Expr parse(std::string_view text, int n, bool allow_parameters) {
  if (n < 0) throw Error(ErrorCode::invalid_argument, "negative dimension");
  return Parser(text, n, allow_parameters).run();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

// 1 = sum, 2 = term, 3 = factor, 4 = base
int level(const Expr& e) {
  switch (e.op()) {
    case Op::add:
    case Op::sub:
      return 1;
    case Op::mul:
    case Op::div:
      return 2;
    case Op::neg:
    case Op::ipow:
    case Op::fpow:
    case Op::rpow:
      return 3;
    case Op::literal: {
      const cplx v = e.value();
      if (v.imag() == 0.0) return std::signbit(v.real()) ? 3 : 4;
      if (v.real() == 0.0) return std::signbit(v.imag()) ? 3 : 4;
      return 4;
    }
    default:
      return 4;
  }
}

std::string raw(const Expr& e);

std::string at_level(const Expr& e, int min_level) {
  std::string s = raw(e);
  if (level(e) < min_level) return "(" + s + ")";
  return s;
}

std::string literal_text(cplx v) {
  if (v.imag() == 0.0) return format_double(v.real());
  if (v.real() == 0.0) {
    if (v.imag() == 1.0) return "i";
    return format_double(v.imag()) + "i";
  }
  const std::string sign = std::signbit(v.imag()) ? " - " : " + ";
  return "(" + format_double(v.real()) + sign + format_double(std::abs(v.imag())) + "i)";
}

std::string raw(const Expr& e) {
  switch (e.op()) {
    case Op::literal:
      return literal_text(e.value());
    case Op::variable:
      return "z" + std::to_string(e.index());
    case Op::parameter:
      return e.name();
    case Op::neg:
      if (e.arg(0).is_literal()) return "-(" + raw(e.arg(0)) + ")";
      return "-" + at_level(e.arg(0), 3);
    case Op::conj:
      return "conj(" + raw(e.arg(0)) + ")";
    case Op::re:
      return "re(" + raw(e.arg(0)) + ")";
    case Op::im:
      return "im(" + raw(e.arg(0)) + ")";
    case Op::abs2:
      return "abs2(" + raw(e.arg(0)) + ")";
    case Op::abs:
      return "abs(" + raw(e.arg(0)) + ")";
    case Op::add:
      return at_level(e.arg(0), 1) + " + " + at_level(e.arg(1), 2);
    case Op::sub:
      return at_level(e.arg(0), 1) + " - " + at_level(e.arg(1), 2);
    case Op::mul:
      return at_level(e.arg(0), 2) + "*" + at_level(e.arg(1), 3);
    case Op::div:
      return at_level(e.arg(0), 2) + "/" + at_level(e.arg(1), 3);
    case Op::ipow:
      return at_level(e.arg(0), 4) + "^" + std::to_string(e.index());
    case Op::fpow:
      return at_level(e.arg(0), 4) + "^(" + std::to_string(e.num()) + "/" +
             std::to_string(e.den()) + "," +
             (e.branch() == Branch::principal ? "principal" : "poscut") + ")";
    case Op::rpow:
      return at_level(e.arg(0), 4) + "^{" + format_double(e.exponent()) + "}";
  }
  return {};
}

}  // namespace

std::string print(const Expr& e) { return raw(e); }

// ---------------------------------------------------------------------------
// Evaluation

cplx branch_pow(cplx w, int num, int den, Branch branch) {
  if (w == cplx{}) {
    if (num > 0) return {};
    throw Error(ErrorCode::division_by_zero, "negative fractional power of zero");
  }
  double arg = std::arg(w);
  if (branch == Branch::principal) {
    if (w.imag() == 0.0 && w.real() < 0.0) {
      throw Error(ErrorCode::branch_cut, "principal power evaluated on (-inf, 0]");
    }
  } else {
    if (w.imag() == 0.0 && w.real() > 0.0) {
      throw Error(ErrorCode::branch_cut, "poscut power evaluated on [0, inf)");
    }
    if (arg <= 0.0) arg += 2.0 * M_PI;
  }
  const double q = static_cast<double>(num) / static_cast<double>(den);
  return std::polar(std::pow(std::abs(w), q), arg * q);
}

namespace {

cplx int_pow(cplx base, int k) {
  if (k < 0) {
    if (std::abs(base) < kDivisionEpsilon) {
      throw Error(ErrorCode::division_by_zero, "negative power of zero");
    }
    return cplx{1.0, 0.0} / int_pow(base, -k);
  }
  cplx result{1.0, 0.0};
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

cplx eval_node(const Expr& e, std::span<const cplx> z, const ParamValues* params) {
  switch (e.op()) {
    case Op::literal:
      return e.value();
    case Op::variable: {
      const auto i = static_cast<std::size_t>(e.index());
      if (i > z.size()) {
        throw Error(ErrorCode::invalid_argument, "point has dimension " + std::to_string(z.size()) +
                                                     " but expression uses z" +
                                                     std::to_string(i));
      }
      return z[i - 1];
    }
    case Op::parameter: {
      if (params != nullptr) {
        if (auto it = params->find(e.name()); it != params->end()) return it->second;
      }
      throw Error(ErrorCode::invalid_argument, "unbound parameter '" + e.name() + "'");
    }
    case Op::neg:
      return -eval_node(e.arg(0), z, params);
    case Op::conj:
      return std::conj(eval_node(e.arg(0), z, params));
    case Op::re:
      return eval_node(e.arg(0), z, params).real();
    case Op::im:
      return eval_node(e.arg(0), z, params).imag();
    case Op::abs2:
      return std::norm(eval_node(e.arg(0), z, params));
    case Op::abs:
      return std::abs(eval_node(e.arg(0), z, params));
    case Op::add:
      return eval_node(e.arg(0), z, params) + eval_node(e.arg(1), z, params);
    case Op::sub:
      return eval_node(e.arg(0), z, params) - eval_node(e.arg(1), z, params);
    case Op::mul:
      return eval_node(e.arg(0), z, params) * eval_node(e.arg(1), z, params);
    case Op::div: {
      const cplx num = eval_node(e.arg(0), z, params);
      const cplx den = eval_node(e.arg(1), z, params);
      if (std::abs(den) < kDivisionEpsilon) throw Error(ErrorCode::division_by_zero, "division by zero");
      return num / den;
    }
    case Op::ipow:
      return int_pow(eval_node(e.arg(0), z, params), e.index());
    case Op::fpow:
      return branch_pow(eval_node(e.arg(0), z, params), e.num(), e.den(), e.branch());
    case Op::rpow: {
      const cplx b = eval_node(e.arg(0), z, params);
      if (std::abs(b.imag()) > kRealTolerance * (1.0 + std::abs(b.real())) ||
          b.real() < -kRealTolerance) {
        throw Error(ErrorCode::non_real, "real power of a base that is not a nonnegative real");
      }
      const double base = std::max(b.real(), 0.0);
      if (base == 0.0 && e.exponent() < 0.0) {
        throw Error(ErrorCode::division_by_zero, "negative real power of zero");
      }
      return std::pow(base, e.exponent());
    }
  }
  return {};
}

}  // namespace

cplx eval(const Expr& e, std::span<const cplx> z, const ParamValues* params) {
  return eval_node(e, z, params);
}

// ---------------------------------------------------------------------------
// Folding constructors

namespace fold {

Expr add(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) return Expr::literal(a.value() + b.value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return Expr::binary(Op::add, a, b);
}

Expr sub(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) return Expr::literal(a.value() - b.value());
  if (b.is_zero()) return a;
  if (a.is_zero()) return neg(b);
  return Expr::binary(Op::sub, a, b);
}

Expr mul(const Expr& a, const Expr& b) {
  if (a.is_literal() && b.is_literal()) return Expr::literal(a.value() * b.value());
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return Expr::binary(Op::mul, a, b);
}

Expr div(const Expr& a, const Expr& b) {
  if (a.is_zero()) return Expr();
  if (b.is_one()) return a;
  if (a.is_literal() && b.is_literal() && b.value() != cplx{}) {
    return Expr::literal(a.value() / b.value());
  }
  return Expr::binary(Op::div, a, b);
}

Expr neg(const Expr& a) {
  if (a.is_literal()) return Expr::literal(-a.value());
  if (a.op() == Op::neg) return a.arg(0);
  return Expr::unary(Op::neg, a);
}

Expr conj(const Expr& a) {
  if (a.is_literal()) return Expr::literal(std::conj(a.value()));
  if (a.op() == Op::conj) return a.arg(0);
  return Expr::unary(Op::conj, a);
}

Expr ipow(const Expr& base, int k) {
  if (k == 0) return Expr::literal(1.0);
  if (k == 1) return base;
  if (base.is_literal() && (k > 0 || base.value() != cplx{})) {
    return Expr::literal(int_pow(base.value(), k));
  }
  return Expr::ipow(base, k);
}

}  // namespace fold

// ---------------------------------------------------------------------------
// Wirtinger derivatives

namespace {

Wirtinger other(Wirtinger k) {
  return k == Wirtinger::holomorphic ? Wirtinger::antiholomorphic : Wirtinger::holomorphic;
}

class Differentiator {
 public:
  explicit Differentiator(int j) : j_(j) {}

  Expr d(const Expr& e, Wirtinger kind) {
    switch (e.op()) {
      case Op::literal:
      case Op::parameter:
        return Expr();
      case Op::variable:
        return Expr::literal(e.index() == j_ && kind == Wirtinger::holomorphic ? 1.0 : 0.0);
      case Op::neg:
        return fold::neg(d(e.arg(0), kind));
      case Op::conj:
        return d_conj(e.arg(0), kind);
      case Op::re: {
        // re(u) = (u + conj u) / 2
        const Expr& u = e.arg(0);
        return fold::mul(Expr::literal(0.5), fold::add(d(u, kind), d_conj(u, kind)));
      }
      case Op::im: {
        // im(u) = (u - conj u) / (2i)
        const Expr& u = e.arg(0);
        return fold::mul(Expr::literal(cplx{0.0, -0.5}), fold::sub(d(u, kind), d_conj(u, kind)));
      }
      case Op::abs2: {
        const Expr& u = e.arg(0);
        return fold::add(fold::mul(d(u, kind), fold::conj(u)), fold::mul(u, d_conj(u, kind)));
      }
      case Op::abs: {
        // |u| = (u conj u)^(1/2); defined where u != 0
        const Expr& u = e.arg(0);
        const Expr numer =
            fold::add(fold::mul(d(u, kind), fold::conj(u)), fold::mul(u, d_conj(u, kind)));
        return fold::div(numer, fold::mul(Expr::literal(2.0), e));
      }
      case Op::add:
        return fold::add(d(e.arg(0), kind), d(e.arg(1), kind));
      case Op::sub:
        return fold::sub(d(e.arg(0), kind), d(e.arg(1), kind));
      case Op::mul: {
        const Expr& a = e.arg(0);
        const Expr& b = e.arg(1);
        return fold::add(fold::mul(d(a, kind), b), fold::mul(a, d(b, kind)));
      }
      case Op::div: {
        const Expr& a = e.arg(0);
        const Expr& b = e.arg(1);
        const Expr da = d(a, kind);
        const Expr db = d(b, kind);
        if (db.is_zero()) return fold::div(da, b);
        return fold::div(fold::sub(fold::mul(da, b), fold::mul(a, db)), fold::ipow(b, 2));
      }
      case Op::ipow: {
        const int k = e.index();
        const Expr du = d(e.arg(0), kind);
        if (k == 0 || du.is_zero()) return Expr();
        return fold::mul(fold::mul(Expr::literal(static_cast<double>(k)), fold::ipow(e.arg(0), k - 1)),
                         du);
      }
      case Op::fpow: {
        const Expr du = d(e.arg(0), kind);
        if (du.is_zero()) return Expr();
        through_branch_ = true;
        const int p = e.num();
        const int q = e.den();
        const Expr lowered = Expr::fpow(e.arg(0), p - q, q, e.branch());
        return fold::mul(fold::mul(Expr::literal(static_cast<double>(p) / q), lowered), du);
      }
      case Op::rpow: {
        const Expr du = d(e.arg(0), kind);
        if (du.is_zero()) return Expr();
        const double r = e.exponent();
        const Expr lowered = (r == 1.0) ? Expr::literal(1.0) : Expr::rpow(e.arg(0), r - 1.0);
        return fold::mul(fold::mul(Expr::literal(r), lowered), du);
      }
    }
    return Expr();
  }

  bool through_branch() const { return through_branch_; }

 private:
  // d(conj u) = conj(d_other(u))
  Expr d_conj(const Expr& u, Wirtinger kind) { return fold::conj(d(u, other(kind))); }

  int j_;
  bool through_branch_ = false;
};

}  // namespace

Derivative wirtinger(const Expr& e, int j, Wirtinger kind) {
  if (j < 1) throw Error(ErrorCode::invalid_argument, "variable index must start at 1");
  Differentiator diff(j);
  Derivative out;
  out.expr = diff.d(e, kind);
  out.through_branch = diff.through_branch();
  return out;
}

// ---------------------------------------------------------------------------
// Queries

int max_variable(const Expr& e) {
  if (e.op() == Op::variable) return e.index();
  int m = 0;
  for (std::size_t i = 0; i < e.arity(); ++i) m = std::max(m, max_variable(e.arg(i)));
  return m;
}

bool depends_on_variables(const Expr& e) { return max_variable(e) > 0; }

bool has_parameters(const Expr& e) {
  if (e.op() == Op::parameter) return true;
  for (std::size_t i = 0; i < e.arity(); ++i) {
    if (has_parameters(e.arg(i))) return true;
  }
  return false;
}

std::size_t node_count(const Expr& e) {
  std::size_t count = 1;
  for (std::size_t i = 0; i < e.arity(); ++i) count += node_count(e.arg(i));
  return count;
}

Expr bind(const Expr& e, const ParamValues& params) {
  switch (e.op()) {
    case Op::parameter: {
      auto it = params.find(e.name());
      if (it == params.end()) {
        throw Error(ErrorCode::invalid_argument, "unbound parameter '" + e.name() + "'");
      }
      return Expr::literal(it->second);
    }
    case Op::literal:
    case Op::variable:
      return e;
    default:
      break;
  }
  std::vector<Expr> args;
  for (std::size_t i = 0; i < e.arity(); ++i) args.push_back(bind(e.arg(i), params));
  const bool constant = std::all_of(args.begin(), args.end(), [](const Expr& a) { return a.is_literal(); });
  Expr rebuilt;
  switch (e.op()) {
    case Op::add: return fold::add(args[0], args[1]);
    case Op::sub: return fold::sub(args[0], args[1]);
    case Op::mul: return fold::mul(args[0], args[1]);
    case Op::div: return fold::div(args[0], args[1]);
    case Op::neg: return fold::neg(args[0]);
    case Op::conj: return fold::conj(args[0]);
    case Op::ipow: return fold::ipow(args[0], e.index());
    case Op::fpow: rebuilt = Expr::fpow(args[0], e.num(), e.den(), e.branch()); break;
    case Op::rpow: rebuilt = Expr::rpow(args[0], e.exponent()); break;
    default: rebuilt = Expr::unary(e.op(), args[0]); break;
  }
  if (constant) return Expr::literal(eval(rebuilt, {}));
  return rebuilt;
}

Expr substitute(const Expr& e, std::span<const Expr> replacements) {
  switch (e.op()) {
    case Op::variable: {
      const auto j = static_cast<std::size_t>(e.index());
      if (j > replacements.size()) {
        throw Error(ErrorCode::invalid_argument, "no replacement for z" + std::to_string(j));
      }
      return replacements[j - 1];
    }
    case Op::literal:
    case Op::parameter:
      return e;
    case Op::ipow:
      return Expr::ipow(substitute(e.arg(0), replacements), e.index());
    case Op::fpow:
      return Expr::fpow(substitute(e.arg(0), replacements), e.num(), e.den(), e.branch());
    case Op::rpow:
      return Expr::rpow(substitute(e.arg(0), replacements), e.exponent());
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
      return Expr::binary(e.op(), substitute(e.arg(0), replacements), substitute(e.arg(1), replacements));
    default:
      return Expr::unary(e.op(), substitute(e.arg(0), replacements));
  }
}

bool uses_variable(const Expr& e, int j) {
  if (e.op() == Op::variable) return e.index() == j;
  for (std::size_t i = 0; i < e.arity(); ++i) {
    if (uses_variable(e.arg(i), j)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Domains

DomainCheck validate_domain(const DomainSpec& d, int samples, std::uint64_t seed) {
  if (d.n < 1) throw Error(ErrorCode::invalid_argument, "domain dimension must be positive");
  if (max_variable(d.rho) > d.n) {
    throw Error(ErrorCode::invalid_argument, "defining function uses a variable beyond z" +
                                                 std::to_string(d.n));
  }
  if (has_parameters(d.rho)) {
    throw Error(ErrorCode::invalid_argument, "defining function has unbound parameters");
  }
  if (static_cast<int>(d.anchor.size()) != d.n) {
    throw Error(ErrorCode::invalid_argument, "anchor dimension mismatch");
  }
  DomainCheck out;
  const cplx at_anchor = eval(d.rho, d.anchor);
  out.anchor_value = at_anchor.real();
  if (std::abs(at_anchor.imag()) > kRealTolerance * (1.0 + std::abs(at_anchor))) {
    throw Error(ErrorCode::non_real, "defining function is not real at the anchor");
  }
  if (!(at_anchor.real() <= -d.interior_margin)) {
    throw Error(ErrorCode::invalid_argument, "anchor is not strictly interior (rho = " +
                                                 std::to_string(at_anchor.real()) + ")");
  }
  for (int s = 0; s < samples; ++s) {
    Rng rng = make_stream(seed, "validate_domain", static_cast<std::uint64_t>(s));
    Point z = d.anchor;
    for (auto& c : z) c += cplx{uniform(rng, -1.5, 1.5), uniform(rng, -1.5, 1.5)};
    cplx v;
    try {
      v = eval(d.rho, z);
    } catch (const Error&) {
      continue;
    }
    const double ratio = std::abs(v.imag()) / (1.0 + std::abs(v));
    if (ratio > out.max_imag_ratio) {
      out.max_imag_ratio = ratio;
      out.worst_point = z;
    }
  }
  if (out.max_imag_ratio > kRealTolerance) {
    throw Error(ErrorCode::non_real, "defining function of '" + d.name + "' is not real-valued");
  }
  return out;
}

}  // namespace levikit
