#pragma once

// Expression trees over z_1..z_n and their conjugates.
//
// Trees are immutable and freely shared. The parser builds trees exactly as
// written (no folding), so print/parse is the identity on structure. The
// differentiator and the `fold` helpers do constant folding only.

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace levikit {

using cplx = std::complex<double>;
using Point = std::vector<cplx>;
using ParamValues = std::map<std::string, cplx, std::less<>>;

enum class ErrorCode {
  invalid_argument,
  parse,
  division_by_zero,
  branch_cut,
  non_real,
  degenerate_gradient,
  no_boundary,
  not_found,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t position, const std::string& what)
      : Error(ErrorCode::parse, what + " at position " + std::to_string(position)),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// Branch of a fractional power w^(p/q).
/// principal: cut along (-inf, 0], arg in (-pi, pi].
/// poscut:    cut along [0, +inf), arg in (0, 2pi).
enum class Branch : std::uint8_t { principal, poscut };

enum class Op : std::uint8_t {
  literal,
  variable,
  parameter,
  neg,
  conj,
  re,
  im,
  abs2,
  abs,
  add,
  sub,
  mul,
  div,
  ipow,  // integer power
  fpow,  // rational power with branch
  rpow,  // real power of a nonnegative real base
};

struct Node;

class Expr {
 public:
  Expr();  // literal 0

  static Expr literal(cplx value);
  static Expr variable(int index);
  static Expr parameter(std::string name);
  static Expr unary(Op op, Expr arg);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  static Expr ipow(Expr base, int exponent);
  static Expr fpow(Expr base, int num, int den, Branch branch);
  static Expr rpow(Expr base, double exponent);

  Op op() const noexcept;
  cplx value() const noexcept;
  int index() const noexcept;  // variable index, or integer exponent for ipow
  int num() const noexcept;
  int den() const noexcept;
  Branch branch() const noexcept;
  double exponent() const noexcept;
  const std::string& name() const noexcept;
  std::size_t arity() const noexcept;
  const Expr& arg(std::size_t i) const;

  bool is_literal() const noexcept { return op() == Op::literal; }
  bool is_zero() const noexcept { return is_literal() && value() == cplx{}; }
  bool is_one() const noexcept { return is_literal() && value() == cplx{1.0, 0.0}; }

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Node {
  Op op = Op::literal;
  cplx value{};
  int index = 0;
  int num = 0;
  int den = 1;
  Branch branch = Branch::principal;
  double exponent = 0.0;
  std::string name;
  std::vector<Expr> args;
};

/// Parses `text` with variables z1..zn. Parameter names are accepted only when
/// `allow_parameters` is set.
Expr parse(std::string_view text, int n, bool allow_parameters = false);

std::string print(const Expr& e);

/// Evaluates `e` at `z`. Parameters are looked up in `params`.
cplx eval(const Expr& e, std::span<const cplx> z, const ParamValues* params = nullptr);

/// Evaluates w^(num/den) on the given branch; throws on the cut.
cplx branch_pow(cplx w, int num, int den, Branch branch);

enum class Wirtinger : std::uint8_t { holomorphic, antiholomorphic };

struct Derivative {
  Expr expr;
  /// Set when the derivative passed through a fractional power with a
  /// non-constant base, so the result inherits that base's branch cut.
  bool through_branch = false;
};

/// d e / d z_j (holomorphic) or d e / d conj(z_j) (antiholomorphic); z_j and
/// conj(z_j) are independent symbols. `j` is 1-based.
Derivative wirtinger(const Expr& e, int j, Wirtinger kind);

/// Largest variable index referenced, 0 if none.
int max_variable(const Expr& e);
bool depends_on_variables(const Expr& e);
bool has_parameters(const Expr& e);
std::size_t node_count(const Expr& e);

/// Replaces parameter nodes by literals and folds constants.
Expr bind(const Expr& e, const ParamValues& params);

/// Replaces z_j by replacements[j-1] (no folding).
Expr substitute(const Expr& e, std::span<const Expr> replacements);

bool uses_variable(const Expr& e, int j);

/// Folding constructors used by the differentiator.
namespace fold {
Expr add(const Expr& a, const Expr& b);
Expr sub(const Expr& a, const Expr& b);
Expr mul(const Expr& a, const Expr& b);
Expr div(const Expr& a, const Expr& b);
Expr neg(const Expr& a);
Expr conj(const Expr& a);
Expr ipow(const Expr& base, int k);
}  // namespace fold

/// A domain {rho < 0} in C^n with an interior anchor point.
struct DomainSpec {
  std::string name;
  int n = 0;
  Expr rho;
  Point anchor;
  double interior_margin = 1e-6;  // rho(anchor) <= -interior_margin
  std::vector<Point> exceptional_points;
  std::string provenance;
};

inline constexpr double kRealTolerance = 1e-12;
inline constexpr double kDivisionEpsilon = 1e-300;

struct DomainCheck {
  double max_imag_ratio = 0.0;  // max |Im rho| / (1 + |rho|)
  Point worst_point;
  double anchor_value = 0.0;
};

/// Checks reality of rho on `samples` points in a box around the anchor and
/// strict interiority of the anchor. Throws Error(invalid_argument) on failure.
DomainCheck validate_domain(const DomainSpec& d, int samples = 256, std::uint64_t seed = 7);

}  // namespace levikit
