#include "levikit/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <map>
#include <numbers>
#include <sstream>

namespace levikit::catalog {

namespace {

std::string fmt(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

Expr var(int j) { return Expr::variable(j); }
Expr lit(double v) { return Expr::literal(v); }
Expr add(Expr a, Expr b) { return Expr::binary(Op::add, std::move(a), std::move(b)); }
Expr mul(Expr a, Expr b) { return Expr::binary(Op::mul, std::move(a), std::move(b)); }

DomainSpec make_domain(std::string name, int n, std::string_view rho, std::string provenance) {
  DomainSpec d;
  d.name = std::move(name);
  d.n = n;
  d.rho = parse(rho, n);
  d.anchor.assign(static_cast<std::size_t>(n), cplx{});
  d.provenance = std::move(provenance);
  return d;
}

HoloMap make_map(std::string name, int n, std::vector<std::string_view> components,
                 std::vector<ParamDecl> params, std::string provenance) {
  HoloMap m;
  m.name = std::move(name);
  m.n_in = n;
  m.n_out = static_cast<int>(components.size());
  for (auto c : components) m.components.push_back(parse(c, n, !params.empty()));
  m.params = std::move(params);
  m.provenance = std::move(provenance);
  validate_map(m);
  return m;
}

constexpr std::string_view kTheorem2Third =
    "8*abs2(z1 - 1)*(z2^2/(z1 - 1) - 3/2*abs2(z2)/abs(z1 - 1) + conj(z2)^2/(conj(z1) - 1))^2";

}  // namespace

DomainSpec theorem1_domain(int n) {
  if (n < 3) throw Error(ErrorCode::invalid_argument, "theorem1_domain needs n >= 3");
  std::string rho;
  for (int j = 1; j <= n - 2; ++j) rho += "abs2(z" + std::to_string(j) + ") + ";
  const std::string a = "z" + std::to_string(n - 1);
  const std::string b = "z" + std::to_string(n);
  rho += "abs2(" + a + ")^2 + abs2(" + b + ")^2 + (conj(" + a + ")*" + b + " + conj(" + b + ")*" + a + ")^2 - 1";
  auto d = make_domain(n == 3 ? "thm1" : "thm1_n" + std::to_string(n), n, rho,
                       "bounded circular domain with real-analytic boundary whose automorphism group is "
                       "non-compact; pseudoconvex, with Levi-flat circle (e^{i alpha}, 0, 0)");
  validate_domain(d);
  return d;
}

HoloMap theorem1_subgroup() {
  return make_map("thm1_subgroup", 3,
                  {"(z1 - a)/(1 - conj(a)*z1)",
                   "(1 - abs2(a))^(1/4,principal)*z2/(1 - conj(a)*z1)^(1/2,principal)",
                   "(1 - abs2(a))^(1/4,principal)*z3/(1 - conj(a)*z1)^(1/2,principal)"},
                  {ParamDecl{"a", ParamDecl::Kind::disc, 0.0, 1.0}},
                  "non-compact disc subgroup of automorphisms, |a| < 1");
}

Identity theorem1_identity() {
  return {parse("abs2(1 - conj(a)*z1)", 3, true), parse("1 - abs2(a)", 3, true)};
}

LinearGenerators theorem1_linear_generators() {
  LinearGenerators g;
  g.swap = make_map("thm1_swap", 3, {"z1", "z3", "z2"}, {}, "linear automorphism permuting z2 and z3");
  g.sign = make_map("thm1_sign", 3, {"z1", "z2", "-z3"}, {}, "linear automorphism z3 -> -z3");
  g.circles = TorusAction{3, {{1, 0, 0}, {0, 1, 1}}};
  validate_action(g.circles);
  return g;
}

DomainSpec theorem2_domain() {
  auto d = make_domain("thm2", 2, "abs2(z1) + abs2(z2)^2 + " + std::string(kTheorem2Third) + " - 1",
                       "bounded non-pseudoconvex domain, real-analytic boundary except at (1, 0), "
                       "non-compact Aut_0");
  d.exceptional_points.push_back({cplx{1.0, 0.0}, cplx{}});
  validate_domain(d);
  return d;
}

HoloMap theorem2_subgroup() {
  return make_map("thm2_subgroup", 2,
                  {"(z1 - a)/(1 - a*z1)", "(1 - a^2)^(1/4,principal)*z2/(1 - a*z1)^(1/2,principal)"},
                  {ParamDecl{"a", ParamDecl::Kind::interval, -1.0, 1.0}},
                  "real one-parameter subgroup of automorphisms, a in (-1, 1)");
}

Identity theorem2_identity() {
  return {parse("abs2(1 - a*z1)", 2, true), parse("1 - a^2", 2, true)};
}

HoloMap theorem2_retraction() {
  return make_map("thm2_retraction", 2, {"z1", "tau*z2"}, {ParamDecl{"tau", ParamDecl::Kind::closed, 0.0, 1.0}},
                  "retraction (z1, tau z2), 0 <= tau <= 1, onto the unit disc in z1");
}

DomainSpec theorem2_unbounded() {
  auto d = make_domain("thm2_unbounded", 2,
                       "re(z1) + 1/4*abs2(z2)^2 + 2*(z2^2 - 3/2*abs2(z2) + conj(z2)^2)^2",
                       "unbounded realization; boundary point (-3/4, 1) where the Levi form is negative");
  d.anchor = {cplx{-1.0, 0.0}, cplx{}};
  validate_domain(d);
  return d;
}

HoloMap cayley_transform() {
  return make_map("cayley", 2, {"(z1 + 1)/(z1 - 1)", "2^(1/2,principal)*z2/(z1 - 1)^(1/2,poscut)"}, {},
                  "transform of the bounded domain onto its unbounded realization");
}

Expr theorem2_third_term() { return parse(kTheorem2Third, 2); }

Expr remark_default_q(int m) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "m must be positive");
  const std::string zm = m == 1 ? "z2" : "z2^" + std::to_string(m);
  const std::string cm = m == 1 ? "conj(z2)" : "conj(z2)^" + std::to_string(m);
  std::string am;
  if (m == 2) {
    am = "abs2(z2)";
  } else if (m % 2 == 0) {
    am = "abs2(z2)^" + std::to_string(m / 2);
  } else {
    am = m == 1 ? "abs(z2)" : "abs(z2)^" + std::to_string(m);
  }
  return parse("2*(" + zm + " - 3/2*" + am + " + " + cm + ")^2", 2);
}

RemarkFamily remark_family(int m, const Expr& Q, double c) {
  if (m < 1 || m > 32) throw Error(ErrorCode::invalid_argument, "m must be in 1..32");
  if (!(c > 0.0) || !std::isfinite(c)) throw Error(ErrorCode::invalid_argument, "scale c must be positive");
  if (uses_variable(Q, 1) || max_variable(Q) > 2 || has_parameters(Q)) {
    throw Error(ErrorCode::invalid_argument, "Q must depend on z2 only");
  }

  constexpr int kCircle = 720;
  const double deg = 2.0 * m;
  for (int k = 0; k < kCircle; ++k) {
    const cplx w = std::polar(1.0, 2.0 * std::numbers::pi * k / kCircle);
    const Point z{cplx{}, w};
    const cplx q = eval(Q, z);
    if (std::abs(q.imag()) > kRealTolerance * (1.0 + std::abs(q))) {
      throw Error(ErrorCode::invalid_argument, "Q is not real-valued");
    }
    if (q.real() < -kRealTolerance) throw Error(ErrorCode::invalid_argument, "Q is negative on |z2| = 1");
    for (double r : {0.5, 2.0}) {
      const Point zr{cplx{}, r * w};
      const double scale = std::pow(r, deg);
      if (std::abs(eval(Q, zr) - scale * q) > 1e-9 * scale * (1.0 + std::abs(q))) {
        throw Error(ErrorCode::invalid_argument, "Q is not homogeneous of degree 2m");
      }
    }
  }

  Expr p = mul(lit(c), m == 1 ? Expr::unary(Op::abs2, var(2)) : Expr::ipow(Expr::unary(Op::abs2, var(2)), m));
  if (!Q.is_zero()) p = add(p, Q);

  RemarkFamily out;
  out.domain.name = "remark5_m" + std::to_string(m);
  out.domain.n = 2;
  out.domain.rho = add(Expr::unary(Op::re, var(1)), p);
  out.domain.anchor = {cplx{-1.0, 0.0}, cplx{}};
  out.domain.provenance =
      "unbounded model Re z1 + P(z2) < 0 with P = c|z2|^(2m) + Q, Q homogeneous and non-negative";
  validate_domain(out.domain);

  const Expr levi = wirtinger(wirtinger(p, 2, Wirtinger::holomorphic).expr, 2, Wirtinger::antiholomorphic).expr;
  out.min_levi = std::numeric_limits<double>::infinity();
  for (int k = 0; k < kCircle; ++k) {
    const Point z{cplx{}, std::polar(1.0, 2.0 * std::numbers::pi * (k + 0.5) / kCircle)};
    out.min_levi = std::min(out.min_levi, eval(levi, z).real());
  }
  out.non_plurisubharmonic = out.min_levi < -1e-9;
  return out;
}

HoloMap remark_transform(int m, double scale) {
  if (m < 1 || m > 32) throw Error(ErrorCode::invalid_argument, "m must be in 1..32");
  if (!(scale > 0.0) || !std::isfinite(scale)) throw Error(ErrorCode::invalid_argument, "scale must be positive");
  HoloMap t;
  t.name = "remark5_transform_m" + std::to_string(m);
  t.n_in = 2;
  t.n_out = 2;
  const Expr shifted = Expr::binary(Op::sub, var(1), lit(1.0));
  const Expr root = m == 1 ? shifted : Expr::fpow(shifted, 1, m, Branch::poscut);
  t.components = {Expr::binary(Op::div, add(var(1), lit(1.0)), shifted),
                  Expr::binary(Op::div, mul(lit(scale), var(2)), root)};
  t.provenance = "generalized transform z2 -> c z2 / (z1 - 1)^(1/m) onto the unbounded model";
  validate_map(t);
  return t;
}

DomainSpec remark_pullback(const DomainSpec& model, const HoloMap& transform) {
  if (model.n != 2 || transform.n_in != 2 || transform.n_out != 2 || !transform.params.empty()) {
    throw Error(ErrorCode::invalid_argument, "pullback needs a parameter-free map C^2 -> C^2");
  }
  DomainSpec d;
  d.name = model.name + "_pullback";
  d.n = 2;
  d.rho = mul(Expr::unary(Op::abs2, Expr::binary(Op::sub, var(1), lit(1.0))),
              substitute(model.rho, transform.components));
  d.anchor = {cplx{}, cplx{}};
  d.exceptional_points.push_back({cplx{1.0, 0.0}, cplx{}});
  d.provenance = "bounded-side pullback of " + model.name + " through " + transform.name;
  validate_domain(d);
  return d;
}

DomainSpec ellipsoid(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw Error(ErrorCode::invalid_argument, "alpha must be positive");
  DomainSpec d;
  d.name = "ellipsoid_" + fmt(alpha);
  d.n = 2;
  const Expr a2 = Expr::unary(Op::abs2, var(2));
  Expr term;
  if (alpha == 1.0) {
    term = a2;
  } else if (alpha == std::floor(alpha) && alpha <= 64.0) {
    term = Expr::ipow(a2, static_cast<int>(alpha));
  } else {
    term = Expr::rpow(a2, alpha);
  }
  d.rho = Expr::binary(Op::sub, add(Expr::unary(Op::abs2, var(1)), term), lit(1.0));
  d.anchor = {cplx{}, cplx{}};
  d.provenance = "complex ellipsoid |z1|^2 + |z2|^(2 alpha) < 1";
  validate_domain(d);
  return d;
}

DomainSpec unit_ball(int n) {
  if (n < 1 || n > 64) throw Error(ErrorCode::invalid_argument, "ball dimension must be in 1..64");
  Expr rho = Expr::unary(Op::abs2, var(1));
  for (int j = 2; j <= n; ++j) rho = add(rho, Expr::unary(Op::abs2, var(j)));
  DomainSpec d;
  d.name = "ball_" + std::to_string(n);
  d.n = n;
  d.rho = Expr::binary(Op::sub, rho, lit(1.0));
  d.anchor.assign(static_cast<std::size_t>(n), cplx{});
  d.provenance = "unit ball";
  return d;
}

HoloMap identity_map(int n) {
  if (n < 1 || n > 64) throw Error(ErrorCode::invalid_argument, "dimension must be in 1..64");
  HoloMap m;
  m.name = "identity_" + std::to_string(n);
  m.n_in = m.n_out = n;
  for (int j = 1; j <= n; ++j) m.components.push_back(var(j));
  m.provenance = "identity";
  return m;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::pair<std::string_view, std::string_view> split_word(std::string_view s) {
  s = trim(s);
  const auto sp = s.find_first_of(" \t");
  if (sp == std::string_view::npos) return {s, {}};
  return {s.substr(0, sp), trim(s.substr(sp))};
}

double to_double(std::string_view s, const char* what) {
  s = trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::parse, std::string("malformed ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

int to_int(std::string_view s, const char* what) {
  s = trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error(ErrorCode::parse, std::string("malformed ") + what + " '" + std::string(s) + "'");
  }
  return v;
}

struct Block {
  enum class Kind { domain, map } kind = Kind::domain;
  std::string name;
  int n = 0;
  int n_out = -1;
  std::string rho;
  std::optional<Point> anchor;
  std::optional<double> margin;
  std::vector<Point> exceptional;
  std::vector<ParamDecl> params;
  std::vector<std::string> components;
  std::string provenance;
  int line = 0;
};

Definition finish(const Block& b) {
  if (b.n < 1) throw Error(ErrorCode::parse, "missing or invalid 'dim'");
  if (b.kind == Block::Kind::domain) {
    if (b.rho.empty()) throw Error(ErrorCode::parse, "domain '" + b.name + "' has no 'rho'");
    DomainSpec d;
    d.name = b.name;
    d.n = b.n;
    d.rho = parse(b.rho, b.n);
    d.anchor = b.anchor.value_or(Point(static_cast<std::size_t>(b.n)));
    if (d.anchor.size() != static_cast<std::size_t>(b.n)) throw Error(ErrorCode::parse, "anchor dimension mismatch");
    if (b.margin) d.interior_margin = *b.margin;
    for (const auto& p : b.exceptional) {
      if (p.size() != static_cast<std::size_t>(b.n)) throw Error(ErrorCode::parse, "exceptional point dimension mismatch");
    }
    d.exceptional_points = b.exceptional;
    d.provenance = b.provenance;
    validate_domain(d);
    return d;
  }
  HoloMap m;
  m.name = b.name;
  m.n_in = b.n;
  m.n_out = b.n_out < 0 ? static_cast<int>(b.components.size()) : b.n_out;
  if (static_cast<int>(b.components.size()) != m.n_out) {
    throw Error(ErrorCode::parse, "map '" + b.name + "' needs " + std::to_string(m.n_out) + " components");
  }
  for (const auto& c : b.components) m.components.push_back(parse(c, b.n, true));
  m.params = b.params;
  m.provenance = b.provenance;
  validate_map(m);
  return m;
}

ParamDecl parse_param(std::string_view rest) {
  auto [name, tail] = split_word(rest);
  auto [kind, bounds] = split_word(tail);
  ParamDecl p;
  p.name = std::string(name);
  if (p.name.empty()) throw Error(ErrorCode::parse, "param needs a name");
  if (kind == "disc") {
    p.kind = ParamDecl::Kind::disc;
    p.hi = to_double(bounds, "disc radius");
    if (!(p.hi > 0.0)) throw Error(ErrorCode::parse, "disc radius must be positive");
  } else if (kind == "interval" || kind == "closed") {
    p.kind = kind == "interval" ? ParamDecl::Kind::interval : ParamDecl::Kind::closed;
    auto [lo, hi] = split_word(bounds);
    p.lo = to_double(lo, "lower bound");
    p.hi = to_double(hi, "upper bound");
    if (!(p.lo < p.hi)) throw Error(ErrorCode::parse, "need lower < upper");
  } else if (kind == "real") {
    p.kind = ParamDecl::Kind::real;
  } else {
    throw Error(ErrorCode::parse, "unknown parameter kind '" + std::string(kind) + "'");
  }
  return p;
}

}  // namespace

std::vector<Definition> parse_definitions(std::string_view text) {
  std::vector<Definition> out;
  std::optional<Block> current;
  auto close = [&]() {
    if (!current) return;
    try {
      out.push_back(finish(*current));
    } catch (const Error& e) {
      throw Error(e.code(), "definition at line " + std::to_string(current->line) + ": " + e.what());
    }
    current.reset();
  };

  int line_no = 0;
  std::size_t at = 0;
  while (at <= text.size()) {
    const auto nl = text.find('\n', at);
    std::string_view line = text.substr(at, nl == std::string_view::npos ? std::string_view::npos : nl - at);
    at = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto [key, rest] = split_word(line);
    try {
      if (key == "domain" || key == "map") {
        close();
        if (rest.empty()) throw Error(ErrorCode::parse, "missing name");
        current = Block{};
        current->kind = key == "domain" ? Block::Kind::domain : Block::Kind::map;
        current->name = std::string(rest);
        current->line = line_no;
        continue;
      }
      if (!current) throw Error(ErrorCode::parse, "expected 'domain' or 'map'");
      const bool is_map = current->kind == Block::Kind::map;
      if (key == "dim") {
        if (auto arrow = rest.find("->"); arrow != std::string_view::npos) {
          if (!is_map) throw Error(ErrorCode::parse, "'->' only applies to maps");
          current->n = to_int(rest.substr(0, arrow), "dimension");
          current->n_out = to_int(rest.substr(arrow + 2), "dimension");
        } else {
          current->n = to_int(rest, "dimension");
        }
        if (current->n < 1 || current->n > 64) throw Error(ErrorCode::parse, "dimension must be in 1..64");
      } else if (key == "provenance") {
        current->provenance = std::string(rest);
      } else if (!is_map && key == "rho") {
        current->rho = std::string(rest);
      } else if (!is_map && key == "anchor") {
        current->anchor = parse_point(rest);
      } else if (!is_map && key == "margin") {
        current->margin = to_double(rest, "margin");
      } else if (!is_map && key == "exceptional") {
        current->exceptional.push_back(parse_point(rest));
      } else if (is_map && key == "param") {
        current->params.push_back(parse_param(rest));
      } else if (is_map && key == "component") {
        current->components.emplace_back(rest);
      } else {
        throw Error(ErrorCode::parse, "unknown keyword '" + std::string(key) + "'");
      }
    } catch (const Error& e) {
      throw Error(e.code(), "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  close();
  return out;
}

Point parse_point(std::string_view text) {
  std::string_view s = trim(text);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') {
    // Strip only if the outer parentheses enclose the whole tuple.
    int depth = 0;
    bool encloses = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')' && --depth == 0 && i + 1 != s.size()) encloses = false;
    }
    if (encloses) s = s.substr(1, s.size() - 2);
  }
  Point out;
  int depth = 0;
  std::size_t start = 0;
  auto push = [&](std::size_t end) {
    const auto piece = trim(s.substr(start, end - start));
    if (piece.empty()) throw Error(ErrorCode::parse, "empty coordinate in point");
    const Expr e = parse(piece, 0);
    out.push_back(eval(e, std::span<const cplx>{}));
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth < 0) throw Error(ErrorCode::parse, "unbalanced parentheses in point");
    if (s[i] == ',' && depth == 0) {
      push(i);
      start = i + 1;
    }
  }
  if (depth != 0) throw Error(ErrorCode::parse, "unbalanced parentheses in point");
  push(s.size());
  for (const auto& c : out) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) throw Error(ErrorCode::parse, "non-finite coordinate");
  }
  return out;
}

// ---------------------------------------------------------------------------
// References

namespace {

struct Ref {
  std::string name;
  std::map<std::string, std::string, std::less<>> query;
};

Ref split_builtin(std::string_view body) {
  Ref r;
  const auto q = body.find('?');
  r.name = std::string(body.substr(0, q));
  if (q == std::string_view::npos) return r;
  std::string_view rest = body.substr(q + 1);
  while (!rest.empty()) {
    const auto amp = rest.find('&');
    const auto item = rest.substr(0, amp);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(ErrorCode::invalid_argument, "malformed query item '" + std::string(item) + "'");
    }
    r.query.emplace(std::string(item.substr(0, eq)), std::string(item.substr(eq + 1)));
    rest = amp == std::string_view::npos ? std::string_view{} : rest.substr(amp + 1);
  }
  return r;
}

class Query {
 public:
  explicit Query(const Ref& r) : ref_(r) {}

  double number(std::string_view key, double fallback) {
    used_.emplace(key);
    auto it = ref_.query.find(key);
    if (it == ref_.query.end()) return fallback;
    try {
      return to_double(it->second, "query value");
    } catch (const Error& e) {
      throw Error(ErrorCode::invalid_argument, e.what());
    }
  }

  int integer(std::string_view key, int fallback) {
    const double v = number(key, fallback);
    if (v != std::floor(v) || std::abs(v) > 1e6) {
      throw Error(ErrorCode::invalid_argument, std::string(key) + " must be an integer");
    }
    return static_cast<int>(v);
  }

  std::string word(std::string_view key, std::string fallback) {
    used_.emplace(key);
    auto it = ref_.query.find(key);
    return it == ref_.query.end() ? fallback : it->second;
  }

  void finish() const {
    for (const auto& [k, v] : ref_.query) {
      if (!used_.contains(k)) {
        throw Error(ErrorCode::invalid_argument, "unknown key '" + k + "' for builtin:" + ref_.name);
      }
    }
  }

 private:
  const Ref& ref_;
  std::set<std::string, std::less<>> used_;
};

DomainSpec remark_model(Query& q) {
  const int m = q.integer("m", 2);
  const double c = q.number("c", 0.25);
  const std::string which = q.word("q", "default");
  Expr Q;
  if (which == "default") {
    Q = remark_default_q(m);
  } else if (which != "zero") {
    throw Error(ErrorCode::invalid_argument, "q must be 'default' or 'zero'");
  }
  return remark_family(m, Q, c).domain;
}

DomainSpec builtin_domain(const Ref& r) {
  Query q(r);
  DomainSpec d;
  if (r.name == "thm1") {
    d = theorem1_domain(q.integer("n", 3));
  } else if (r.name == "thm1_n4") {
    d = theorem1_domain(4);
  } else if (r.name == "thm2") {
    d = theorem2_domain();
  } else if (r.name == "thm2_unbounded") {
    d = theorem2_unbounded();
  } else if (r.name == "ellipsoid") {
    d = ellipsoid(q.number("alpha", 1.0));
  } else if (r.name == "ball") {
    d = unit_ball(q.integer("n", 2));
  } else if (r.name == "remark5") {
    d = remark_model(q);
  } else if (r.name == "remark5_pullback") {
    const DomainSpec model = remark_model(q);
    const int m = q.integer("m", 2);
    d = remark_pullback(model, remark_transform(m, q.number("scale", std::numbers::sqrt2)));
  } else {
    throw Error(ErrorCode::not_found, "unknown builtin domain '" + r.name + "'");
  }
  q.finish();
  return d;
}

HoloMap builtin_map(const Ref& r) {
  Query q(r);
  HoloMap m;
  if (r.name == "thm1_subgroup") {
    m = theorem1_subgroup();
  } else if (r.name == "thm1_swap") {
    m = theorem1_linear_generators().swap;
  } else if (r.name == "thm1_sign") {
    m = theorem1_linear_generators().sign;
  } else if (r.name == "thm2_subgroup") {
    m = theorem2_subgroup();
  } else if (r.name == "thm2_retraction") {
    m = theorem2_retraction();
  } else if (r.name == "cayley") {
    m = cayley_transform();
  } else if (r.name == "remark5_transform") {
    const int k = q.integer("m", 2);
    m = remark_transform(k, q.number("scale", std::numbers::sqrt2));
  } else if (r.name == "identity") {
    m = identity_map(q.integer("n", 2));
  } else {
    throw Error(ErrorCode::not_found, "unknown builtin map '" + r.name + "'");
  }
  q.finish();
  return m;
}

std::vector<Definition> load_file(std::string_view path) {
  std::ifstream in{std::string(path)};
  if (!in) throw Error(ErrorCode::not_found, "cannot open '" + std::string(path) + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_definitions(buf.str());
}

template <class T>
T from_file(std::string_view ref, const char* what) {
  const auto hash = ref.rfind('#');
  const std::string_view path = ref.substr(0, hash);
  const std::string_view name = hash == std::string_view::npos ? std::string_view{} : ref.substr(hash + 1);
  for (auto& def : load_file(path)) {
    if (auto* t = std::get_if<T>(&def); t && (name.empty() || t->name == name)) return std::move(*t);
  }
  throw Error(ErrorCode::not_found, std::string("no ") + what + (name.empty() ? "" : " '" + std::string(name) + "'") +
                                        " in '" + std::string(path) + "'");
}

constexpr std::string_view kBuiltin = "builtin:";

}  // namespace

DomainSpec resolve_domain(std::string_view ref) {
  ref = trim(ref);
  if (ref.starts_with(kBuiltin)) return builtin_domain(split_builtin(ref.substr(kBuiltin.size())));
  return from_file<DomainSpec>(ref, "domain");
}

HoloMap resolve_map(std::string_view ref) {
  ref = trim(ref);
  if (ref.starts_with(kBuiltin)) return builtin_map(split_builtin(ref.substr(kBuiltin.size())));
  return from_file<HoloMap>(ref, "map");
}

std::vector<std::string> builtin_domain_names() {
  return {"thm1",         "thm1_n4", "thm2",    "thm2_unbounded", "ellipsoid?alpha=A",
          "ball?n=N", "remark5?m=M&c=C&q=default|zero", "remark5_pullback?m=M&c=C&q=default|zero&scale=S"};
}

std::vector<std::string> builtin_map_names() {
  return {"thm1_subgroup", "thm1_swap", "thm1_sign", "thm2_subgroup", "thm2_retraction", "cayley",
          "remark5_transform?m=M&scale=S", "identity?n=N"};
}

}  // namespace levikit::catalog
