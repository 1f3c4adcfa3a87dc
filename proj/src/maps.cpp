#include "levikit/maps.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <set>

#include "levikit/levi.hpp"

namespace levikit {

bool ParamDecl::contains(cplx value) const {
  switch (kind) {
    case Kind::disc:
      return std::abs(value) < hi;
    case Kind::interval:
      return value.imag() == 0.0 && value.real() > lo && value.real() < hi;
    case Kind::closed:
      return value.imag() == 0.0 && value.real() >= lo && value.real() <= hi;
    case Kind::real:
      return value.imag() == 0.0 && std::isfinite(value.real());
  }
  return false;
}

cplx ParamDecl::sample(Rng& rng) const {
  switch (kind) {
    case Kind::disc: {
      cplx v;
      do {
        v = random_in_disc(rng, hi);
      } while (!contains(v));
      return v;
    }
    case Kind::interval: {
      double v;
      do {
        v = uniform(rng, lo, hi);
      } while (!(v > lo && v < hi));
      return v;
    }
    case Kind::closed:
      return uniform(rng, lo, hi);
    case Kind::real:
      return normal(rng);
  }
  return {};
}

namespace {

std::string shortest(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace

std::string ParamDecl::describe() const {
  switch (kind) {
    case Kind::disc:
      return "|" + name + "| < " + shortest(hi);
    case Kind::interval:
      return name + " in (" + shortest(lo) + ", " + shortest(hi) + ")";
    case Kind::closed:
      return name + " in [" + shortest(lo) + ", " + shortest(hi) + "]";
    case Kind::real:
      return name + " real";
  }
  return name;
}

namespace {

void collect_parameters(const Expr& e, std::set<std::string>& out) {
  if (e.op() == Op::parameter) out.insert(e.name());
  for (std::size_t i = 0; i < e.arity(); ++i) collect_parameters(e.arg(i), out);
}

bool syntactically_holomorphic(const Expr& e) {
  switch (e.op()) {
    case Op::conj:
    case Op::re:
    case Op::im:
    case Op::abs:
    case Op::abs2:
    case Op::rpow:
      if (depends_on_variables(e)) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < e.arity(); ++i) {
    if (!syntactically_holomorphic(e.arg(i))) return false;
  }
  return true;
}

}  // namespace

void validate_map(const HoloMap& m) {
  if (m.n_in < 1 || m.n_out < 1) throw Error(ErrorCode::invalid_argument, "map dimensions must be positive");
  if (static_cast<int>(m.components.size()) != m.n_out) {
    throw Error(ErrorCode::invalid_argument, "map '" + m.name + "' has " +
                                                 std::to_string(m.components.size()) +
                                                 " components, expected " + std::to_string(m.n_out));
  }
  std::set<std::string> declared;
  for (const auto& p : m.params) {
    if (!declared.insert(p.name).second) {
      throw Error(ErrorCode::invalid_argument, "duplicate parameter '" + p.name + "'");
    }
  }
  for (std::size_t c = 0; c < m.components.size(); ++c) {
    const Expr& e = m.components[c];
    if (max_variable(e) > m.n_in) {
      throw Error(ErrorCode::invalid_argument, "component " + std::to_string(c + 1) +
                                                   " uses a variable beyond z" + std::to_string(m.n_in));
    }
    if (!syntactically_holomorphic(e)) {
      throw Error(ErrorCode::invalid_argument, "component " + std::to_string(c + 1) + " of '" + m.name +
                                                   "' is not holomorphic");
    }
    std::set<std::string> used;
    collect_parameters(e, used);
    for (const auto& name : used) {
      if (!declared.contains(name)) {
        throw Error(ErrorCode::invalid_argument, "undeclared parameter '" + name + "'");
      }
    }
  }
}

void check_params(const HoloMap& m, const ParamValues& values) {
  for (const auto& p : m.params) {
    auto it = values.find(p.name);
    if (it == values.end()) {
      throw Error(ErrorCode::invalid_argument, "missing parameter '" + p.name + "'");
    }
    if (!p.contains(it->second)) {
      throw Error(ErrorCode::invalid_argument, "parameter outside its range: " + p.describe());
    }
  }
}

ParamValues sample_params(const HoloMap& m, Rng& rng) {
  ParamValues out;
  for (const auto& p : m.params) out[p.name] = p.sample(rng);
  return out;
}

namespace {

Point apply_unchecked(const HoloMap& m, const ParamValues& params, std::span<const cplx> z) {
  Point out;
  out.reserve(m.components.size());
  for (const auto& c : m.components) out.push_back(eval(c, z, &params));
  return out;
}

double relative_gap(cplx lhs, cplx rhs) {
  return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)});
}

}  // namespace

Point apply(const HoloMap& m, const ParamValues& params, std::span<const cplx> z) {
  if (static_cast<int>(z.size()) != m.n_in) {
    throw Error(ErrorCode::invalid_argument, "point dimension does not match map '" + m.name + "'");
  }
  check_params(m, params);
  return apply_unchecked(m, params, z);
}

void validate_action(const TorusAction& a) {
  if (a.weights.empty()) throw Error(ErrorCode::invalid_argument, "torus action without factors");
  for (const auto& w : a.weights) {
    if (static_cast<int>(w.size()) != a.n) {
      throw Error(ErrorCode::invalid_argument, "torus weight vector has wrong length");
    }
    bool any = false;
    for (int x : w) any = any || x != 0;
    if (!any) throw Error(ErrorCode::invalid_argument, "torus factor with all-zero weights");
  }
}

Point act(const TorusAction& a, std::span<const double> angles, std::span<const cplx> z) {
  if (angles.size() != a.weights.size() || static_cast<int>(z.size()) != a.n) {
    throw Error(ErrorCode::invalid_argument, "torus action dimension mismatch");
  }
  Point out(z.begin(), z.end());
  for (int j = 0; j < a.n; ++j) {
    double phase = 0.0;
    for (std::size_t f = 0; f < angles.size(); ++f) phase += a.weights[f][static_cast<std::size_t>(j)] * angles[f];
    out[static_cast<std::size_t>(j)] *= std::polar(1.0, phase);
  }
  return out;
}

DomainSample sample_domain(const DomainSpec& d, Rng& rng) {
  const Point dir = random_direction(rng, d.n);
  const BoundaryHit hit = locate_boundary(d, dir);
  const double u = uniform(rng, 0.0, 1.0);
  DomainSample s;
  s.boundary = hit.point;
  s.interior = d.anchor;
  for (std::size_t i = 0; i < s.interior.size(); ++i) s.interior[i] += u * (hit.point[i] - d.anchor[i]);
  return s;
}

namespace {

std::vector<Point> selected_points(const SampleOptions& opts, const DomainSample& s) {
  std::vector<Point> pts;
  if (opts.interior) pts.push_back(s.interior);
  if (opts.boundary) pts.push_back(s.boundary);
  return pts;
}

struct Worst {
  double residual = -1.0;
  Point point;
  ParamValues params;
};

}  // namespace

ResidualSummary verify_invariance_identity(const DomainSpec& d, const HoloMap& m,
                                           const Expr& denominator, const Expr& factor,
                                           const SampleOptions& opts,
                                           const std::optional<ParamValues>& fixed) {
  if (m.n_in != d.n || m.n_out != d.n) {
    throw Error(ErrorCode::invalid_argument, "map and domain dimensions differ");
  }
  if (fixed) check_params(m, *fixed);
  std::vector<Worst> worst(static_cast<std::size_t>(opts.samples));
  std::vector<int> counts(worst.size(), 0);
  parallel_for(worst.size(), [&](std::size_t i) {
    Rng rng = make_stream(opts.seed, opts.stream, i);
    const ParamValues params = fixed ? *fixed : sample_params(m, rng);
    const DomainSample s = sample_domain(d, rng);
    for (const Point& z : selected_points(opts, s)) {
      const cplx f = eval(factor, z, &params);
      if (!(f.real() > 0.0) || std::abs(f.imag()) > kRealTolerance * (1.0 + std::abs(f))) {
        throw Error(ErrorCode::invalid_argument, "invariance factor is not positive at a sample");
      }
      const Point image = apply_unchecked(m, params, z);
      const cplx lhs = eval(d.rho, image) * eval(denominator, z, &params);
      const cplx rhs = f * eval(d.rho, z);
      const double r = relative_gap(lhs, rhs);
      ++counts[i];
      if (r > worst[i].residual) worst[i] = {r, z, params};
    }
  });
  ResidualSummary out;
  double best = -1.0;
  for (std::size_t i = 0; i < worst.size(); ++i) {
    out.points += counts[i];
    if (worst[i].residual > best) {
      best = worst[i].residual;
      out.max_residual = worst[i].residual;
      out.witness = worst[i].point;
      out.witness_params = worst[i].params;
    }
  }
  return out;
}

PreservationSummary verify_boundary_preservation(const DomainSpec& src, const DomainSpec& dst,
                                                 const HoloMap& m, const ParamValues& params,
                                                 const SampleOptions& opts, double interior_tol,
                                                 double boundary_tol) {
  if (m.n_in != src.n || m.n_out != dst.n) {
    throw Error(ErrorCode::invalid_argument, "map dimensions do not match the domains");
  }
  check_params(m, params);
  struct Slot {
    bool undefined = false;
    Point undefined_at;
    double interior_value = -std::numeric_limits<double>::infinity();
    Point interior_at;
    double boundary_residual = -1.0;
    Point boundary_at;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(opts.samples));
  parallel_for(slots.size(), [&](std::size_t i) {
    Rng rng = make_stream(opts.seed, opts.stream, i);
    const DomainSample s = sample_domain(src, rng);
    Slot& slot = slots[i];
    auto image_value = [&](const Point& z, double& out) {
      try {
        out = eval(dst.rho, apply_unchecked(m, params, z)).real();
        return true;
      } catch (const Error& e) {
        if (e.code() == ErrorCode::invalid_argument) throw;
        slot.undefined = true;
        slot.undefined_at = z;
        return false;
      }
    };
    double v = 0.0;
    if (opts.interior && image_value(s.interior, v)) {
      slot.interior_value = v;
      slot.interior_at = s.interior;
    }
    if (opts.boundary && image_value(s.boundary, v)) {
      slot.boundary_residual = std::abs(v);
      slot.boundary_at = s.boundary;
    }
  });

  PreservationSummary out;
  for (const auto& slot : slots) {
    if (slot.undefined) {
      if (out.undefined == 0) out.undefined_witness = slot.undefined_at;
      ++out.undefined;
    }
    if (opts.interior && !slot.interior_at.empty()) {
      ++out.interior_samples;
      if (slot.interior_value >= interior_tol) ++out.interior_violations;
      if (slot.interior_value > out.max_interior_value) {
        out.max_interior_value = slot.interior_value;
        out.interior_witness = slot.interior_at;
      }
    }
    if (opts.boundary && !slot.boundary_at.empty()) {
      ++out.boundary_samples;
      if (slot.boundary_residual > boundary_tol) ++out.boundary_violations;
      if (slot.boundary_residual > out.max_boundary_residual || out.boundary_witness.empty()) {
        out.max_boundary_residual = slot.boundary_residual;
        out.boundary_witness = slot.boundary_at;
      }
    }
  }
  if (out.undefined * 100 > opts.samples) {
    throw Error(ErrorCode::invalid_argument,
                "map '" + m.name + "' is undefined at " + std::to_string(out.undefined) + " of " +
                    std::to_string(opts.samples) + " samples");
  }
  return out;
}

ResidualSummary verify_torus_invariance(const DomainSpec& d, const TorusAction& a,
                                        const SampleOptions& opts) {
  validate_action(a);
  if (a.n != d.n) throw Error(ErrorCode::invalid_argument, "action and domain dimensions differ");
  std::vector<Worst> worst(static_cast<std::size_t>(opts.samples));
  std::vector<int> counts(worst.size(), 0);
  parallel_for(worst.size(), [&](std::size_t i) {
    Rng rng = make_stream(opts.seed, opts.stream, i);
    const DomainSample s = sample_domain(d, rng);
    std::vector<double> angles(a.weights.size());
    for (auto& phi : angles) phi = uniform(rng, 0.0, 2.0 * M_PI);
    for (const Point& z : selected_points(opts, s)) {
      const cplx before = eval(d.rho, z);
      const cplx after = eval(d.rho, act(a, angles, z));
      const double r = std::abs(after - before) / std::max(1.0, std::abs(before));
      ++counts[i];
      if (r > worst[i].residual) worst[i] = {r, z, {}};
    }
  });
  ResidualSummary out;
  double best = -1.0;
  for (std::size_t i = 0; i < worst.size(); ++i) {
    out.points += counts[i];
    if (worst[i].residual > best) {
      best = worst[i].residual;
      out.max_residual = worst[i].residual;
      out.witness = worst[i].point;
    }
  }
  return out;
}

LinearCheck verify_discrete_linear(const DomainSpec& d, const HoloMap& m, const SampleOptions& opts,
                                   double tol) {
  if (!m.params.empty()) throw Error(ErrorCode::invalid_argument, "discrete map must not have parameters");
  if (m.n_in != d.n || m.n_out != d.n) throw Error(ErrorCode::invalid_argument, "map and domain dimensions differ");
  const ParamValues none;
  std::vector<Worst> worst(static_cast<std::size_t>(opts.samples));
  parallel_for(worst.size(), [&](std::size_t i) {
    Rng rng = make_stream(opts.seed, opts.stream, i);
    const DomainSample s = sample_domain(d, rng);
    for (const Point& z : selected_points(opts, s)) {
      const cplx before = eval(d.rho, z);
      const cplx after = eval(d.rho, apply_unchecked(m, none, z));
      const double r = std::abs(after - before) / std::max(1.0, std::abs(before));
      if (r > worst[i].residual) worst[i] = {r, z, {}};
    }
  });
  LinearCheck out;
  double best = -1.0;
  for (const auto& w : worst) {
    if (w.residual > best) {
      best = w.residual;
      out.max_residual = w.residual;
      out.witness = w.point;
    }
  }
  out.invariant = out.max_residual <= tol;
  return out;
}

ContinuitySummary verify_branch_continuity(const HoloMap& m, const ParamValues& params,
                                           int component, int path_variable, const Point& base,
                                           int paths, std::uint64_t seed, const std::string& stream) {
  if (component < 1 || component > m.n_out || path_variable < 1 || path_variable > m.n_in) {
    throw Error(ErrorCode::invalid_argument, "component or variable out of range");
  }
  if (static_cast<int>(base.size()) != m.n_in) throw Error(ErrorCode::invalid_argument, "base point dimension mismatch");
  check_params(m, params);
  const Expr& f = m.components[static_cast<std::size_t>(component - 1)];
  const Expr df = wirtinger(f, path_variable, Wirtinger::holomorphic).expr;
  const auto var = static_cast<std::size_t>(path_variable - 1);
  constexpr double kMaxStep = 1e-2;
  constexpr long kMaxSteps = 1'000'000;

  struct Slot {
    long steps = 0;
    double jump = 0.0;
    Point at;
  };
  std::vector<Slot> slots(static_cast<std::size_t>(std::max(paths, 0)));
  parallel_for(slots.size(), [&](std::size_t i) {
    Rng rng = make_stream(seed, stream, i);
    const cplx start = random_in_disc(rng, 1.0);
    const cplx end = random_in_disc(rng, 1.0);
    const double length = std::abs(end - start);
    Slot& slot = slots[i];
    Point z = base;
    z[var] = start;
    cplx fz = eval(f, z, &params);
    cplx dfz = eval(df, z, &params);
    slot.at = z;
    double s = 0.0;
    while (s < length && slot.steps < kMaxSteps) {
      double h = kMaxStep;
      if (std::abs(dfz) > 0.0) h = std::min(h, 0.1 * std::abs(fz) / std::abs(dfz));
      h = std::min(h, length - s);
      if (h <= 0.0) break;
      s += h;
      Point next = base;
      next[var] = start + (end - start) * (s / length);
      const cplx fn = eval(f, next, &params);
      const cplx dfn = eval(df, next, &params);
      const double bound = 2.0 * std::max(std::abs(dfz), std::abs(dfn)) * h;
      const double jump = std::max(0.0, std::abs(fn - fz) - bound);
      if (jump > slot.jump) {
        slot.jump = jump;
        slot.at = next;
      }
      fz = fn;
      dfz = dfn;
      ++slot.steps;
    }
  });
  ContinuitySummary out;
  out.paths = paths;
  double best = -1.0;
  for (const auto& slot : slots) {
    out.steps += slot.steps;
    if (slot.jump > best) {
      best = slot.jump;
      out.max_jump = slot.jump;
      out.witness = slot.at;
    }
  }
  return out;
}

}  // namespace levikit
