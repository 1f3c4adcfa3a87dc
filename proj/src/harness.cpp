#include "levikit/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>

#include <Eigen/SVD>
#include <nlohmann/json.hpp>

#include "levikit/catalog.hpp"
#include "levikit/maps.hpp"
#include "levikit/sampling.hpp"

namespace levikit::harness {

using json = nlohmann::ordered_json;

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skip: return "skip";
  }
  return "fail";
}

Status status_from_string(std::string_view s) {
  if (s == "pass") return Status::pass;
  if (s == "fail") return Status::fail;
  if (s == "skip") return Status::skip;
  throw Error(ErrorCode::parse, "unknown status '" + std::string(s) + "'");
}

Status Report::overall() const {
  for (const auto& c : checks) {
    if (c.status == Status::fail) return Status::fail;
  }
  return Status::pass;
}

const CheckRecord* Report::find(std::string_view id) const {
  for (const auto& c : checks) {
    if (c.id == id) return &c;
  }
  return nullptr;
}

void load_config(std::string_view json_text, RunOptions& opts) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorCode::parse, "config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key != "tolerances") throw Error(ErrorCode::invalid_argument, "config: unknown key '" + key + "'");
    if (!value.is_object()) throw Error(ErrorCode::parse, "config: 'tolerances' must be an object");
    for (const auto& [id, tol] : value.items()) {
      if (!tol.is_number() || !(tol.get<double>() > 0.0)) {
        throw Error(ErrorCode::invalid_argument, "config: tolerance for '" + id + "' must be a positive number");
      }
      opts.tolerances[id] = tol.get<double>();
    }
  }
}

namespace {

// ---------------------------------------------------------------------------
// Check runner

struct CheckSpec {
  std::string id;
  std::string description;
  std::string paper_ref;
  double tolerance = 0.0;
  bool residual_type = true;  // subject to --tol
  int default_samples = 0;    // 0: deterministic, not overridable
};

struct Ctx {
  int samples = 0;
  double tol = 0.0;
  std::uint64_t seed = 0;
  std::string stream;
  CheckRecord& rec;

  SampleOptions sample_opts(bool interior = true, bool boundary = true) const {
    SampleOptions o;
    o.samples = samples;
    o.seed = seed;
    o.stream = stream;
    o.interior = interior;
    o.boundary = boundary;
    return o;
  }

  void at_most(double value) {
    rec.max_residual = value;
    rec.status = value <= tol ? Status::pass : Status::fail;
  }

  void note(const std::string& text) {
    if (!rec.note.empty()) rec.note += "; ";
    rec.note += text;
  }
};

std::string sci(double v) {
  if (!std::isfinite(v)) return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string show(const Point& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += sci(p[i].real());
    if (p[i].imag() != 0.0) s += (p[i].imag() < 0 ? " - " : " + ") + sci(std::abs(p[i].imag())) + "i";
  }
  return s + ")";
}

class Runner {
 public:
  Runner(std::string scenario, const RunOptions& opts) : opts_(opts) {
    report_.scenario = std::move(scenario);
    report_.seed = opts.seed;
    report_.samples = opts.samples.value_or(10000);
  }

  void run(const CheckSpec& spec, const std::function<void(Ctx&)>& body) {
    CheckRecord rec;
    rec.id = spec.id;
    rec.description = spec.description;
    rec.paper_ref = spec.paper_ref;
    rec.status = Status::fail;
    double tol = spec.tolerance;
    if (spec.residual_type && opts_.tol) tol = *opts_.tol;
    if (auto it = opts_.tolerances.find(spec.id); it != opts_.tolerances.end()) tol = it->second;
    if (tol > 0.0) rec.tolerance = tol;  // exact checks carry no tolerance
    rec.samples = spec.default_samples > 0 ? opts_.samples.value_or(spec.default_samples) : 0;

    Ctx ctx{rec.samples, tol, opts_.seed, spec.id, rec};
    const auto start = std::chrono::steady_clock::now();
    try {
      body(ctx);
    } catch (const Error& e) {
      rec.status = Status::fail;
      ctx.note(std::string("error: ") + e.what());
    }
    if (opts_.timing) {
      rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    if (spec.default_samples > 0 && rec.samples < std::min(kLowCoverage, spec.default_samples)) {
      ctx.note("low statistical coverage (" + std::to_string(rec.samples) + " samples)");
      low_coverage_ = true;
    }
    report_.checks.push_back(std::move(rec));
  }

  Report finish() {
    if (low_coverage_) {
      report_.notes.push_back("low statistical coverage: some checks ran with fewer than " +
                              std::to_string(kLowCoverage) + " samples");
    }
    return std::move(report_);
  }

 private:
  const RunOptions& opts_;
  Report report_;
  bool low_coverage_ = false;
};

Point box_point(Rng& rng, const Point& center, double half_width) {
  Point z = center;
  for (auto& c : z) c += cplx{uniform(rng, -half_width, half_width), uniform(rng, -half_width, half_width)};
  return z;
}

double point_norm(const Point& p) {
  double s = 0.0;
  for (const auto& c : p) s += std::norm(c);
  return std::sqrt(s);
}

double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

struct Extremum {
  double value = -std::numeric_limits<double>::infinity();
  Point at;
};

/// Runs fn(i) -> (value, point) in parallel and keeps the largest value,
/// ties resolved by lowest index.
Extremum max_over(int count, const std::function<Extremum(std::size_t)>& fn) {
  std::vector<Extremum> slots(static_cast<std::size_t>(std::max(count, 0)));
  parallel_for(slots.size(), [&](std::size_t i) { slots[i] = fn(i); });
  Extremum best;
  for (auto& s : slots) {
    if (s.value > best.value) best = std::move(s);
  }
  return best;
}

void reality_check(Ctx& ctx, const DomainSpec& d) {
  const Extremum worst = max_over(ctx.samples, [&](std::size_t i) {
    Rng rng = make_stream(ctx.seed, ctx.stream, i);
    const Point z = box_point(rng, d.anchor, 1.5);
    cplx v;
    try {
      v = eval(d.rho, z);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::division_by_zero) return Extremum{0.0, z};
      throw;
    }
    return Extremum{std::abs(v.imag()) / (1.0 + std::abs(v)), z};
  });
  ctx.at_most(worst.value);
  ctx.rec.witness = {worst.at};
}

void boundedness_check(Ctx& ctx, const DomainSpec& d) {
  const Extremum far = max_over(ctx.samples, [&](std::size_t i) {
    Rng rng = make_stream(ctx.seed, ctx.stream, i);
    const BoundaryHit hit = locate_boundary(d, random_direction(rng, d.n));
    return Extremum{point_norm(hit.point), hit.point};
  });
  ctx.at_most(far.value);
  ctx.rec.witness = {far.at};
  ctx.note("largest |z| over located boundary points");
}

void torus_check(Ctx& ctx, const DomainSpec& d, const TorusAction& a) {
  const ResidualSummary s = verify_torus_invariance(d, a, ctx.sample_opts());
  ctx.at_most(s.max_residual);
  ctx.rec.witness = {s.witness};
}

void identity_check(Ctx& ctx, const DomainSpec& d, const HoloMap& m, const catalog::Identity& id) {
  const ResidualSummary s = verify_invariance_identity(d, m, id.denominator, id.factor, ctx.sample_opts());
  ctx.at_most(s.max_residual);
  ctx.rec.witness = {s.witness};
  for (const auto& [name, value] : s.witness_params) {
    ctx.note("witness " + name + " = " + show({value}));
  }
}

std::string describe_eigenvalues(const std::vector<double>& ev) {
  std::string s = "eigenvalues [";
  for (std::size_t i = 0; i < ev.size(); ++i) s += (i ? ", " : "") + sci(ev[i]);
  return s + "]";
}

/// Rank of real tangent vectors stacked as rows.
int real_rank(const std::vector<std::vector<double>>& rows, double rel_tol) {
  if (rows.empty()) return 0;
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < rows[r].size(); ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > rel_tol * sv[0]) ++rank;
  }
  return rank;
}

// Claims attached to checks.
constexpr const char* kT1Domain =
    "bounded circular domain |z1|^2 + |z2|^4 + |z3|^4 + (conj(z2) z3 + conj(z3) z2)^2 < 1";
constexpr const char* kT1Symmetry = "invariant under z -> (z1, e^{i phi} z2, e^{i phi} z3) and z -> (e^{i psi} z1, z2, z3), hence circular";
constexpr const char* kT1Subgroup = "non-compact subgroup z1 -> (z1 - a)/(1 - conj(a) z1), z2,3 -> (1 - |a|^2)^(1/4) z2,3 / (1 - conj(a) z1)^(1/2), |a| < 1";
constexpr const char* kT1Linear = "linear automorphisms permute z2, z3 and change their signs";
constexpr const char* kT1Levi = "Levi form vanishes exactly on (e^{i alpha}, 0, 0), has rank 1 on (z1, w, +-w), rank 2 elsewhere";
constexpr const char* kT1Pseudoconvex = "the domain is pseudoconvex";
constexpr const char* kT1Dimension = "dim Aut = 4, which no normalized hyperbolic Reinhardt domain in C^3 attains";
constexpr const char* kT2Domain = "bounded domain |z1|^2 + |z2|^4 + 8|z1 - 1|^2 (...)^2 < 1; plainly bounded since the third term is non-negative";
constexpr const char* kT2Subgroup = "real subgroup z1 -> (z1 - a)/(1 - a z1), z2 -> (1 - a^2)^(1/4) z2 / (1 - a z1)^(1/2), a in (-1, 1)";
constexpr const char* kT2Retraction = "F_tau(z) = (z1, tau z2), 0 <= tau <= 1, retracts the domain inside itself";
constexpr const char* kT2Transform = "z -> ((z1 + 1)/(z1 - 1), sqrt(2) z2 / sqrt(z1 - 1)) maps the domain onto Re w1 + |w2|^4/4 + 2(w2^2 - 3/2|w2|^2 + conj(w2)^2)^2 < 0";
constexpr const char* kT2Levi = "at the boundary point (-3/4, 1) of the unbounded model the Levi form equals -|z2|^2, negative definite";
constexpr const char* kT2Gradient = "d phi/dz1 = (1/(z1 - 1)) (-(z2/2) d phi/dz2 + 1 - conj(z1)) on the boundary away from (1, 0), so grad phi does not vanish";
constexpr const char* kT2Exceptional = "the boundary is real-analytic everywhere except (1, 0)";
constexpr const char* kT2Orbit = "the subgroup orbit of the origin accumulates at (1, 0) and at (-1, 0), where the boundary is real-analytic";
constexpr const char* kLaReduction = "under the exclusions one may assume t = 1, p = 2, n1 = n2 = 1";
constexpr const char* kLaCases = "case analysis of the surviving normalized forms: annulus, punctured disc, plane, alpha >= 0, alpha < 0";
constexpr const char* kLaDisc = "the disc {|z1| < 1, z2 = rho} lies in the domain |z1| < 1, |z2| < R/(1 - |z1|^2)^gamma";
constexpr const char* kLaBound = "Cauchy estimate M R_mu / (R_mu - |rho|)^2 with R_mu = R / (2 (1 - |mu|^2)^gamma) tends to 0 as |mu| -> 1";

}  // namespace

// ---------------------------------------------------------------------------
// Scenarios

Report run_theorem1(const RunOptions& opts) {
  const DomainSpec d = opts.domain.value_or(catalog::theorem1_domain(3));
  const LeviModel model(d);
  Runner run("theorem1", opts);
  const double sqrt_n = std::sqrt(static_cast<double>(d.n));

  run.run({"t1.reality", "defining function is real-valued", kT1Domain, kRealTolerance, true, 10000},
          [&](Ctx& c) { reality_check(c, d); });
  run.run({"t1.boundedness", "located boundary points satisfy |z| <= sqrt(n) + 1", kT1Domain, sqrt_n + 1.0, false, 1000},
          [&](Ctx& c) { boundedness_check(c, d); });
  run.run({"t1.torus2", "invariance under the 2-torus with weights (1,0,0), (0,1,1)", kT1Symmetry, 1e-10, true, 10000},
          [&](Ctx& c) { torus_check(c, d, catalog::theorem1_linear_generators().circles); });
  run.run({"t1.circular", "invariance under the diagonal circle (circular domain)", kT1Symmetry, 1e-10, true, 10000},
          [&](Ctx& c) { torus_check(c, d, TorusAction{d.n, {std::vector<int>(static_cast<std::size_t>(d.n), 1)}}); });
  run.run({"t1.torus3_violation", "full n-torus invariance is detected as broken (residual must exceed the bound)",
           kT1Symmetry, 0.1, false, 10000},
          [&](Ctx& c) {
            TorusAction full{d.n, {}};
            for (int j = 0; j < d.n; ++j) {
              std::vector<int> w(static_cast<std::size_t>(d.n), 0);
              w[static_cast<std::size_t>(j)] = 1;
              full.weights.push_back(std::move(w));
            }
            ResidualSummary s = verify_torus_invariance(d, full, c.sample_opts());
            // Fixed probe: (0, .., 1/2, 1/2) with the last coordinate turned by pi/2.
            Point probe(static_cast<std::size_t>(d.n));
            if (d.n >= 2) probe[static_cast<std::size_t>(d.n - 2)] = 0.5;
            probe.back() = 0.5;
            std::vector<double> angles(static_cast<std::size_t>(d.n), 0.0);
            angles.back() = std::numbers::pi / 2.0;
            const cplx before = eval(d.rho, probe);
            const double probe_residual =
                std::abs(eval(d.rho, act(full, angles, probe)) - before) / std::max(1.0, std::abs(before));
            if (probe_residual > s.max_residual) {
              s.max_residual = probe_residual;
              s.witness = probe;
            }
            c.rec.max_residual = s.max_residual;
            c.rec.witness = {s.witness};
            c.rec.status = s.max_residual > c.tol ? Status::pass : Status::fail;
            c.note("passes when the residual exceeds the tolerance: the domain is circular but not Reinhardt");
          });
  run.run({"t1.subgroup_identity", "rho(F_a z) |1 - conj(a) z1|^2 = (1 - |a|^2) rho(z)", kT1Subgroup, 1e-10, true, 10000},
          [&](Ctx& c) { identity_check(c, d, catalog::theorem1_subgroup(), catalog::theorem1_identity()); });

  const auto gens = catalog::theorem1_linear_generators();
  for (const HoloMap* m : {&gens.swap, &gens.sign}) {
    run.run({m == &gens.swap ? "t1.linear_swap" : "t1.linear_sign", m->provenance, kT1Linear, 1e-12, true, 10000},
            [&](Ctx& c) {
              const LinearCheck s = verify_discrete_linear(d, *m, c.sample_opts(), c.tol);
              c.at_most(s.max_residual);
              c.rec.witness = {s.witness};
            });
  }

  const LeviOptions levi_opts;
  run.run({"t1.levi_flat_circle", "Levi form has rank 0 on (e^{i alpha}, 0, 0)", kT1Levi, levi_opts.rank_tol, false, 0},
          [&](Ctx& c) {
            constexpr int kGrid = 64;
            c.rec.samples = kGrid;
            double worst = 0.0;
            bool ok = true;
            for (int k = 0; k < kGrid; ++k) {
              Point q(static_cast<std::size_t>(d.n));
              q[0] = std::polar(1.0, 2.0 * std::numbers::pi * k / kGrid);
              const LeviReport r = model.report(q, levi_opts);
              for (double ev : r.eigenvalues) worst = std::max(worst, std::abs(ev));
              if (r.rank != 0) {
                ok = false;
                c.rec.witness.push_back(q);
              }
            }
            c.rec.max_residual = worst;
            c.rec.status = ok ? Status::pass : Status::fail;
            if (c.rec.witness.empty()) c.rec.witness = {Point{1.0, 0.0, 0.0}};
          });
  run.run({"t1.rank1_locus", "Levi form has rank 1 at (0, 6^(-1/4), 6^(-1/4)) and located points (z1, w, +-w)", kT1Levi,
           levi_opts.rank_tol, false, 10},
          [&](Ctx& c) {
            if (d.n != 3) throw Error(ErrorCode::invalid_argument, "rank-1 locus check needs n = 3");
            const double t = std::pow(6.0, -0.25);
            std::vector<Point> points{{0.0, t, t}};
            for (int i = 0; i < c.samples; ++i) {
              Rng rng = make_stream(c.seed, c.stream, static_cast<std::uint64_t>(i));
              const Point u = random_direction(rng, 2);
              const double sign = (i % 2 == 0) ? 1.0 : -1.0;
              points.push_back(locate_boundary(d, Point{u[0], u[1], sign * u[1]}).point);
            }
            double worst = 0.0;
            bool ok = true;
            for (const auto& q : points) {
              const LeviReport r = model.report(q, levi_opts);
              double smallest = std::numeric_limits<double>::infinity();
              for (double ev : r.eigenvalues) smallest = std::min(smallest, std::abs(ev));
              worst = std::max(worst, smallest);
              if (r.rank != 1) {
                ok = false;
                c.rec.witness.push_back(q);
                c.note("rank " + std::to_string(r.rank) + " at " + show(q));
              }
            }
            c.rec.max_residual = worst;
            c.rec.status = ok ? Status::pass : Status::fail;
            if (ok) c.rec.witness = {points.front()};
            c.note("max over points of the smallest |eigenvalue|");
          });
  run.run({"t1.rank2_point", "Levi form has rank 2 at (0, 1, 0)", kT1Levi, levi_opts.rank_tol, false, 0},
          [&](Ctx& c) {
            Point q(static_cast<std::size_t>(d.n));
            q[static_cast<std::size_t>(d.n - 2)] = 1.0;
            const LeviReport r = model.report(q, levi_opts);
            c.rec.witness = {q};
            c.rec.max_residual = r.residual;
            c.rec.status = r.rank == 2 && r.signature.negative == 0 ? Status::pass : Status::fail;
            c.note(describe_eigenvalues(r.eigenvalues));
          });
  run.run({"t1.pseudoconvex_scan", "restricted Levi form is positive semidefinite at sampled boundary points",
           kT1Pseudoconvex, 1e-8, true, 2000},
          [&](Ctx& c) {
            ScanOptions so;
            so.stream = c.stream;
            so.keep_samples = false;
            const ScanSummary s = pseudoconvexity_scan(model, c.samples, c.seed, so);
            c.at_most(std::max(0.0, -s.min_eigenvalue));
            c.rec.witness = {s.min_witness};
            std::string ranks;
            for (const auto& [rank, count] : s.rank_counts) {
              ranks += (ranks.empty() ? "" : ", ") + std::string("rank ") + std::to_string(rank) + ": " + std::to_string(count);
            }
            c.note("min eigenvalue " + sci(s.min_eigenvalue) + " (residual is its negative part); " + ranks);
            if (s.skipped > 0) c.note(std::to_string(s.skipped) + " degenerate samples skipped");
          });
  run.run({"t1.aut_dimension", "the subgroup and the 2-torus generate a 4-dimensional algebra of vector fields",
           kT1Dimension, 4.0, false, 0},
          [&](Ctx& c) {
            const HoloMap sub = catalog::theorem1_subgroup();
            const TorusAction circles = catalog::theorem1_linear_generators().circles;
            constexpr double h = 1e-6;
            std::vector<std::vector<double>> rows(4);
            for (int i = 0; i < 3; ++i) {
              Rng rng = make_stream(c.seed, c.stream, static_cast<std::uint64_t>(i));
              const Point z = sample_domain(d, rng).interior;
              c.rec.witness.push_back(z);
              auto field = [&](cplx da) {
                const Point plus = apply(sub, {{"a", da}}, z);
                const Point minus = apply(sub, {{"a", -da}}, z);
                Point v(z.size());
                for (std::size_t k = 0; k < z.size(); ++k) v[k] = (plus[k] - minus[k]) / (2.0 * h);
                return v;
              };
              std::vector<Point> fields{field({h, 0.0}), field({0.0, h})};
              for (const auto& w : circles.weights) {
                Point v(z.size());
                for (std::size_t k = 0; k < z.size(); ++k) v[k] = cplx{0.0, static_cast<double>(w[k])} * z[k];
                fields.push_back(std::move(v));
              }
              for (std::size_t g = 0; g < 4; ++g) {
                for (const auto& comp : fields[g]) {
                  rows[g].push_back(comp.real());
                  rows[g].push_back(comp.imag());
                }
              }
            }
            const int rank = real_rank(rows, 1e-6);
            c.rec.max_residual = rank;
            c.rec.status = rank == 4 ? Status::pass : Status::fail;
            c.note("real rank of the generating vector fields at three interior points: " + std::to_string(rank));
          });
  run.run({"t1.no_reinhardt_dim4", "no normalized Reinhardt form in C^3 has dim Aut_0 = 4", kT1Dimension, 0.0, false, 0},
          [&](Ctx& c) {
            const auto dims = reinhardt::enumerate_dims(3).dimensions();
            std::string list;
            for (int v : dims) list += (list.empty() ? "" : ", ") + std::to_string(v);
            c.rec.status = dims.contains(4) ? Status::fail : Status::pass;
            c.rec.max_residual = dims.contains(4) ? 1.0 : 0.0;
            c.note("attainable dimensions {" + list + "}");
          });
  return run.finish();
}

Report run_theorem2(const RunOptions& opts) {
  const DomainSpec d = opts.domain.value_or(catalog::theorem2_domain());
  const DomainSpec model_domain = catalog::theorem2_unbounded();
  const LeviModel model(d);
  const LeviModel unbounded(model_domain);
  const HoloMap cayley = catalog::cayley_transform();
  const Point exceptional{1.0, 0.0};
  Runner run("theorem2", opts);

  run.run({"t2.reality", "defining function is real-valued", kT2Domain, kRealTolerance, true, 10000},
          [&](Ctx& c) { reality_check(c, d); });
  run.run({"t2.third_term_nonnegative", "the third term 8|z1 - 1|^2 (...)^2 is non-negative", kT2Domain, 1e-12, true, 10000},
          [&](Ctx& c) {
            const Expr third = catalog::theorem2_third_term();
            const Extremum worst = max_over(c.samples, [&](std::size_t i) {
              Rng rng = make_stream(c.seed, c.stream, i);
              const Point z = box_point(rng, d.anchor, 1.5);
              try {
                return Extremum{-eval(third, z).real(), z};
              } catch (const Error& e) {
                if (e.code() == ErrorCode::division_by_zero) return Extremum{-std::numeric_limits<double>::infinity(), z};
                throw;
              }
            });
            c.at_most(std::max(0.0, worst.value));
            c.rec.witness = {worst.at};
            c.note("residual is the negative part of the smallest sampled value");
          });
  run.run({"t2.boundedness", "located boundary points satisfy |z| <= sqrt(2) + 1", kT2Domain, std::sqrt(2.0) + 1.0, false, 1000},
          [&](Ctx& c) { boundedness_check(c, d); });
  run.run({"t2.subgroup_identity", "rho(F_a z) |1 - a z1|^2 = (1 - a^2) rho(z)", kT2Subgroup, 1e-10, true, 10000},
          [&](Ctx& c) { identity_check(c, d, catalog::theorem2_subgroup(), catalog::theorem2_identity()); });
  run.run({"t2.retraction", "(z1, tau z2) stays in the domain for tau = 0, 0.1, ..., 1", kT2Retraction, 0.0, false, 1000},
          [&](Ctx& c) {
            const HoloMap f = catalog::theorem2_retraction();
            const Extremum worst = max_over(c.samples, [&](std::size_t i) {
              Rng rng = make_stream(c.seed, c.stream, i);
              const Point z = sample_domain(d, rng).interior;
              Extremum e;
              for (int k = 0; k <= 10; ++k) {
                const double v = eval(d.rho, apply(f, {{"tau", 0.1 * k}}, z)).real();
                if (v > e.value) e = {v, z};
              }
              return e;
            });
            c.rec.max_residual = worst.value;
            c.rec.witness = {worst.at};
            c.rec.status = worst.value < c.tol ? Status::pass : Status::fail;
            c.note("residual is the largest rho value of an image; must stay below 0");
          });
  run.run({"t2.transform_interior", "interior points map into the unbounded model (rho' < tol)", kT2Transform, 1e-9, true, 10000},
          [&](Ctx& c) {
            const PreservationSummary s =
                verify_boundary_preservation(d, model_domain, cayley, {}, c.sample_opts(true, false), c.tol, 1e-8);
            c.rec.max_residual = s.max_interior_value;
            c.rec.witness = {s.interior_witness};
            c.rec.status = s.interior_violations == 0 ? Status::pass : Status::fail;
            c.note(std::to_string(s.interior_violations) + " violations; residual is the largest image rho'");
            if (s.undefined > 0) c.note(std::to_string(s.undefined) + " samples undefined");
          });
  run.run({"t2.transform_boundary", "boundary points map onto the model boundary (|rho'| <= tol)", kT2Transform, 1e-8, true, 1000},
          [&](Ctx& c) {
            const PreservationSummary s =
                verify_boundary_preservation(d, model_domain, cayley, {}, c.sample_opts(false, true), 1e-9, c.tol);
            c.at_most(s.max_boundary_residual);
            c.rec.witness = {s.boundary_witness};
            if (s.undefined > 0) c.note(std::to_string(s.undefined) + " samples undefined");
          });
  run.run({"t2.branch_continuity", "the poscut square root in the transform is continuous on the closed unit disc in z1",
           kT2Transform, 1e-6, true, 100},
          [&](Ctx& c) {
            const ContinuitySummary s = verify_branch_continuity(cayley, {}, 2, 1, Point{0.0, 1.0}, c.samples, c.seed, c.stream);
            c.at_most(s.max_jump);
            c.rec.witness = {s.witness};
            c.note(std::to_string(s.steps) + " steps");
          });

  const Point critical{-0.75, 1.0};
  run.run({"t2.model_boundary_point", "(-3/4, 1) lies on the boundary of the unbounded model", kT2Levi, 1e-12, true, 0},
          [&](Ctx& c) {
            c.at_most(std::abs(eval(model_domain.rho, critical)));
            c.rec.witness = {critical};
          });
  LeviOptions graph;
  graph.chart = LeviChart::graph;
  graph.pivot = 1;
  run.run({"t2.levi_negative", "restricted Levi form at (-3/4, 1) is negative definite (eigenvalue <= -tolerance)",
           kT2Levi, 0.5, false, 0},
          [&](Ctx& c) {
            const LeviReport r = unbounded.report(critical, graph);
            const double lambda = r.eigenvalues.back();
            c.rec.max_residual = lambda;
            c.rec.witness = {critical};
            c.rec.status = lambda <= -c.tol && r.signature.negative == static_cast<int>(r.eigenvalues.size())
                               ? Status::pass
                               : Status::fail;
            const LeviReport o = unbounded.report(critical);
            c.note("graph chart over z2 (w1 solved from the tangency equation); orthonormal-chart eigenvalue " +
                   sci(o.eigenvalues.front()));
          });
  run.run({"t2.levi_value", "restricted Levi form at (-3/4, 1) equals [-|z2|^2] = [-1]", kT2Levi, 1e-9, true, 0},
          [&](Ctx& c) {
            const LeviReport r = unbounded.report(critical, graph);
            c.at_most(std::abs(r.restricted_form(0, 0) - cplx{-1.0, 0.0}));
            c.rec.witness = {critical};
          });
  run.run({"t2.levi_scan_focus",
           "Levi form is negative at boundary points of the model near (-3/4, 1) (smallest eigenvalue < -tolerance)",
           kT2Levi, 1e-8, false, 200},
          [&](Ctx& c) {
            ScanOptions so;
            so.focus = critical;
            so.stream = c.stream;
            so.keep_samples = false;
            const ScanSummary s = pseudoconvexity_scan(unbounded, c.samples, c.seed, so);
            c.rec.max_residual = s.min_eigenvalue;
            c.rec.witness = {s.min_witness};
            c.rec.status = s.min_eigenvalue < -c.tol ? Status::pass : Status::fail;
            c.note("residual is the smallest orthonormal-chart eigenvalue");
          });
  run.run({"t2.gradient_identity", "gradient identity holds at boundary points away from (1, 0)", kT2Gradient, 1e-9, true, 1000},
          [&](Ctx& c) {
            constexpr double kAway = 1e-2;
            std::vector<int> excluded(static_cast<std::size_t>(c.samples), 0);
            const Extremum worst = max_over(c.samples, [&](std::size_t i) {
              Rng rng = make_stream(c.seed, c.stream, i);
              const Point q = locate_boundary(d, random_direction(rng, d.n)).point;
              if (distance(q, exceptional) < kAway) {
                excluded[i] = 1;
                return Extremum{};
              }
              const CVector g = model.gradient(q);
              const cplx lhs = g[0];
              const cplx rhs = (-(q[1] / 2.0) * g[1] + 1.0 - std::conj(q[0])) / (q[0] - 1.0);
              return Extremum{std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}), q};
            });
            c.at_most(std::max(0.0, worst.value));
            if (!worst.at.empty()) c.rec.witness = {worst.at};
            int skipped = 0;
            for (int e : excluded) skipped += e;
            if (skipped > 0) c.note(std::to_string(skipped) + " points within 1e-2 of (1, 0) excluded");
          });
  run.run({"t2.exceptional_degenerate", "Levi report at (1, 0) reports a degenerate gradient", kT2Exceptional, 0.0, false, 0},
          [&](Ctx& c) {
            c.rec.witness = {exceptional};
            try {
              const LeviReport r = model.report(exceptional);
              c.rec.status = Status::fail;
              c.note("unexpected numeric result, " + describe_eigenvalues(r.eigenvalues));
            } catch (const Error& e) {
              if (e.code() != ErrorCode::degenerate_gradient) throw;
              c.rec.status = Status::skip;
              c.note(e.what());
            }
          });
  run.run({"t2.exceptional_proximity", "boundary points within 1e-3 of (1, 0) are flagged or reported degenerate",
           kT2Exceptional, 1e-3, false, 100},
          [&](Ctx& c) {
            struct Slot {
              bool near = false;
              bool handled = false;
              Point q;
            };
            std::vector<Slot> slots(static_cast<std::size_t>(c.samples));
            LeviOptions lo;
            lo.exceptional_radius = c.tol;
            parallel_for(slots.size(), [&](std::size_t i) {
              Rng rng = make_stream(c.seed, c.stream, i);
              Point dir = random_direction(rng, d.n);
              for (std::size_t k = 0; k < dir.size(); ++k) dir[k] = exceptional[k] + 1e-4 * dir[k];
              Slot& s = slots[i];
              s.q = locate_boundary(d, dir).point;
              s.near = distance(s.q, exceptional) < c.tol;
              if (!s.near) return;
              try {
                s.handled = model.report(s.q, lo).near_exceptional;
              } catch (const Error& e) {
                if (e.code() != ErrorCode::degenerate_gradient) throw;
                s.handled = true;
              }
            });
            int near = 0;
            int handled = 0;
            double closest = std::numeric_limits<double>::infinity();
            for (const auto& s : slots) {
              const double dist = distance(s.q, exceptional);
              if (dist < closest) {
                closest = dist;
                c.rec.witness = {s.q};
              }
              near += s.near;
              handled += s.near && s.handled;
            }
            c.rec.max_residual = closest;
            c.rec.status = near > 0 && handled == near ? Status::pass : Status::fail;
            c.note(std::to_string(near) + " located points within the radius, " + std::to_string(handled) + " flagged");
          });
  for (const double sign : {1.0, -1.0}) {
    const std::string id = sign > 0 ? "t2.orbit_limit_plus" : "t2.orbit_limit_minus";
    run.run({id, sign > 0 ? "F_a(0) -> (-1, 0) as a -> 1" : "F_a(0) -> (1, 0) as a -> -1", kT2Orbit, 1e-6, true, 0},
            [&, sign](Ctx& c) {
              const HoloMap sub = catalog::theorem2_subgroup();
              const Point image = apply(sub, {{"a", sign * (1.0 - 1e-8)}}, d.anchor);
              const Point limit{-sign, 0.0};
              c.at_most(distance(image, limit));
              c.rec.witness = {image};
              if (sign > 0) {
                const LeviReport r = model.report(limit);
                c.note("boundary is smooth at (-1, 0): |grad rho| = " + sci(r.grad_norm));
              } else {
                c.note("(1, 0) is the exceptional boundary point");
              }
            });
  }
  return run.finish();
}

Report run_lemma_a(const RunOptions& opts) {
  using namespace reinhardt;
  Runner run("lemma-a", opts);

  run.run({"la.enumeration_n2", "dimensions attainable in C^2 without exclusions include 4", kLaReduction, 0.0, false, 0},
          [&](Ctx& c) {
            const auto dims = enumerate_dims(2).dimensions();
            std::string list;
            for (int v : dims) list += (list.empty() ? "" : ", ") + std::to_string(v);
            c.rec.status = dims == std::set<int>{2, 4, 6, 8} ? Status::pass : Status::fail;
            c.note("dimensions {" + list + "}");
          });
  run.run({"la.surviving_structures", "only t = 1, p = 2, n1 = n2 = 1 survives the exclusions", kLaReduction, 0.0, false, 0},
          [&](Ctx& c) {
            const Enumeration e = enumerate_dims(2, true);
            std::set<int> s_values;
            bool ok = true;
            for (const auto& row : e.rows) {
              for (const auto& w : row.witnesses) {
                s_values.insert(w.s);
                ok = ok && w.t == 1 && w.p == 2 && w.block_sizes == std::vector<int>{1, 1};
              }
            }
            ok = ok && s_values == std::set<int>{0, 1};
            c.rec.status = ok ? Status::pass : Status::fail;
            c.note("surviving (s, t, p, sizes): (0, 1, 2, [1, 1]) and (1, 1, 2, [1, 1])");
          });
  run.run({"la.case_analysis", "each surviving normal form falls in the expected case", kLaCases, 0.0, false, 0},
          [&](Ctx& c) {
            struct Case {
              int s;
              double alpha;
              Shell base;
              LemmaAVerdict expected;
            };
            const double inf = std::numeric_limits<double>::infinity();
            const std::vector<Case> cases{
                {1, -1.0, {0.0, 2.0, false}, LemmaAVerdict::no_bounded_realization},
                {1, 0.5, {0.0, 2.0, false}, LemmaAVerdict::pseudoconvex},
                {1, -1.0, {0.5, 2.0, false}, LemmaAVerdict::not_simply_connected},
                {1, -1.0, {0.0, 2.0, true}, LemmaAVerdict::not_simply_connected},
                {1, -1.0, {0.0, inf, false}, LemmaAVerdict::non_hyperbolic},
                {0, 0.0, {0.0, 2.0, false}, LemmaAVerdict::non_hyperbolic},
            };
            int mismatches = 0;
            for (const auto& k : cases) {
              NormalForm f = NormalForm::structure(k.s, 1, {1, 1});
              if (k.s == 1) f.alpha[0][0] = k.alpha;
              f.base[0] = k.base;
              const LemmaACase got = classify_lemma_a(f);
              if (got.verdict != k.expected) {
                ++mismatches;
                c.note("s=" + std::to_string(k.s) + ", alpha=" + sci(k.alpha) + ": got " + to_string(got.verdict));
              }
            }
            c.rec.max_residual = mismatches;
            c.rec.status = mismatches == 0 ? Status::pass : Status::fail;
          });
  run.run({"la.disc_containment", "discs {|z1| < 1, z2 = rho} with |rho| = R/2 lie in the domain (R = 2, gamma = 1)",
           kLaDisc, 0.0, false, 1000},
          [&](Ctx& c) {
            const LemmaADomain dom{2.0, 1.0};
            const Extremum outside = max_over(c.samples, [&](std::size_t i) {
              Rng rng = make_stream(c.seed, c.stream, i);
              const Point z{random_in_disc(rng, 1.0), std::polar(dom.R / 2.0, uniform(rng, 0.0, 2.0 * std::numbers::pi))};
              if (std::abs(z[0]) >= 1.0) return Extremum{-1.0, z};
              return Extremum{membership(dom, z) ? 0.0 : 1.0, z};
            });
            c.rec.max_residual = std::max(0.0, outside.value);
            c.rec.witness = {outside.at};
            c.rec.status = outside.value <= 0.0 ? Status::pass : Status::fail;
            c.note("residual 1 marks a sample outside the domain");
          });
  run.run({"la.bound_decay", "bound at M = 1, R = 2, gamma = 1, rho = 1/2 decreases along |mu| = 0, 0.9, 0.99, 0.999",
           kLaBound, 1e-2, false, 0},
          [&](Ctx& c) {
            const LemmaADomain dom{2.0, 1.0};
            double prev = std::numeric_limits<double>::infinity();
            bool decreasing = true;
            std::string table;
            double last = 0.0;
            for (double mu : {0.0, 0.9, 0.99, 0.999}) {
              last = lemma_a_bound(dom, 1.0, mu, 0.5);
              decreasing = decreasing && last < prev;
              prev = last;
              table += (table.empty() ? "" : ", ") + sci(mu) + " -> " + sci(last);
            }
            c.rec.max_residual = last;
            c.rec.status = decreasing && last <= c.tol ? Status::pass : Status::fail;
            c.note(table);
          });
  return run.finish();
}

std::vector<std::string> scenario_names() { return {"theorem1", "theorem2", "lemma-a"}; }

std::vector<Report> run_scenario(std::string_view name, const RunOptions& opts) {
  if (name == "theorem1") return {run_theorem1(opts)};
  if (name == "theorem2") return {run_theorem2(opts)};
  if (name == "lemma-a") return {run_lemma_a(opts)};
  if (name == "all") {
    if (opts.domain) throw Error(ErrorCode::invalid_argument, "a domain override needs a single scenario");
    return {run_theorem1(opts), run_theorem2(opts), run_lemma_a(opts)};
  }
  throw Error(ErrorCode::not_found, "unknown scenario '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

json number_or_null(std::optional<double> v) {
  if (!v || !std::isfinite(*v)) return nullptr;
  return *v;
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

json point_json(const Point& p) {
  json a = json::array();
  for (const auto& c : p) a.push_back(complex_json(c));
  return a;
}

json vector_json(const CVector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(complex_json(v[i]));
  return a;
}

json matrix_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(r, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Point point_from(const json& j) {
  Point p;
  for (const auto& c : j) p.emplace_back(c.at(0).get<double>(), c.at(1).get<double>());
  return p;
}

std::optional<double> optional_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json report_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json w = json::array();
    for (const auto& p : c.witness) w.push_back(point_json(p));
    checks.push_back({{"id", c.id},
                      {"description", c.description},
                      {"paper_ref", c.paper_ref},
                      {"status", to_string(c.status)},
                      {"max_residual", number_or_null(c.max_residual)},
                      {"tolerance", number_or_null(c.tolerance)},
                      {"samples", c.samples},
                      {"witness", std::move(w)},
                      {"runtime_ms", number_or_null(c.runtime_ms)},
                      {"note", c.note}});
  }
  return {{"scenario", r.scenario}, {"seed", r.seed},   {"samples", r.samples},
          {"checks", std::move(checks)}, {"notes", r.notes}, {"overall", to_string(r.overall())}};
}

Report report_from(const json& j) {
  Report r;
  r.scenario = j.at("scenario").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.samples = j.at("samples").get<int>();
  if (j.contains("notes")) r.notes = j.at("notes").get<std::vector<std::string>>();
  for (const auto& c : j.at("checks")) {
    CheckRecord rec;
    rec.id = c.at("id").get<std::string>();
    rec.description = c.at("description").get<std::string>();
    rec.paper_ref = c.at("paper_ref").get<std::string>();
    rec.status = status_from_string(c.at("status").get<std::string>());
    rec.max_residual = optional_from(c.at("max_residual"));
    rec.tolerance = optional_from(c.at("tolerance"));
    rec.samples = c.value("samples", 0);
    for (const auto& p : c.at("witness")) rec.witness.push_back(point_from(p));
    rec.runtime_ms = optional_from(c.at("runtime_ms"));
    rec.note = c.value("note", std::string{});
    r.checks.push_back(std::move(rec));
  }
  return r;
}

std::string opt_sci(const std::optional<double>& v) { return v ? sci(*v) : "-"; }

std::string escape_cell(std::string s) {
  std::string out;
  for (char ch : s) {
    if (ch == '|') out += "\\|";
    else if (ch == '\n') out += ' ';
    else out += ch;
  }
  return out;
}

}  // namespace

std::string to_json(const Report& r) { return report_json(r).dump(2) + "\n"; }

std::string to_json(const std::vector<Report>& reports) {
  json a = json::array();
  for (const auto& r : reports) a.push_back(report_json(r));
  return a.dump(2) + "\n";
}

Report report_from_json(std::string_view text) {
  try {
    return report_from(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("report: ") + e.what());
  }
}

std::string to_markdown(const Report& r) {
  std::ostringstream out;
  out << "## " << r.scenario << ": " << to_string(r.overall()) << "\n\n";
  out << "seed " << r.seed << ", samples " << r.samples << "\n\n";
  for (const auto& n : r.notes) out << "> " << n << "\n\n";
  out << "| id | status | max residual | tolerance | samples | claim | note |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const auto& c : r.checks) {
    out << "| " << c.id << " | " << to_string(c.status) << " | " << opt_sci(c.max_residual) << " | "
        << opt_sci(c.tolerance) << " | " << c.samples << " | " << escape_cell(c.paper_ref) << " | "
        << escape_cell(c.note) << " |\n";
  }
  return out.str();
}

std::string to_markdown(const std::vector<Report>& reports) {
  std::string out;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    if (i) out += "\n";
    out += to_markdown(reports[i]);
  }
  return out;
}

std::string to_json(const LeviReport& r, const DomainSpec& d) {
  json basis = json::array();
  for (const auto& v : r.tangent_basis) basis.push_back(vector_json(v));
  json j = {{"domain", d.name},
            {"point", point_json(r.point)},
            {"residual", r.residual},
            {"grad", vector_json(r.grad)},
            {"grad_norm", r.grad_norm},
            {"hessian", matrix_json(r.hessian)},
            {"chart", r.chart == LeviChart::graph ? "graph" : "orthonormal"},
            {"pivot", r.pivot},
            {"tangent_basis", std::move(basis)},
            {"restricted_form", matrix_json(r.restricted_form)},
            {"eigenvalues", r.eigenvalues},
            {"rank", r.rank},
            {"signature", {{"positive", r.signature.positive}, {"negative", r.signature.negative}, {"zero", r.signature.zero}}},
            {"near_exceptional", r.near_exceptional}};
  return j.dump(2) + "\n";
}

std::string to_markdown(const LeviReport& r, const DomainSpec& d) {
  std::ostringstream out;
  out << "## Levi form of " << d.name << " at " << show(r.point) << "\n\n";
  out << "| quantity | value |\n|---|---|\n";
  out << "| residual | " << sci(r.residual) << " |\n";
  out << "| grad norm | " << sci(r.grad_norm) << " |\n";
  out << "| chart | " << (r.chart == LeviChart::graph ? "graph" : "orthonormal") << " (pivot z" << r.pivot << ") |\n";
  out << "| eigenvalues | ";
  for (std::size_t i = 0; i < r.eigenvalues.size(); ++i) out << (i ? ", " : "") << sci(r.eigenvalues[i]);
  out << " |\n";
  out << "| rank | " << r.rank << " |\n";
  out << "| signature (+, -, 0) | (" << r.signature.positive << ", " << r.signature.negative << ", "
      << r.signature.zero << ") |\n";
  if (r.near_exceptional) out << "| note | near an exceptional point |\n";
  return out.str();
}

std::string to_json(const reinhardt::Enumeration& e) {
  json rows = json::array();
  for (const auto& row : e.rows) {
    json ws = json::array();
    for (const auto& w : row.witnesses) {
      ws.push_back({{"s", w.s}, {"t", w.t}, {"p", w.p}, {"block_sizes", w.block_sizes}, {"excluded", w.excluded},
                    {"reason", w.reason}});
    }
    rows.push_back({{"dimension", row.dimension}, {"witnesses", std::move(ws)}});
  }
  const auto dims = e.dimensions();
  json j = {{"n", e.n},
            {"exclusions", e.exclusions},
            {"dimensions", std::vector<int>(dims.begin(), dims.end())},
            {"rows", std::move(rows)}};
  return j.dump(2) + "\n";
}

std::string to_markdown(const reinhardt::Enumeration& e) {
  std::ostringstream out;
  out << "## dim Aut_0 of normalized Reinhardt forms in C^" << e.n << (e.exclusions ? " (exclusions applied)" : "")
      << "\n\n";
  out << "| dimension | witnesses (s, t, p, [n_i]) | excluded |\n|---|---|---|\n";
  for (const auto& row : e.rows) {
    std::string ws;
    std::string ex;
    for (const auto& w : row.witnesses) {
      std::string sizes;
      for (int s : w.block_sizes) sizes += (sizes.empty() ? "" : ", ") + std::to_string(s);
      ws += (ws.empty() ? "" : "; ") + std::string("(") + std::to_string(w.s) + ", " + std::to_string(w.t) + ", " +
            std::to_string(w.p) + ", [" + sizes + "])";
      ex += (ex.empty() ? "" : "; ") + (w.excluded ? w.reason : std::string("no"));
    }
    out << "| " << row.dimension << " | " << ws << " | " << ex << " |\n";
  }
  return out.str();
}

// ---------------------------------------------------------------------------
// Exceptional point profile

std::vector<ProfileRow> profile_exceptional(const std::vector<double>& eps, int arc_samples, int angle_samples) {
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0) || !std::isfinite(eps[i])) throw Error(ErrorCode::invalid_argument, "eps values must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) throw Error(ErrorCode::invalid_argument, "eps values must be strictly decreasing");
  }
  if (arc_samples < 1 || angle_samples < 1) throw Error(ErrorCode::invalid_argument, "sample counts must be positive");
  const DomainSpec d = catalog::theorem2_domain();
  std::vector<ProfileRow> rows;
  for (double e : eps) {
    ProfileRow row;
    row.eps = e;
    // |1 + e^{i theta} eps| < 1  <=>  cos(theta) < -eps/2
    if (e >= 2.0) {
      row.note = "empty slice";
      rows.push_back(std::move(row));
      continue;
    }
    const double t0 = std::acos(-e / 2.0);
    const double t1 = 2.0 * std::numbers::pi - t0;
    const auto cells = static_cast<std::size_t>(arc_samples) * static_cast<std::size_t>(angle_samples);
    std::vector<Extremum> slots(cells);
    parallel_for(cells, [&](std::size_t idx) {
      const auto a = idx / static_cast<std::size_t>(angle_samples);
      const auto b = idx % static_cast<std::size_t>(angle_samples);
      const double theta = t0 + (t1 - t0) * (static_cast<double>(a) + 0.5) / arc_samples;
      const double psi = 2.0 * std::numbers::pi * static_cast<double>(b) / angle_samples;
      const Point origin{1.0 + std::polar(e, theta), 0.0};
      try {
        const BoundaryHit hit = locate_boundary(d.rho, origin, Point{0.0, std::polar(1.0, psi)});
        slots[idx] = {std::abs(hit.point[1]), hit.point};
      } catch (const Error& err) {
        if (err.code() != ErrorCode::no_boundary && err.code() != ErrorCode::division_by_zero) throw;
      }
    });
    Extremum best;
    for (auto& s : slots) {
      if (s.value > best.value) best = std::move(s);
    }
    if (best.at.empty()) {
      row.note = "empty slice";
    } else {
      row.max_abs_z2 = best.value;
      row.witness = best.at;
    }
    if (!rows.empty() && rows.back().max_abs_z2 && row.max_abs_z2) {
      row.slope = std::log(*row.max_abs_z2 / *rows.back().max_abs_z2) / std::log(e / rows.back().eps);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string to_json(const std::vector<ProfileRow>& rows) {
  json a = json::array();
  for (const auto& r : rows) {
    a.push_back({{"eps", r.eps},
                 {"max_abs_z2", number_or_null(r.max_abs_z2)},
                 {"slope", number_or_null(r.slope)},
                 {"witness", r.witness.empty() ? json(nullptr) : point_json(r.witness)},
                 {"note", r.note}});
  }
  return a.dump(2) + "\n";
}

std::string to_markdown(const std::vector<ProfileRow>& rows) {
  std::ostringstream out;
  out << "## Boundary slices |z1 - 1| = eps near (1, 0) (exploratory)\n\n";
  out << "| eps | max abs(z2) | log-log slope | note |\n|---|---|---|---|\n";
  for (const auto& r : rows) {
    out << "| " << sci(r.eps) << " | " << opt_sci(r.max_abs_z2) << " | " << opt_sci(r.slope) << " | " << r.note << " |\n";
  }
  return out.str();
}

}  // namespace levikit::harness
