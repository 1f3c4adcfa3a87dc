// Acceptance run: one PASS/FAIL line per criterion. Library results are
// cross-checked against closed forms coded directly here.

#include <sys/wait.h>

#include <array>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "levikit/catalog.hpp"
#include "levikit/levi.hpp"
#include "levikit/maps.hpp"
#include "levikit/reinhardt.hpp"
#include "levikit/sampling.hpp"

using namespace levikit;
using cd = std::complex<double>;

namespace {

int g_failures = 0;

void verdict(int id, bool ok, const std::string& detail) {
  if (!ok) ++g_failures;
  std::cout << (ok ? "PASS" : "FAIL") << " criterion " << id << ": " << detail << std::endl;
}

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Closed forms.

double rho1(const Point& z) {
  const double cross = 2.0 * (std::conj(z[1]) * z[2]).real();
  return std::norm(z[0]) + std::pow(std::norm(z[1]), 2) + std::pow(std::norm(z[2]), 2) + cross * cross - 1.0;
}

double rho2(const Point& z) {
  const cd u = z[0] - 1.0;
  const double inner = (z[1] * z[1] / u).real() * 2.0 - 1.5 * std::norm(z[1]) / std::abs(u);
  return std::norm(z[0]) + std::pow(std::norm(z[1]), 2) + 8.0 * std::norm(u) * inner * inner - 1.0;
}

double rho_model(const Point& w) {
  const double g = 2.0 * (w[1] * w[1]).real() - 1.5 * std::norm(w[1]);
  return w[0].real() + 0.25 * std::pow(std::norm(w[1]), 2) + 2.0 * g * g;
}

Point thm1_map(cd a, const Point& z) {
  const cd den = 1.0 - std::conj(a) * z[0];
  const double k = std::pow(1.0 - std::norm(a), 0.25);
  return {(z[0] - a) / den, k * z[1] / std::sqrt(den), k * z[2] / std::sqrt(den)};
}

Point thm2_map(double a, const Point& z) {
  const cd den = 1.0 - a * z[0];
  const double k = std::pow(1.0 - a * a, 0.25);
  return {(z[0] - a) / den, k * z[1] / std::sqrt(den)};
}

// Square root with its cut on the positive reals.
cd sqrt_poscut(cd u) {
  double arg = std::arg(u);
  if (arg <= 0.0) arg += 2.0 * std::numbers::pi;
  return std::polar(std::sqrt(std::abs(u)), arg / 2.0);
}

Point transform(const Point& z) {
  return {(z[0] + 1.0) / (z[0] - 1.0), std::sqrt(2.0) * z[1] / sqrt_poscut(z[0] - 1.0)};
}

double rel(double lhs, double rhs) { return std::abs(lhs - rhs) / std::max({1.0, std::abs(lhs), std::abs(rhs)}); }

cd random_disc(std::mt19937_64& gen, double radius) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  return std::polar(radius * std::sqrt(u(gen)), 2.0 * std::numbers::pi * u(gen));
}

std::vector<DomainSample> domain_samples(const DomainSpec& d, int count, const std::string& stream) {
  std::vector<DomainSample> out;
  for (int i = 0; i < count; ++i) {
    Rng rng = make_stream(42, stream, static_cast<std::uint64_t>(i));
    out.push_back(sample_domain(d, rng));
  }
  return out;
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const int n = 10000;
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> real_a(-1.0, 1.0);
  const auto s1 = domain_samples(catalog::theorem1_domain(), n, "acc_c1_thm1");
  const auto s2 = domain_samples(catalog::theorem2_domain(), n, "acc_c1_thm2");
  double worst1 = 0.0, worst2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const Point& z = (i % 2 == 0) ? s1[i].interior : s1[i].boundary;
    const cd a = random_disc(gen, 1.0);
    worst1 = std::max(worst1, rel(rho1(thm1_map(a, z)) * std::norm(1.0 - std::conj(a) * z[0]),
                                  (1.0 - std::norm(a)) * rho1(z)));
    const Point& w = (i % 2 == 0) ? s2[i].interior : s2[i].boundary;
    const double b = real_a(gen);
    worst2 = std::max(worst2, rel(rho2(thm2_map(b, w)) * std::norm(1.0 - b * w[0]), (1.0 - b * b) * rho2(w)));
  }
  SampleOptions opts;
  opts.samples = n;
  const auto i1 = catalog::theorem1_identity();
  const auto i2 = catalog::theorem2_identity();
  const auto lib1 = verify_invariance_identity(catalog::theorem1_domain(), catalog::theorem1_subgroup(),
                                               i1.denominator, i1.factor, opts);
  const auto lib2 = verify_invariance_identity(catalog::theorem2_domain(), catalog::theorem2_subgroup(),
                                               i2.denominator, i2.factor, opts);
  const double secs = seconds_since(t0);
  const double worst = std::max({worst1, worst2, lib1.max_residual, lib2.max_residual});
  verdict(1, worst <= 1e-10 && secs < 5.0,
          "identity residuals closed-form " + sci(worst1) + " / " + sci(worst2) + ", library " +
              sci(lib1.max_residual) + " / " + sci(lib2.max_residual) + " over 1e4 (z, a); " + sci(secs) + " s");
}

void criterion2() {
  const auto t0 = std::chrono::steady_clock::now();
  const LeviModel model(catalog::theorem1_domain());
  const double t = std::pow(6.0, -0.25);
  bool ok = model.report(Point{1.0, 0.0, 0.0}).rank == 0;
  ok = ok && model.report(Point{0.0, t, t}).rank == 1;
  ok = ok && model.report(Point{0.0, 1.0, 0.0}).rank == 2;
  std::mt19937_64 gen(2);
  int located = 0;
  double worst_locate = 0.0;
  for (int i = 0; i < 10; ++i) {
    const cd z1 = random_disc(gen, 0.9);
    const cd w = std::polar(1.0, std::uniform_real_distribution<double>(0.0, 6.283)(gen));
    const double sign = i % 2 == 0 ? 1.0 : -1.0;
    const Point dir{z1, w, sign * w};
    const Point q = locate_boundary(model.domain(), dir).point;
    // on the ray through dir, |z1|^2 s^2 + 6 s^4 = 1
    const double s = std::sqrt((-std::norm(z1) + std::sqrt(std::pow(std::norm(z1), 2) + 24.0)) / 12.0);
    worst_locate = std::max(worst_locate, std::abs(q[0] - s * z1) + std::abs(q[1] - s * w));
    if (model.report(q).rank == 1) ++located;
  }
  ok = ok && located == 10 && worst_locate < 1e-8;
  ScanOptions sopts;
  sopts.keep_samples = false;
  const auto scan = pseudoconvexity_scan(model, 2000, 42, sopts);
  const double secs = seconds_since(t0);
  ok = ok && scan.min_eigenvalue >= -1e-8 && secs < 30.0;
  verdict(2, ok,
          "ranks 0/1/2 at the fixed points, " + std::to_string(located) + "/10 located (z1, w, +-w) points rank 1 (ray error " +
              sci(worst_locate) + "), scan min eigenvalue " + sci(scan.min_eigenvalue) + " over " +
              std::to_string(scan.evaluated) + " samples; " + sci(secs) + " s");
}

void criterion3() {
  const DomainSpec model = catalog::theorem2_unbounded();
  const Point q{-0.75, 1.0};
  const double residual = std::abs(eval(model.rho, q).real());
  LeviOptions opts;
  opts.chart = LeviChart::graph;
  opts.pivot = 1;
  const auto r = levi_report(model, q, opts);
  const bool one_by_one = r.restricted_form.rows() == 1 && r.restricted_form.cols() == 1;
  const cd form = one_by_one ? r.restricted_form(0, 0) : cd{NAN, NAN};
  // rho' = re(z1) + phi(z2), so the graph-chart form is phi_{z2 z2bar} = laplacian(phi) / 4
  auto phi = [&](double x, double y) { return rho_model(Point{0.0, cd{x, y}}); };
  auto five_point = [&](double h) {
    return (phi(1 + h, 0) + phi(1 - h, 0) + phi(1, h) + phi(1, -h) - 4.0 * phi(1, 0)) / (h * h);
  };
  const double lap = (4.0 * five_point(5e-4) - five_point(1e-3)) / 3.0;
  const bool ok = residual <= 1e-12 && std::abs(rho_model(q)) <= 1e-12 && one_by_one &&
                  std::abs(form - cd{-1.0, 0.0}) <= 1e-9 && std::abs(lap / 4.0 + 1.0) <= 1e-5;
  verdict(3, ok,
          "residual " + sci(residual) + ", graph-chart Levi form [" + std::to_string(form.real()) + "] (off by " + sci(std::abs(form + 1.0)) + "), finite-difference oracle " +
              sci(lap / 4.0) + ", orthonormal-chart eigenvalue " + sci(levi_report(model, q).eigenvalues.front()));
}

void criterion4() {
  const DomainSpec d = catalog::theorem2_domain();
  const DomainSpec model = catalog::theorem2_unbounded();
  const HoloMap cayley = catalog::cayley_transform();
  SampleOptions in_opts;
  in_opts.samples = 10000;
  in_opts.boundary = false;
  const auto inside = verify_boundary_preservation(d, model, cayley, {}, in_opts, 1e-9, 1e-8);
  SampleOptions bd_opts;
  bd_opts.samples = 1000;
  bd_opts.interior = false;
  const auto bd = verify_boundary_preservation(d, model, cayley, {}, bd_opts, 1e-9, 1e-8);

  int hand_violations = 0;
  double hand_boundary = 0.0;
  for (const auto& s : domain_samples(d, 10000, "acc_c4")) {
    if (rho_model(transform(s.interior)) >= 1e-9) ++hand_violations;
  }
  for (const auto& s : domain_samples(d, 1000, "acc_c4_boundary")) {
    if (std::abs(s.boundary[0] - 1.0) < 1e-6) continue;
    hand_boundary = std::max(hand_boundary, std::abs(rho_model(transform(s.boundary))));
  }
  const auto cont = verify_branch_continuity(cayley, {}, 2, 1, Point{0.0, 1.0}, 100, 42);
  const bool ok = inside.interior_violations == 0 && inside.undefined == 0 && bd.max_boundary_residual <= 1e-8 &&
                  hand_violations == 0 && hand_boundary <= 1e-8 && cont.max_jump <= 1e-6;
  verdict(4, ok,
          std::to_string(inside.interior_violations) + " interior violations (closed form " +
              std::to_string(hand_violations) + "), boundary |rho'| " + sci(bd.max_boundary_residual) +
              " (closed form " + sci(hand_boundary) + "), branch jump " + sci(cont.max_jump) + " over " +
              std::to_string(cont.paths) + " paths");
}

void criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto e3 = reinhardt::enumerate_dims(3);
  const auto e2 = reinhardt::enumerate_dims(2);
  const double secs = seconds_since(t0);
  bool witnessed = true;
  std::map<int, int> counts3;
  for (const auto& row : e3.rows) {
    witnessed = witnessed && !row.witnesses.empty();
    counts3[row.dimension] = static_cast<int>(row.witnesses.size());
  }
  std::map<int, int> fixture;
  std::ifstream in(std::string(LEVIKIT_FIXTURES) + "/reinhardt_dims.txt");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    int n = 0, dim = 0, witnesses = 0;
    std::string mode;
    fields >> n >> mode >> dim >> witnesses;
    if (n == 3 && mode == "all") fixture[dim] = witnesses;
  }
  const bool ok = e3.dimensions() == std::set<int>{3, 5, 7, 9, 11, 15} && witnessed && !e3.dimensions().contains(4) &&
                  e2.dimensions().contains(4) && counts3 == fixture && secs < 1.0;
  verdict(5, ok,
          "n = 3 dimensions {3, 5, 7, 9, 11, 15} with witness counts matching the hand fixture, 4 absent; n = 2 "
          "contains 4; " + sci(secs) + " s");
}

void criterion6() {
  const reinhardt::LemmaADomain dom{2.0, 1.0};
  double prev = INFINITY, last = 0.0;
  bool decreasing = true;
  std::string values;
  for (double mu : {0.0, 0.9, 0.99, 0.999}) {
    last = reinhardt::lemma_a_bound(dom, 1.0, mu, 0.5);
    const double r_mu = 2.0 / (2.0 * (1.0 - mu * mu));
    const double hand = r_mu / ((r_mu - 0.5) * (r_mu - 0.5));
    decreasing = decreasing && last < prev && std::abs(last - hand) <= 1e-12 * hand;
    prev = last;
    values += (values.empty() ? "" : ", ") + sci(last);
  }
  std::mt19937_64 gen(6);
  int outside = 0;
  for (int i = 0; i < 1000; ++i) {
    const cd z1 = random_disc(gen, 1.0);
    const cd z2 = std::polar(1.0, std::uniform_real_distribution<double>(0.0, 6.283)(gen));
    if (!reinhardt::membership(dom, Point{z1, z2})) ++outside;
  }
  verdict(6, decreasing && last <= 1e-2 && outside == 0,
          "bounds " + values + " strictly decreasing; " + std::to_string(outside) + "/1000 disc samples outside");
}

void criterion7() {
  const LeviModel model(catalog::theorem2_domain());
  double worst = 0.0, worst_fd = 0.0;
  int used = 0;
  for (const auto& s : domain_samples(model.domain(), 4000, "acc_c7")) {
    if (used == 1000) break;
    const Point& z = s.boundary;
    if (std::abs(z[0] - 1.0) + std::abs(z[1]) < 1e-2) continue;
    ++used;
    const CVector g = model.gradient(z);
    const cd rhs = (-(z[1] / 2.0) * g(1) + 1.0 - std::conj(z[0])) / (z[0] - 1.0);
    worst = std::max(worst, std::abs(g(0) - rhs) / std::max(1.0, std::abs(g(0))));
    if (used % 10 == 0) {
      // d/dz1 = (d/dx - i d/dy) / 2 of the closed form
      const double h = 1e-6 * std::max(1e-2, std::abs(z[0] - 1.0));
      auto f = [&](cd dz) { return rho2(Point{z[0] + dz, z[1]}); };
      const cd fd = 0.5 * cd{(f(h) - f(-h)) / (2 * h), -(f(cd{0, h}) - f(cd{0, -h})) / (2 * h)};
      worst_fd = std::max(worst_fd, std::abs(fd - g(0)) / std::max(1.0, std::abs(g(0))));
    }
  }
  bool degenerate = false;
  try {
    (void)model.report(Point{1.0, 0.0});
  } catch (const Error& e) {
    degenerate = e.code() == ErrorCode::degenerate_gradient;
  }
  verdict(7, used == 1000 && worst <= 1e-9 && worst_fd <= 1e-5 && degenerate,
          "gradient identity residual " + sci(worst) + " at " + std::to_string(used) +
              " boundary points (finite-difference gradient agrees to " + sci(worst_fd) + "); (1, 0) " +
              (degenerate ? "reports degenerate gradient" : "did not report degenerate gradient"));
}

void criterion8() {
  const DomainSpec d = catalog::theorem1_domain();
  SampleOptions opts;
  opts.samples = 2000;
  const auto t2 = verify_torus_invariance(d, TorusAction{3, {{1, 0, 0}, {0, 1, 1}}}, opts);
  const auto circ = verify_torus_invariance(d, TorusAction{3, {{1, 1, 1}}}, opts);
  const auto t3 = verify_torus_invariance(d, TorusAction{3, {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}, opts);
  double hand = 0.0;
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (const auto& s : domain_samples(d, 2000, "acc_c8")) {
    const cd a = std::polar(1.0, angle(gen)), b = std::polar(1.0, angle(gen));
    const Point& z = s.interior;
    hand = std::max(hand, std::abs(rho1(Point{a * z[0], b * z[1], b * z[2]}) - rho1(z)));
  }
  const double at_witness = t3.witness.empty() ? 0.0 : rho1(t3.witness);
  const bool ok = t2.max_residual <= 1e-10 && circ.max_residual <= 1e-10 && hand <= 1e-10 && t3.max_residual > 0.1 &&
                  !t3.witness.empty();
  verdict(8, ok,
          "T^2 residual " + sci(t2.max_residual) + " (closed form " + sci(hand) + "), circular " +
              sci(circ.max_residual) + ", T^3 residual " + sci(t3.max_residual) + " at a witness with rho " +
              sci(at_witness));
}

std::string capture(const std::string& cmd, int& code) {
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) {
    code = -1;
    return out;
  }
  std::array<char, 4096> buf;
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  const int status = pclose(pipe);
  code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return out;
}

void criterion9() {
  const std::string base = std::string(LEVIKIT_CLI) + " verify all --seed 42 --format json --threads ";
  int c1 = 0, c4 = 0;
  const std::string one = capture(base + "1", c1);
  const std::string four = capture(base + "4", c4);
  verdict(9, c1 == 0 && c4 == 0 && !one.empty() && one == four,
          "verify all --seed 42 with 1 and 4 threads: exit " + std::to_string(c1) + "/" + std::to_string(c4) + ", " +
              std::to_string(one.size()) + " bytes, " + (one == four ? "identical" : "different"));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> criteria{criterion1, criterion2, criterion3, criterion4, criterion5,
                                                    criterion6, criterion7, criterion8, criterion9};
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    try {
      criteria[i]();
    } catch (const std::exception& e) {
      verdict(static_cast<int>(i + 1), false, std::string("threw: ") + e.what());
    }
  }
  std::cout << (g_failures == 0 ? "all criteria pass" : std::to_string(g_failures) + " criteria fail") << std::endl;
  return g_failures == 0 ? 0 : 1;
}
