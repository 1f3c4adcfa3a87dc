#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"
#include "levikit/levikit.h"

namespace {

std::string take(char* s) {
  std::string out = s == nullptr ? "" : s;
  lk_string_free(s);
  return out;
}

}  // namespace

TEST_SUITE("capi") {

TEST_CASE("status names and version") {
  CHECK(std::string(lk_version()) == "0.1.0");
  CHECK(std::string(lk_status_name(LK_OK)) == "ok");
  CHECK(std::string(lk_status_name(LK_DEGENERATE_GRADIENT)) == "degenerate_gradient");
  CHECK(std::string(lk_status_name(static_cast<lk_status>(99))) == "unknown");
}

TEST_CASE("domain handles") {
  lk_domain* d = nullptr;
  REQUIRE(lk_domain_load("builtin:thm1", &d) == LK_OK);
  int n = 0;
  CHECK(lk_domain_dimension(d, &n) == LK_OK);
  CHECK(n == 3);
  char* name = nullptr;
  CHECK(lk_domain_name(d, &name) == LK_OK);
  CHECK(take(name) == "thm1");
  char* rho = nullptr;
  CHECK(lk_domain_rho(d, &rho) == LK_OK);
  CHECK(take(rho).find("abs2(z1)") == 0);

  const double origin[6] = {0, 0, 0, 0, 0, 0};
  double re = 0.0, im = 1.0;
  CHECK(lk_domain_eval(d, origin, 3, &re, &im) == LK_OK);
  CHECK(re == doctest::Approx(-1.0));
  CHECK(im == 0.0);
  CHECK(lk_domain_eval(d, origin, 2, &re, &im) == LK_INVALID_ARGUMENT);
  CHECK(std::string(lk_last_error()).find("dimension") != std::string::npos);

  double coords[6];
  int got = 0;
  REQUIRE(lk_parse_point("(1, 0, 0)", coords, 3, &got) == LK_OK);
  CHECK(got == 3);
  int rank = -1;
  CHECK(lk_levi_rank(d, coords, 3, &rank) == LK_OK);
  CHECK(rank == 0);
  char* json = nullptr;
  CHECK(lk_levi(d, coords, 3, LK_CHART_ORTHONORMAL, 0, LK_FORMAT_JSON, &json) == LK_OK);
  CHECK(take(json).find("\"rank\": 0") != std::string::npos);
  CHECK(lk_levi_rank(d, origin, 3, &rank) == LK_INVALID_ARGUMENT);
  lk_domain_free(d);
  lk_domain_free(nullptr);
}

TEST_CASE("error statuses") {
  lk_domain* d = nullptr;
  CHECK(lk_domain_load("builtin:nonesuch", &d) == LK_NOT_FOUND);
  CHECK(d == nullptr);
  CHECK(std::string(lk_last_error()).find("nonesuch") != std::string::npos);
  CHECK(lk_domain_load(nullptr, &d) == LK_INVALID_ARGUMENT);
  CHECK(lk_domain_from_text("domain x\ndim 1\nrho abs2(z2)\n", nullptr, &d) == LK_PARSE_ERROR);
  double coords[2];
  int got = 0;
  CHECK(lk_parse_point("(1, 2)", coords, 1, &got) == LK_INVALID_ARGUMENT);
  CHECK(got == 2);
  CHECK(lk_parse_point("(1, z1)", coords, 1, &got) == LK_PARSE_ERROR);

  REQUIRE(lk_domain_load("builtin:thm2", &d) == LK_OK);
  const double exceptional[4] = {1, 0, 0, 0};
  int rank = 0;
  CHECK(lk_levi_rank(d, exceptional, 2, &rank) == LK_DEGENERATE_GRADIENT);
  CHECK(std::string(lk_last_error()).find("degenerate gradient") != std::string::npos);
  lk_domain_free(d);
}

TEST_CASE("domain from text") {
  lk_domain* d = nullptr;
  const char* text = "domain a\ndim 1\nrho abs2(z1) - 1\n\ndomain b\ndim 2\nrho abs2(z1) + abs2(z2) - 4\n";
  REQUIRE(lk_domain_from_text(text, "b", &d) == LK_OK);
  int n = 0;
  lk_domain_dimension(d, &n);
  CHECK(n == 2);
  lk_domain_free(d);
  CHECK(lk_domain_from_text(text, "c", &d) == LK_NOT_FOUND);
}

TEST_CASE("enumerate and profile") {
  char* out = nullptr;
  REQUIRE(lk_enumerate(3, 0, LK_FORMAT_MARKDOWN, &out) == LK_OK);
  const std::string md = take(out);
  CHECK(md.find("| 15 |") != std::string::npos);
  CHECK(md.find("| 4 |") == std::string::npos);
  CHECK(lk_enumerate(0, 0, LK_FORMAT_JSON, &out) == LK_INVALID_ARGUMENT);
  const double eps[2] = {0.5, 0.1};
  REQUIRE(lk_profile(eps, 2, LK_FORMAT_JSON, &out) == LK_OK);
  CHECK(take(out).find("\"slope\"") != std::string::npos);
  const double bad[2] = {0.1, 0.5};
  CHECK(lk_profile(bad, 2, LK_FORMAT_JSON, &out) == LK_INVALID_ARGUMENT);
  CHECK(lk_profile(nullptr, 0, LK_FORMAT_JSON, &out) == LK_OK);
  lk_string_free(out);
}

TEST_CASE("verify") {
  lk_verify_options o;
  lk_verify_options_init(&o);
  CHECK(o.seed == 42);
  o.samples = 50;
  lk_reports* r = nullptr;
  REQUIRE(lk_verify("lemma-a", &o, nullptr, &r) == LK_OK);
  CHECK(lk_reports_passed(r) == 1);
  char* json = nullptr;
  REQUIRE(lk_reports_render(r, LK_FORMAT_JSON, &json) == LK_OK);
  const std::string text = take(json);
  CHECK(text.front() == '[');
  CHECK(text.find("\"overall\": \"pass\"") != std::string::npos);
  lk_reports_free(r);

  o.config_json = R"({"tolerances": {"la.bound_decay": 1e-4}})";
  REQUIRE(lk_verify("lemma-a", &o, nullptr, &r) == LK_OK);
  CHECK(lk_reports_passed(r) == 0);
  lk_reports_free(r);

  o.config_json = "{oops";
  CHECK(lk_verify("lemma-a", &o, nullptr, &r) == LK_PARSE_ERROR);
  CHECK(r == nullptr);
  o.config_json = nullptr;
  CHECK(lk_verify("theorem9", &o, nullptr, &r) == LK_NOT_FOUND);

  lk_domain* d = nullptr;
  REQUIRE(lk_domain_load("builtin:thm1_n4", &d) == LK_OK);
  CHECK(lk_verify("all", &o, d, &r) == LK_INVALID_ARGUMENT);
  lk_domain_free(d);
  CHECK(lk_reports_passed(nullptr) == 0);
  lk_reports_free(nullptr);
}

}
