#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "anisomean.h"
#include "json.hpp"

namespace {

constexpr double kPi = std::numbers::pi;

// Owns a measure handle for the scope of a test case.
struct MeasureHandle {
  am_measure* m = nullptr;
  ~MeasureHandle() { am_measure_free(m); }
};

struct FunctionHandle {
  am_function* f = nullptr;
  ~FunctionHandle() { am_function_free(f); }
};

struct DomainHandle {
  am_domain* d = nullptr;
  ~DomainHandle() { am_domain_free(d); }
};

// Takes ownership of a char* result and parses it.
nlohmann::json take_json(char* text) {
  REQUIRE(text != nullptr);
  const nlohmann::json parsed = nlohmann::json::parse(text);
  am_string_free(text);
  return parsed;
}

MeasureHandle make_four_axes() {
  const double dirs[8] = {1.0, 0.0, -1.0, 0.0, 0.0, 1.0, 0.0, -1.0};
  const double weights[4] = {1.0, 1.0, 1.0, 1.0};
  MeasureHandle h;
  REQUIRE(am_measure_atomic(2, 4, dirs, weights, &h.m) == AM_OK);
  return h;
}

MeasureHandle make_pm1() {
  const double dirs[2] = {1.0, -1.0};
  const double weights[2] = {1.0, 1.0};
  MeasureHandle h;
  REQUIRE(am_measure_atomic(1, 2, dirs, weights, &h.m) == AM_OK);
  return h;
}

}  // namespace

TEST_CASE("status names and error messages") {
  CHECK(std::strcmp(am_status_name(AM_OK), "Ok") == 0);
  CHECK(std::strcmp(am_status_name(AM_ERR_NON_UNIT_DIRECTION), "NonUnitDirection") == 0);
  CHECK(std::strcmp(am_status_name(AM_ERR_PARSE), "ParseError") == 0);
  CHECK(std::strcmp(am_status_name(AM_ERR_INTERNAL), "Internal") == 0);
  CHECK(std::strcmp(am_status_name(static_cast<am_status>(57)), "Unknown") == 0);

  CHECK(am_measure_uniform(2, nullptr) == AM_ERR_BAD_PARAMETER);
  const std::string msg = am_last_error_message();
  CHECK(msg.find("am_measure_uniform") != std::string::npos);

  am_string_free(nullptr);  // must be a no-op
  am_measure_free(nullptr);
  am_function_free(nullptr);
  am_domain_free(nullptr);
}

TEST_CASE("measure lifecycle through the C surface") {
  MeasureHandle circ;
  REQUIRE(am_measure_uniform(2, &circ.m) == AM_OK);
  int dim = 0;
  CHECK(am_measure_dim(circ.m, &dim) == AM_OK);
  CHECK(dim == 2);
  const char* kind = nullptr;
  CHECK(am_measure_kind(circ.m, &kind) == AM_OK);
  CHECK(std::strcmp(kind, "uniform") == 0);
  double mass = 0.0;
  CHECK(am_measure_total_mass(circ.m, &mass) == AM_OK);
  CHECK(mass == doctest::Approx(2.0 * kPi).epsilon(1e-14));

  // The uniform direction average is the same for every unit k, so the
  // ellipticity equals the closed-form circle cosine moment.
  const double s = 0.5;
  const double closed = 2.0 * std::sqrt(kPi) *
                        std::exp(std::lgamma(s + 0.5) - std::lgamma(s + 1.0));
  double ell = 0.0;
  CHECK(am_measure_ellipticity(circ.m, s, &ell) == AM_OK);
  CHECK(ell == doctest::Approx(closed).epsilon(1e-9));

  MeasureHandle four = make_four_axes();
  double moment[4] = {0, 0, 0, 0};
  CHECK(am_measure_second_moment(four.m, moment) == AM_OK);
  CHECK(moment[0] == 2.0);
  CHECK(moment[1] == 0.0);
  CHECK(moment[2] == 0.0);
  CHECK(moment[3] == 2.0);

  char* json_text = nullptr;
  REQUIRE(am_measure_to_json(four.m, &json_text) == AM_OK);
  const std::string round_trip(json_text);
  MeasureHandle re;
  REQUIRE(am_measure_from_json(json_text, &re.m) == AM_OK);
  am_string_free(json_text);
  double mass2 = 0.0;
  CHECK(am_measure_total_mass(re.m, &mass2) == AM_OK);
  CHECK(mass2 == 4.0);

  char* report_text = nullptr;
  REQUIRE(am_measure_validate(four.m, &s, 0.1, &report_text) == AM_OK);
  const auto report = take_json(report_text);
  CHECK(report.at("pass").get<bool>());
  CHECK(report.at("total_mass").get<double>() == 4.0);
  CHECK(report.at("ellipticity").get<double>() > 0.0);
  CHECK(report.at("issues").empty());
}

TEST_CASE("measure parsing failures map to ParseError") {
  am_measure* out = nullptr;
  CHECK(am_measure_from_json("{not json", &out) == AM_ERR_PARSE);
  CHECK(am_measure_from_json(
            R"({"n": 1, "kind": "atomic", "atoms": [{"dir": [1.0], "w": 1.0}], "extra": 0})",
            &out) == AM_ERR_PARSE);
  CHECK(std::string(am_last_error_message()).find("extra") != std::string::npos);
  CHECK(am_measure_from_file("/nonexistent/measure.json", &out) == AM_ERR_IO);

  const std::string path = "capi_measure_roundtrip.json";
  {
    std::ofstream f(path);
    f << R"({"n": 2, "kind": "uniform"})";
  }
  MeasureHandle m;
  REQUIRE(am_measure_from_file(path.c_str(), &m.m) == AM_OK);
  const char* kind = nullptr;
  CHECK(am_measure_kind(m.m, &kind) == AM_OK);
  CHECK(std::strcmp(kind, "uniform") == 0);
  std::remove(path.c_str());

  const double bad_dir[2] = {0.6, 0.0};
  const double w1[1] = {1.0};
  CHECK(am_measure_atomic(2, 1, bad_dir, w1, &out) == AM_ERR_NON_UNIT_DIRECTION);
  const double unit[2] = {1.0, 0.0};
  const double neg_w[1] = {-1.0};
  CHECK(am_measure_atomic(2, 1, unit, neg_w, &out) == AM_ERR_NEGATIVE_WEIGHT);
}

TEST_CASE("function catalog through the C surface") {
  FunctionHandle g;
  const double width[1] = {1.0};
  REQUIRE(am_function_create("gaussian", 2, width, 1, &g.f) == AM_OK);
  int dim = 0;
  CHECK(am_function_dim(g.f, &dim) == AM_OK);
  CHECK(dim == 2);
  const double origin[2] = {0.0, 0.0};
  double v = 0.0;
  CHECK(am_function_eval(g.f, origin, &v) == AM_OK);
  CHECK(v == 1.0);

  FunctionHandle shifted;
  const double shift[2] = {1.0, 0.0};
  REQUIRE(am_function_translate(g.f, shift, &shifted.f) == AM_OK);
  const double at_shift[2] = {1.0, 0.0};
  CHECK(am_function_eval(shifted.f, at_shift, &v) == AM_OK);
  CHECK(v == 1.0);

  FunctionHandle squeezed;
  REQUIRE(am_function_dilate(g.f, 2.0, &squeezed.f) == AM_OK);
  const double x[2] = {0.5, 0.0};
  CHECK(am_function_eval(squeezed.f, x, &v) == AM_OK);
  CHECK(v == doctest::Approx(std::exp(-0.5)).epsilon(1e-15));

  am_function* out = nullptr;
  CHECK(am_function_create("no-such-entry", 2, nullptr, 0, &out) == AM_ERR_UNKNOWN_FUNCTION);
  CHECK(std::string(am_last_error_message()).find("no-such-entry") != std::string::npos);
  CHECK(am_function_create("gaussian", 2, nullptr, 1, &out) == AM_ERR_BAD_PARAMETER);
}

TEST_CASE("operator and symbol through the C surface") {
  MeasureHandle circ;
  REQUIRE(am_measure_uniform(2, &circ.m) == AM_OK);
  FunctionHandle g;
  const double width[1] = {1.0};
  REQUIRE(am_function_create("gaussian", 2, width, 1, &g.f) == AM_OK);

  const double x[2] = {0.2, 0.0};
  double value = 0.0, err = 0.0, inner = 0.0, tail = 0.0, bound = 0.0;
  REQUIRE(am_eval_operator(g.f, circ.m, 0.55, x, nullptr, &value, &err, &inner, &tail,
                           &bound) == AM_OK);
  CHECK(std::isfinite(value));
  CHECK(err >= 0.0);
  CHECK(value == inner + tail);
  CHECK(bound == 0.0);  // uncapped tail

  // Optional outputs may all be NULL.
  double value_only = 0.0;
  REQUIRE(am_eval_operator(g.f, circ.m, 0.55, x, nullptr, &value_only, nullptr, nullptr,
                           nullptr, nullptr) == AM_OK);
  CHECK(value_only == value);

  double kconst = 0.0;
  REQUIRE(am_symbol_constant(0.5, &kconst) == AM_OK);
  CHECK(kconst == doctest::Approx(kPi).epsilon(1e-13));

  // Plane wave at the origin evaluates to the symbol.
  MeasureHandle four = make_four_axes();
  FunctionHandle wave;
  const double k[2] = {1.0, 0.0};
  REQUIRE(am_function_create("plane-wave-cos", 2, k, 2, &wave.f) == AM_OK);
  double psi = 0.0;
  REQUIRE(am_symbol(four.m, 0.5, k, &psi) == AM_OK);
  CHECK(psi == doctest::Approx(2.0 * kconst).epsilon(1e-12));
  const double origin[2] = {0.0, 0.0};
  double lw = 0.0, lw_err = 0.0;
  REQUIRE(am_eval_operator(wave.f, four.m, 0.5, origin, nullptr, &lw, &lw_err, nullptr,
                           nullptr, nullptr) == AM_OK);
  CHECK(std::abs(lw - psi) <= std::max(1e-8, 3.0 * lw_err));

  FunctionHandle ind;
  const double radius[1] = {1.0};
  REQUIRE(am_function_create("indicator", 2, radius, 1, &ind.f) == AM_OK);
  CHECK(am_eval_operator(ind.f, circ.m, 0.5, x, nullptr, &value, nullptr, nullptr, nullptr,
                         nullptr) == AM_ERR_NOT_C2_AT_POINT);
  CHECK(am_eval_operator(g.f, circ.m, 1.0, x, nullptr, &value, nullptr, nullptr, nullptr,
                         nullptr) == AM_ERR_BAD_PARAMETER);
  CHECK(am_symbol_constant(0.0, &kconst) == AM_ERR_BAD_PARAMETER);
}

TEST_CASE("mean kernel through the C surface") {
  MeasureHandle circ;
  REQUIRE(am_measure_uniform(2, &circ.m) == AM_OK);
  FunctionHandle one;
  const double zero_k[2] = {0.0, 0.0};
  REQUIRE(am_function_create("plane-wave-cos", 2, zero_k, 2, &one.f) == AM_OK);

  const double x[2] = {0.3, -0.1};
  double value = 0.0, err = 0.0;
  REQUIRE(am_mean_value(one.f, circ.m, 0.5, 0.25, x, nullptr, &value, &err) == AM_OK);
  CHECK(value == doctest::Approx(1.0).epsilon(1e-12));

  MeasureHandle four = make_four_axes();
  const long long count = 64;
  std::vector<double> rho(count), omega(count * 2), rho2(count), omega2(count * 2);
  std::vector<int> sign(count), sign2(count);
  REQUIRE(am_sample_jumps(four.m, 0.6, 0.5, count, 99, rho.data(), omega.data(),
                          sign.data()) == AM_OK);
  for (long long i = 0; i < count; ++i) {
    CHECK(rho[i] >= 0.5);
    CHECK((sign[i] == 1 || sign[i] == -1));
    const double nx = std::abs(omega[2 * i]);
    const double ny = std::abs(omega[2 * i + 1]);
    CHECK(nx + ny == 1.0);  // an axis direction
  }
  REQUIRE(am_sample_jumps(four.m, 0.6, 0.5, count, 99, rho2.data(), omega2.data(),
                          sign2.data()) == AM_OK);
  CHECK(rho == rho2);
  CHECK(omega == omega2);
  CHECK(sign == sign2);
  CHECK(am_sample_jumps(four.m, 0.6, 0.5, 0, 99, rho.data(), omega.data(), sign.data()) ==
        AM_ERR_BAD_PARAMETER);

  FunctionHandle g;
  const double width[1] = {1.0};
  REQUIRE(am_function_create("gaussian", 2, width, 1, &g.f) == AM_OK);
  double mc = 0.0, mc_se = 0.0, quad = 0.0;
  REQUIRE(am_mc_mean_value(g.f, circ.m, 0.5, 0.25, x, 200000, 5, &mc, &mc_se) == AM_OK);
  REQUIRE(am_mean_value(g.f, circ.m, 0.5, 0.25, x, nullptr, &quad, nullptr) == AM_OK);
  CHECK(std::abs(mc - quad) <= 4.0 * mc_se);
  double mc_again = 0.0;
  REQUIRE(am_mc_mean_value(g.f, circ.m, 0.5, 0.25, x, 200000, 5, &mc_again, nullptr) == AM_OK);
  CHECK(mc_again == mc);
}

TEST_CASE("asymptotics reports through the C surface") {
  MeasureHandle circ;
  REQUIRE(am_measure_uniform(2, &circ.m) == AM_OK);
  FunctionHandle g;
  const double width[1] = {1.0};
  REQUIRE(am_function_create("gaussian", 2, width, 1, &g.f) == AM_OK);
  const double x[2] = {0.2, -0.1};

  double resid = 0.0;
  REQUIRE(am_expansion_residual(g.f, circ.m, 0.5, x, 0.05, nullptr, &resid) == AM_OK);
  CHECK(std::isfinite(resid));

  const double radii[3] = {0.1, 0.05, 0.025};
  char* fit_text = nullptr;
  REQUIRE(am_fit_expansion_order(g.f, circ.m, 0.5, x, radii, 3, nullptr, &fit_text) == AM_OK);
  const auto fit = take_json(fit_text);
  CHECK(fit.at("radii").size() == 3);
  CHECK(fit.at("residuals").size() == 3);
  CHECK(fit.at("slope").get<double>() > 1.5);
  CHECK(!fit.at("vacuous").get<bool>());

  const double ladder[2] = {0.9, 0.99};
  const double origin[2] = {0.0, 0.0};
  char* lim_text = nullptr;
  REQUIRE(am_limit_operator(g.f, circ.m, origin, ladder, 2, nullptr, &lim_text) == AM_OK);
  const auto lim = take_json(lim_text);
  CHECK(lim.at("target").get<double>() == doctest::Approx(kPi).epsilon(1e-10));
  CHECK(lim.at("rows").size() == 2);
  CHECK(lim.at("errors_strictly_decreasing").get<bool>());
  CHECK(lim.at("final_rel_err").get<double>() < 0.2);

  char* mean_text = nullptr;
  REQUIRE(am_limit_mean(g.f, circ.m, origin, 0.5, ladder, 2, nullptr, &mean_text) == AM_OK);
  const auto mlim = take_json(mean_text);
  CHECK(mlim.at("target").get<double>() == doctest::Approx(std::exp(-0.125)).epsilon(1e-12));
  CHECK(mlim.at("errors_strictly_decreasing").get<bool>());

  MeasureHandle m1 = make_pm1();
  FunctionHandle g1;
  REQUIRE(am_function_create("gaussian", 1, width, 1, &g1.f) == AM_OK);
  double hs = 0.0, hs_err = 0.0, hs_bound = 0.0;
  REQUIRE(am_hs_seminorm(g1.f, m1.m, 0.5, nullptr, &hs, &hs_err, &hs_bound) == AM_OK);
  CHECK(hs == doctest::Approx(4.0 * kPi).epsilon(1e-9));
  CHECK(hs_err >= 0.0);
  CHECK(hs_bound >= 0.0);

  double h1 = 0.0, l2 = 0.0, en = 0.0;
  REQUIRE(am_h1_seminorm(g1.f, m1.m, nullptr, &h1) == AM_OK);
  CHECK(h1 == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
  REQUIRE(am_l2_norm_sq(g1.f, nullptr, &l2) == AM_OK);
  CHECK(l2 == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
  REQUIRE(am_energy(g1.f, m1.m, 0.5, nullptr, &en) == AM_OK);
  CHECK(en == doctest::Approx(0.25 * hs).epsilon(1e-14));

  double mc = 0.0, mc_se = 0.0, mc2 = 0.0;
  REQUIRE(am_hs_seminorm_mc(g1.f, m1.m, 0.6, 100000, 21, nullptr, &mc, &mc_se) == AM_OK);
  CHECK(mc_se > 0.0);
  REQUIRE(am_hs_seminorm_mc(g1.f, m1.m, 0.6, 100000, 21, nullptr, &mc2, nullptr) == AM_OK);
  CHECK(mc2 == mc);

  char* bbm_text = nullptr;
  REQUIRE(am_bbm_check(g1.f, m1.m, ladder, 2, nullptr, &bbm_text) == AM_OK);
  const auto bbm = take_json(bbm_text);
  CHECK(bbm.at("h1_sq").get<double>() == doctest::Approx(std::sqrt(kPi)).epsilon(1e-10));
  CHECK(bbm.at("rows").size() == 2);
  CHECK(bbm.at("ratio_min").get<double>() <= bbm.at("ratio_max").get<double>());
  CHECK(bbm.at("rows")[1].at("rel_err").get<double>() <= 2e-2);

  FunctionHandle wave;
  const double k1[1] = {1.0};
  REQUIRE(am_function_create("plane-wave-cos", 1, k1, 1, &wave.f) == AM_OK);
  CHECK(am_hs_seminorm(wave.f, m1.m, 0.5, nullptr, &hs, nullptr, nullptr) ==
        AM_ERR_UNBOUNDED_SUPPORT);
  CHECK(am_l2_norm_sq(wave.f, nullptr, &l2) == AM_ERR_UNBOUNDED_SUPPORT);
}

TEST_CASE("walks through the C surface") {
  MeasureHandle m1 = make_pm1();
  DomainHandle ball;
  const double center[1] = {0.0};
  REQUIRE(am_domain_ball(1, center, 1.0, &ball.d) == AM_OK);
  double sd = 0.0;
  CHECK(am_domain_signed_distance(ball.d, center, &sd) == AM_OK);
  CHECK(sd == -1.0);

  DomainHandle box;
  const double lo[2] = {0.0, 0.0};
  const double hi[2] = {2.0, 1.0};
  REQUIRE(am_domain_box(2, lo, hi, &box.d) == AM_OK);
  const double inside[2] = {1.0, 0.5};
  CHECK(am_domain_signed_distance(box.d, inside, &sd) == AM_OK);
  CHECK(sd == -0.5);

  FunctionHandle one;
  const double zero_k[1] = {0.0};
  REQUIRE(am_function_create("plane-wave-cos", 1, zero_k, 1, &one.f) == AM_OK);
  am_walk_config cfg;
  cfg.walks = 2000;
  cfg.max_steps = 10000;
  cfg.theta = 1.0;
  cfg.hmax = 0.0;  // uncapped
  cfg.seed = 7;
  cfg.workers = 1;
  const double x0[1] = {0.0};
  double est = 0.0, se = 0.0, steps = 0.0, trunc = 0.0;
  REQUIRE(am_wos_run(one.f, m1.m, ball.d, 0.5, x0, &cfg, &est, &se, &steps, &trunc) == AM_OK);
  CHECK(est == 1.0);
  CHECK(se == 0.0);
  CHECK(trunc == 0.0);

  // 1 on [1,2] built by shifting the radius-1/2 indicator: the exit mass of
  // [1,2] from the center at s = 1/2 is 1/3.
  FunctionHandle half;
  const double radius[1] = {0.5};
  REQUIRE(am_function_create("indicator", 1, radius, 1, &half.f) == AM_OK);
  FunctionHandle g;
  const double shift[1] = {1.5};
  REQUIRE(am_function_translate(half.f, shift, &g.f) == AM_OK);
  cfg.walks = 20000;
  REQUIRE(am_wos_run(g.f, m1.m, ball.d, 0.5, x0, &cfg, &est, &se, nullptr, nullptr) == AM_OK);
  CHECK(std::abs(est - 1.0 / 3.0) <= 4.0 * se);

  double est2 = 0.0, se2 = 0.0;
  am_walk_config split = cfg;
  split.workers = 3;
  REQUIRE(am_wos_run(g.f, m1.m, ball.d, 0.5, x0, &split, &est2, &se2, nullptr, nullptr) == AM_OK);
  CHECK(est2 == est);
  CHECK(se2 == se);

  const double outside[1] = {1.5};
  CHECK(am_wos_run(g.f, m1.m, ball.d, 0.5, outside, &cfg, &est, nullptr, nullptr, nullptr) ==
        AM_ERR_START_OUTSIDE_DOMAIN);

  const double caps[3] = {1.0, 0.5, 0.25};
  char* scan_text = nullptr;
  cfg.walks = 5000;
  REQUIRE(am_wos_bias_scan(g.f, m1.m, ball.d, 0.5, x0, &cfg, caps, 3, &scan_text) == AM_OK);
  const auto scan = take_json(scan_text);
  CHECK(scan.at("rows").size() == 3);
  CHECK(scan.at("rows")[0].at("diff_prev").get<double>() == 0.0);
  CHECK(scan.at("rows")[2].at("cap").get<double>() == 0.25);

  const double rising[2] = {0.25, 0.5};
  CHECK(am_wos_bias_scan(g.f, m1.m, ball.d, 0.5, x0, &cfg, rising, 2, &scan_text) ==
        AM_ERR_BAD_PARAMETER);
  CHECK(am_wos_bias_scan(g.f, m1.m, ball.d, 0.5, x0, &cfg, caps, 0, &scan_text) ==
        AM_ERR_BAD_PARAMETER);
}
