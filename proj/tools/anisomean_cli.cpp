// Command-line front end. Talks to the library exclusively through the C API
// so it doubles as a smoke test of the shared-library surface.
//
// Exit codes: 0 success, 2 invalid input (flags, files, parameters),
// 3 computed but imprecise (tolerance exceeded or a verification that ran to
// completion and failed its own criterion).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "anisomean.h"
#include "json.hpp"

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void die(int code, const std::string& message) { throw CliError{code, message}; }

int exit_code_for(am_status status) {
  switch (status) {
    case AM_OK:
      return 0;
    case AM_ERR_QUADRATURE_UNDER_RESOLVED:
    case AM_ERR_NONFINITE_VALUE:
    case AM_ERR_TOLERANCE_EXCEEDED:
      return 3;
    default:
      return 2;
  }
}

void check(am_status status) {
  if (status != AM_OK) die(exit_code_for(status), am_last_error_message());
}

struct MeasureDel {
  void operator()(am_measure* p) const { am_measure_free(p); }
};
struct FunctionDel {
  void operator()(am_function* p) const { am_function_free(p); }
};
struct DomainDel {
  void operator()(am_domain* p) const { am_domain_free(p); }
};
struct StringDel {
  void operator()(char* p) const { am_string_free(p); }
};
using MeasurePtr = std::unique_ptr<am_measure, MeasureDel>;
using FunctionPtr = std::unique_ptr<am_function, FunctionDel>;
using DomainPtr = std::unique_ptr<am_domain, DomainDel>;
using StringPtr = std::unique_ptr<char, StringDel>;

std::vector<double> parse_csv_doubles(const std::string& text, const char* what) {
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string token =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      std::size_t used = 0;
      const double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      out.push_back(v);
    } catch (const std::exception&) {
      die(2, std::string(what) + ": '" + token + "' is not a number");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void write_artifact(const std::string& path, const std::string& payload) {
  if (path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(path);
  if (!out.good()) die(2, "cannot open '" + path + "' for writing");
  out << payload;
  out.flush();
  if (!out.good()) die(2, "cannot write '" + path + "'");
}

MeasurePtr load_measure(const std::string& path) {
  if (path.empty()) die(2, "--measure FILE is required");
  am_measure* m = nullptr;
  check(am_measure_from_file(path.c_str(), &m));
  return MeasurePtr(m);
}

int measure_dim(const am_measure* m) {
  int n = 0;
  check(am_measure_dim(m, &n));
  return n;
}

// Shared --fn/--params/--shift/--dilate selection. "const" is an alias for
// the zero-frequency plane wave, i.e. u identically 1.
struct FnFlags {
  std::string name = "gaussian";
  std::string params_csv = "1";
  std::string shift_csv;
  double dilate = 0.0;
};

void add_fn_flags(CLI::App* cmd, FnFlags& fn) {
  cmd->add_option("--fn", fn.name,
                  "catalog function: gaussian, plane-wave-cos, bump, cutoff-quadratic, "
                  "indicator, const");
  cmd->add_option("--params", fn.params_csv, "comma-separated function parameters");
  cmd->add_option("--shift", fn.shift_csv, "translate by this comma-separated vector");
  cmd->add_option("--dilate", fn.dilate, "evaluate u(lambda x) for this lambda");
}

FunctionPtr build_function(const FnFlags& flags, int n) {
  std::string name = flags.name;
  std::vector<double> params = parse_csv_doubles(flags.params_csv, "--params");
  if (name == "const") {
    name = "plane-wave-cos";
    params.assign(static_cast<std::size_t>(n), 0.0);
  }
  am_function* raw = nullptr;
  check(am_function_create(name.c_str(), n, params.empty() ? nullptr : params.data(),
                           static_cast<long long>(params.size()), &raw));
  FunctionPtr fn(raw);
  if (!flags.shift_csv.empty()) {
    const std::vector<double> shift = parse_csv_doubles(flags.shift_csv, "--shift");
    if (static_cast<int>(shift.size()) != n)
      die(2, "--shift needs exactly " + std::to_string(n) + " entries");
    am_function* shifted = nullptr;
    check(am_function_translate(fn.get(), shift.data(), &shifted));
    fn.reset(shifted);
  }
  if (flags.dilate != 0.0) {
    am_function* scaled = nullptr;
    check(am_function_dilate(fn.get(), flags.dilate, &scaled));
    fn.reset(scaled);
  }
  return fn;
}

struct QuadFlags {
  int radial_nodes = 0;
  int sphere_resolution = 0;
  double rho0 = 0.0;
  double tail_cap = 0.0;
};

void add_quad_flags(CLI::App* cmd, QuadFlags& q) {
  cmd->add_option("--radial-nodes", q.radial_nodes, "radial quadrature nodes (0 = default)");
  cmd->add_option("--sphere-resolution", q.sphere_resolution,
                  "spherical rule resolution (0 = default)");
  cmd->add_option("--rho0", q.rho0, "radial split point (0 = default)");
  cmd->add_option("--tail-cap", q.tail_cap, "truncate the radial tail here (0 = none)");
}

am_quad_spec to_qspec(const QuadFlags& q) {
  return am_quad_spec{q.radial_nodes, q.sphere_resolution, q.rho0, q.tail_cap};
}

// "ball:<center csv>:<radius>" or "box:<lo csv>:<hi csv>"
DomainPtr parse_domain(const std::string& spec) {
  const std::size_t c1 = spec.find(':');
  const std::size_t c2 = c1 == std::string::npos ? std::string::npos : spec.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos || spec.find(':', c2 + 1) != std::string::npos)
    die(2, "--domain must be 'ball:<center>:<radius>' or 'box:<lo>:<hi>'");
  const std::string shape = spec.substr(0, c1);
  const std::string first = spec.substr(c1 + 1, c2 - c1 - 1);
  const std::string second = spec.substr(c2 + 1);
  am_domain* raw = nullptr;
  if (shape == "ball") {
    const std::vector<double> center = parse_csv_doubles(first, "--domain center");
    const std::vector<double> radius = parse_csv_doubles(second, "--domain radius");
    if (center.empty() || radius.size() != 1) die(2, "--domain ball needs a center and one radius");
    check(am_domain_ball(static_cast<int>(center.size()), center.data(), radius[0], &raw));
  } else if (shape == "box") {
    const std::vector<double> lo = parse_csv_doubles(first, "--domain lo");
    const std::vector<double> hi = parse_csv_doubles(second, "--domain hi");
    if (lo.empty() || lo.size() != hi.size()) die(2, "--domain box needs lo and hi of equal length");
    check(am_domain_box(static_cast<int>(lo.size()), lo.data(), hi.data(), &raw));
  } else {
    die(2, "--domain shape must be 'ball' or 'box'");
  }
  return DomainPtr(raw);
}

// Re-serialize a value parsed from library JSON. Numbers go out %.17g; the
// nonfinite placeholders ("inf", "-inf", "nan") stay as they are.
std::string json_token(const json& v) {
  if (v.is_number()) return fmt17(v.get<double>());
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_string()) return "\"" + v.get<std::string>() + "\"";
  return v.dump();
}

std::string csv_token(const json& v) {
  if (v.is_number()) return fmt17(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

constexpr const char* kTableHeader = "ladder_value,computed,target,abs_error,rel_error\n";

// ---- subcommand options and runners ----------------------------------------

struct MeasureInfoOpts {
  std::string file;
  double s = 0.0;
  std::string out;
};

int run_measure_info(const MeasureInfoOpts& opts) {
  MeasurePtr m(nullptr);
  {
    am_measure* raw = nullptr;
    check(am_measure_from_file(opts.file.c_str(), &raw));
    m.reset(raw);
  }
  const int n = measure_dim(m.get());
  const char* kind = nullptr;
  check(am_measure_kind(m.get(), &kind));
  double mass = 0.0;
  check(am_measure_total_mass(m.get(), &mass));
  std::vector<double> moment(static_cast<std::size_t>(n) * n);
  check(am_measure_second_moment(m.get(), moment.data()));

  std::string out = "{\"n\": " + std::to_string(n) + ", \"kind\": \"" + kind +
                    "\", \"total_mass\": " + fmt17(mass) + ", \"second_moment\": [";
  for (int i = 0; i < n; ++i) {
    if (i) out += ", ";
    out += "[";
    for (int j = 0; j < n; ++j) {
      if (j) out += ", ";
      out += fmt17(moment[static_cast<std::size_t>(i) * n + j]);
    }
    out += "]";
  }
  out += "]";
  if (opts.s > 0.0) {
    double lam = 0.0;
    check(am_measure_ellipticity(m.get(), opts.s, &lam));
    out += ", \"ellipticity\": " + fmt17(lam);
  }
  out += "}\n";
  write_artifact(opts.out, out);
  return 0;
}

struct EvalOperatorOpts {
  std::string measure;
  FnFlags fn;
  QuadFlags quad;
  double s = 0.5;
  std::string point_csv;
  double tol = 0.0;
  std::string out;
};

int run_eval_operator(const EvalOperatorOpts& opts) {
  MeasurePtr m = load_measure(opts.measure);
  const int n = measure_dim(m.get());
  std::vector<double> x = parse_csv_doubles(opts.point_csv, "--point");
  if (x.empty()) x.assign(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(x.size()) != n)
    die(2, "--point needs exactly " + std::to_string(n) + " coordinates");
  FunctionPtr fn = build_function(opts.fn, n);
  const am_quad_spec q = to_qspec(opts.quad);
  double value = 0.0, err = 0.0, inner = 0.0, tail = 0.0, bound = 0.0;
  check(am_eval_operator(fn.get(), m.get(), opts.s, x.data(), &q, &value, &err, &inner, &tail,
                         &bound));
  const std::string out = "{\"value\": " + fmt17(value) + ", \"error_estimate\": " + fmt17(err) +
                          ", \"pieces\": {\"inner\": " + fmt17(inner) +
                          ", \"tail\": " + fmt17(tail) +
                          ", \"truncation_bound\": " + fmt17(bound) + "}}\n";
  write_artifact(opts.out, out);
  return opts.tol > 0.0 && err > opts.tol ? 3 : 0;
}

struct MeanValueOpts {
  std::string measure;
  FnFlags fn;
  QuadFlags quad;
  double s = 0.5;
  double r = 0.1;
  std::string point_csv;
  double tol = 0.0;
  std::string out;
};

int run_mean_value(const MeanValueOpts& opts) {
  MeasurePtr m = load_measure(opts.measure);
  const int n = measure_dim(m.get());
  std::vector<double> x = parse_csv_doubles(opts.point_csv, "--point");
  if (x.empty()) x.assign(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(x.size()) != n)
    die(2, "--point needs exactly " + std::to_string(n) + " coordinates");
  FunctionPtr fn = build_function(opts.fn, n);
  const am_quad_spec q = to_qspec(opts.quad);
  double value = 0.0, err = 0.0;
  check(am_mean_value(fn.get(), m.get(), opts.s, opts.r, x.data(), &q, &value, &err));
  const std::string out =
      "{\"value\": " + fmt17(value) + ", \"error_estimate\": " + fmt17(err) + "}\n";
  write_artifact(opts.out, out);
  return opts.tol > 0.0 && err > opts.tol ? 3 : 0;
}

struct SampleJumpOpts {
  std::string measure;
  double s = 0.5;
  double r = 0.1;
  long long count = 10;
  unsigned long long seed = 0;
  std::string out;
};

int run_sample_jump(const SampleJumpOpts& opts) {
  MeasurePtr m = load_measure(opts.measure);
  const int n = measure_dim(m.get());
  if (opts.count < 1) die(2, "--count must be at least 1");
  std::vector<double> rho(static_cast<std::size_t>(opts.count));
  std::vector<double> omega(static_cast<std::size_t>(opts.count) * n);
  std::vector<int> sign(static_cast<std::size_t>(opts.count));
  check(am_sample_jumps(m.get(), opts.s, opts.r, opts.count, opts.seed, rho.data(), omega.data(),
                        sign.data()));
  std::string out = "rho";
  for (int d = 0; d < n; ++d) out += ",omega_" + std::to_string(d + 1);
  out += ",sign\n";
  for (long long i = 0; i < opts.count; ++i) {
    out += fmt17(rho[static_cast<std::size_t>(i)]);
    for (int d = 0; d < n; ++d) out += "," + fmt17(omega[static_cast<std::size_t>(i) * n + d]);
    out += "," + std::to_string(sign[static_cast<std::size_t>(i)]) + "\n";
  }
  write_artifact(opts.out, out);
  return 0;
}

struct VerifyExpansionOpts {
  std::string measure;
  FnFlags fn;
  QuadFlags quad;
  double s = 0.5;
  std::string point_csv;
  std::string radii_csv;
  double rmax = 0.1;
  int levels = 5;
  double slope_min = 1.9;
  std::string out;
  std::string csv;
};

int run_verify_expansion(const VerifyExpansionOpts& opts) {
  MeasurePtr m = load_measure(opts.measure);
  const int n = measure_dim(m.get());
  std::vector<double> x = parse_csv_doubles(opts.point_csv, "--point");
  if (x.empty()) x.assign(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(x.size()) != n)
    die(2, "--point needs exactly " + std::to_string(n) + " coordinates");
  FunctionPtr fn = build_function(opts.fn, n);

  std::vector<double> radii = parse_csv_doubles(opts.radii_csv, "--radii");
  if (radii.empty()) {
    if (!(opts.rmax > 0.0) || opts.levels < 2) die(2, "--rmax must be > 0 and --levels >= 2");
    double r = opts.rmax;
    for (int k = 0; k < opts.levels; ++k, r *= 0.5) radii.push_back(r);
  }
  const am_quad_spec q = to_qspec(opts.quad);
  StringPtr report;
  {
    char* raw = nullptr;
    check(am_fit_expansion_order(fn.get(), m.get(), opts.s, x.data(), radii.data(),
                                 static_cast<long long>(radii.size()), &q, &raw));
    report.reset(raw);
  }
  const json j = json::parse(report.get());

  double ux = 0.0;
  check(am_function_eval(fn.get(), x.data(), &ux));
  const double scale = std::max(std::abs(ux), 1e-300);
  std::string table = kTableHeader;
  for (std::size_t i = 0; i < j["radii"].size(); ++i) {
    const double res = j["residuals"][i].get<double>();
    table += fmt17(j["radii"][i].get<double>()) + "," + fmt17(res) + ",0," + fmt17(res) + "," +
             fmt17(res / scale) + "\n";
  }
  write_artifact(opts.csv, table);

  const bool vacuous = j["vacuous"].get<bool>();
  const bool pass =
      vacuous || (j["slope"].is_number() && j["slope"].get<double>() >= opts.slope_min);
  const std::string summary =
      "{\"pass\": " + std::string(pass ? "true" : "false") + ", \"slope\": " +
      json_token(j["slope"]) + "}\n";
  write_artifact(opts.out, summary);
  return pass ? 0 : 3;
}

struct LimitOpts {
  std::string measure;
  FnFlags fn;
  QuadFlags quad;
  std::string mode = "operator";
  double r = 0.5;
  std::string point_csv;
  std::string ladder_csv = "0.9,0.99,0.999,0.9999";
  double tol = 1e-2;
  std::string out;
  std::string csv;
};

int run_limit_s1(const LimitOpts& opts) {
  MeasurePtr m = load_measure(opts.measure);
  const int n = measure_dim(m.get());
  std::vector<double> x = parse_csv_doubles(opts.point_csv, "--point");
  if (x.empty()) x.assign(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(x.size()) != n)
    die(2, "--point needs exactly " + std::to_string(n) + " coordinates");
  FunctionPtr fn = build_function(opts.fn, n);
  const std::vector<double> ladder = parse_csv_doubles(opts.ladder_csv, "--s-ladder");
  if (ladder.empty()) die(2, "--s-ladder must not be empty");
  const am_quad_spec q = to_qspec(opts.quad);

  StringPtr report;
  {
    char* raw = nullptr;
    if (opts.mode == "operator") {
      check(am_limit_operator(fn.get(), m.get(), x.data(), ladder.data(),
                              static_cast<long long>(ladder.size()), &q, &raw));
    } else if (opts.mode == "mean") {
      check(am_limit_mean(fn.get(), m.get(), x.data(), opts.r, ladder.data(),
                          static_cast<long long>(ladder.size()), &q, &raw));
    } else {
      die(2, "--mode must be 'operator' or 'mean'");
    }
    report.reset(raw);
  }
  const json j = json::parse(report.get());

  std::string table = kTableHeader;
  for (const json& row : j["rows"]) {
    table += fmt17(row["s"].get<double>()) + "," + fmt17(row["value"].get<double>()) + "," +
             csv_token(j["target"]) + "," + fmt17(row["abs_err"].get<double>()) + "," +
             fmt17(row["rel_err"].get<double>()) + "\n";
  }
  write_artifact(opts.csv, table);

  const double final_rel = j["final_rel_err"].get<double>();
  const bool pass = j["errors_strictly_decreasing"].get<bool>() && final_rel <= opts.tol;
  const std::string summary = "{\"pass\": " + std::string(pass ? "true" : "false") +
                              ", \"final_rel_err\": " + fmt17(final_rel) + "}\n";
  write_artifact(opts.out, summary);
  return pass ? 0 : 3;
}

struct BbmOpts {
  std::string measure;
  FnFlags fn;
  QuadFlags quad;
  std::string ladder_csv = "0.6,0.8,0.9,0.95,0.99";
  double tol = 2e-2;
  std::string out;
  std::string csv;
};

int run_bbm(const BbmOpts& opts) {
  MeasurePtr m = load_measure(opts.measure);
  const int n = measure_dim(m.get());
  FunctionPtr fn = build_function(opts.fn, n);
  const std::vector<double> ladder = parse_csv_doubles(opts.ladder_csv, "--s-ladder");
  if (ladder.empty()) die(2, "--s-ladder must not be empty");
  const am_quad_spec q = to_qspec(opts.quad);
  StringPtr report;
  {
    char* raw = nullptr;
    check(am_bbm_check(fn.get(), m.get(), ladder.data(), static_cast<long long>(ladder.size()),
                       &q, &raw));
    report.reset(raw);
  }
  const json j = json::parse(report.get());

  std::string table = kTableHeader;
  for (const json& row : j["rows"]) {
    table += fmt17(row["s"].get<double>()) + "," + fmt17(row["scaled"].get<double>()) + "," +
             csv_token(j["h1_sq"]) + "," + fmt17(row["abs_err"].get<double>()) + "," +
             fmt17(row["rel_err"].get<double>()) + "\n";
  }
  write_artifact(opts.csv, table);

  const double final_rel = j["final_rel_err"].get<double>();
  const bool pass = j["errors_strictly_decreasing"].get<bool>() && final_rel <= opts.tol;
  const std::string summary = "{\"pass\": " + std::string(pass ? "true" : "false") +
                              ", \"final_rel_err\": " + fmt17(final_rel) + "}\n";
  write_artifact(opts.out, summary);
  return pass ? 0 : 3;
}

struct SeminormOpts {
  std::string measure;
  FnFlags fn;
  QuadFlags quad;
  double s = 0.5;
  bool mc = false;
  long long samples = 200000;
  unsigned long long seed = 0;
  double tol = 0.0;
  std::string out;
};

int run_seminorm(const SeminormOpts& opts) {
  MeasurePtr m = load_measure(opts.measure);
  const int n = measure_dim(m.get());
  FunctionPtr fn = build_function(opts.fn, n);
  const am_quad_spec q = to_qspec(opts.quad);
  if (opts.mc) {
    double squared = 0.0, se = 0.0;
    check(am_hs_seminorm_mc(fn.get(), m.get(), opts.s, opts.samples, opts.seed, &q, &squared,
                            &se));
    const std::string out = "{\"squared\": " + fmt17(squared) + ", \"std_error\": " + fmt17(se) +
                            ", \"count\": " + std::to_string(opts.samples) + "}\n";
    write_artifact(opts.out, out);
    return opts.tol > 0.0 && se > opts.tol ? 3 : 0;
  }
  double squared = 0.0, err = 0.0, bound = 0.0;
  check(am_hs_seminorm(fn.get(), m.get(), opts.s, &q, &squared, &err, &bound));
  const std::string out = "{\"squared\": " + fmt17(squared) + ", \"error_estimate\": " +
                          fmt17(err) + ", \"truncation_bound\": " + fmt17(bound) + "}\n";
  write_artifact(opts.out, out);
  return opts.tol > 0.0 && err > opts.tol ? 3 : 0;
}

struct SolveWosOpts {
  std::string measure;
  std::string domain;
  FnFlags fn{"const", "", "", 0.0};
  double s = 0.5;
  std::string point_csv;
  long long walks = 100000;
  long long max_steps = 10000;
  double theta = 1.0;
  double hmax = 0.0;
  unsigned long long seed = 0;
  int workers = 0;
  std::string caps_csv;
  std::string out;
};

int run_solve_wos(const SolveWosOpts& opts) {
  MeasurePtr m = load_measure(opts.measure);
  const int n = measure_dim(m.get());
  if (opts.domain.empty()) die(2, "--domain SPEC is required");
  DomainPtr dom = parse_domain(opts.domain);
  std::vector<double> x0 = parse_csv_doubles(opts.point_csv, "--point");
  if (x0.empty()) x0.assign(static_cast<std::size_t>(n), 0.0);
  if (static_cast<int>(x0.size()) != n)
    die(2, "--point needs exactly " + std::to_string(n) + " coordinates");
  FunctionPtr g = build_function(opts.fn, n);
  const am_walk_config cfg{opts.walks, opts.max_steps, opts.theta, opts.hmax, opts.seed,
                           opts.workers};
  if (!opts.caps_csv.empty()) {
    const std::vector<double> caps = parse_csv_doubles(opts.caps_csv, "--caps");
    StringPtr report;
    char* raw = nullptr;
    check(am_wos_bias_scan(g.get(), m.get(), dom.get(), opts.s, x0.data(), &cfg, caps.data(),
                           static_cast<long long>(caps.size()), &raw));
    report.reset(raw);
    write_artifact(opts.out, std::string(report.get()) + "\n");
    return 0;
  }
  double estimate = 0.0, se = 0.0, mean_len = 0.0, trunc = 0.0;
  check(am_wos_run(g.get(), m.get(), dom.get(), opts.s, x0.data(), &cfg, &estimate, &se,
                   &mean_len, &trunc));
  const std::string out = "{\"estimate\": " + fmt17(estimate) + ", \"stderr\": " + fmt17(se) +
                          ", \"mean_len\": " + fmt17(mean_len) +
                          ", \"truncated_frac\": " + fmt17(trunc) + "}\n";
  write_artifact(opts.out, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic nonlocal operator toolkit"};
  app.require_subcommand(1);

  MeasureInfoOpts mi;
  CLI::App* cmd_mi = app.add_subcommand("measure-info", "Report mass, moments and ellipticity");
  cmd_mi->add_option("file", mi.file, "measure JSON file")->required();
  cmd_mi->add_option("--s", mi.s, "also report the ellipticity at this exponent");
  cmd_mi->add_option("--out", mi.out, "output file (default stdout)");

  EvalOperatorOpts eo;
  CLI::App* cmd_eo = app.add_subcommand("eval-operator", "Evaluate the nonlocal operator");
  cmd_eo->add_option("--measure", eo.measure, "measure JSON file")->required();
  cmd_eo->add_option("--s", eo.s, "order, in (0,1)")->required();
  cmd_eo->add_option("--point", eo.point_csv, "evaluation point, comma-separated");
  add_fn_flags(cmd_eo, eo.fn);
  add_quad_flags(cmd_eo, eo.quad);
  cmd_eo->add_option("--tol", eo.tol, "exit 3 when the error estimate exceeds this");
  cmd_eo->add_option("--out", eo.out, "output file (default stdout)");

  MeanValueOpts mv;
  CLI::App* cmd_mv = app.add_subcommand("mean-value", "Evaluate the nonlocal mean");
  cmd_mv->add_option("--measure", mv.measure, "measure JSON file")->required();
  cmd_mv->add_option("--s", mv.s, "order, in (0,1)")->required();
  cmd_mv->add_option("--r", mv.r, "mean radius")->required();
  cmd_mv->add_option("--point", mv.point_csv, "evaluation point, comma-separated");
  add_fn_flags(cmd_mv, mv.fn);
  add_quad_flags(cmd_mv, mv.quad);
  cmd_mv->add_option("--tol", mv.tol, "exit 3 when the error estimate exceeds this");
  cmd_mv->add_option("--out", mv.out, "output file (default stdout)");

  SampleJumpOpts sj;
  CLI::App* cmd_sj = app.add_subcommand("sample-jump", "Draw jumps from the mean kernel");
  cmd_sj->add_option("--measure", sj.measure, "measure JSON file")->required();
  cmd_sj->add_option("--s", sj.s, "order, in (0,1)")->required();
  cmd_sj->add_option("--r", sj.r, "kernel radius")->required();
  cmd_sj->add_option("--count", sj.count, "number of draws")->required();
  cmd_sj->add_option("--seed", sj.seed, "RNG seed");
  cmd_sj->add_option("--out", sj.out, "output CSV file (default stdout)");

  VerifyExpansionOpts ve;
  CLI::App* cmd_ve = app.add_subcommand("verify-expansion",
                                        "Fit the expansion residual order over a radius ladder");
  cmd_ve->add_option("--measure", ve.measure, "measure JSON file")->required();
  cmd_ve->add_option("--s", ve.s, "order, in (0,1)")->required();
  cmd_ve->add_option("--point", ve.point_csv, "expansion point (default origin)");
  add_fn_flags(cmd_ve, ve.fn);
  add_quad_flags(cmd_ve, ve.quad);
  cmd_ve->add_option("--radii", ve.radii_csv, "explicit radius ladder, comma-separated");
  cmd_ve->add_option("--rmax", ve.rmax, "largest radius of the halving ladder");
  cmd_ve->add_option("--levels", ve.levels, "number of halvings");
  cmd_ve->add_option("--slope-min", ve.slope_min, "pass threshold for the fitted slope");
  cmd_ve->add_option("--out", ve.out, "JSON summary file (default stdout)");
  cmd_ve->add_option("--csv", ve.csv, "CSV table file (default stdout)");

  LimitOpts ls;
  CLI::App* cmd_ls = app.add_subcommand("limit-s1", "Local limit of the operator or the mean");
  cmd_ls->add_option("--measure", ls.measure, "measure JSON file")->required();
  cmd_ls->add_option("--mode", ls.mode, "'operator' or 'mean'");
  cmd_ls->add_option("--r", ls.r, "mean radius (mean mode only)");
  cmd_ls->add_option("--point", ls.point_csv, "evaluation point (default origin)");
  add_fn_flags(cmd_ls, ls.fn);
  add_quad_flags(cmd_ls, ls.quad);
  cmd_ls->add_option("--s-ladder", ls.ladder_csv, "s values increasing towards 1");
  cmd_ls->add_option("--tol", ls.tol, "pass threshold on the final relative error");
  cmd_ls->add_option("--out", ls.out, "JSON summary file (default stdout)");
  cmd_ls->add_option("--csv", ls.csv, "CSV table file (default stdout)");

  BbmOpts bb;
  CLI::App* cmd_bb = app.add_subcommand("bbm", "Scaled-seminorm limit table");
  cmd_bb->add_option("--measure", bb.measure, "measure JSON file")->required();
  add_fn_flags(cmd_bb, bb.fn);
  add_quad_flags(cmd_bb, bb.quad);
  cmd_bb->add_option("--s-ladder", bb.ladder_csv, "s values increasing towards 1");
  cmd_bb->add_option("--tol", bb.tol, "pass threshold on the final relative error");
  cmd_bb->add_option("--out", bb.out, "JSON summary file (default stdout)");
  cmd_bb->add_option("--csv", bb.csv, "CSV table file (default stdout)");

  SeminormOpts sn;
  CLI::App* cmd_sn = app.add_subcommand("seminorm", "Gagliardo seminorm of a catalog function");
  cmd_sn->add_option("--measure", sn.measure, "measure JSON file")->required();
  cmd_sn->add_option("--s", sn.s, "order, in (0,1)")->required();
  add_fn_flags(cmd_sn, sn.fn);
  add_quad_flags(cmd_sn, sn.quad);
  cmd_sn->add_flag("--mc", sn.mc, "Monte Carlo estimator instead of quadrature");
  cmd_sn->add_option("--samples", sn.samples, "Monte Carlo sample count");
  cmd_sn->add_option("--seed", sn.seed, "RNG seed");
  cmd_sn->add_option("--tol", sn.tol, "exit 3 when the error estimate exceeds this");
  cmd_sn->add_option("--out", sn.out, "output file (default stdout)");

  SolveWosOpts sw;
  CLI::App* cmd_sw = app.add_subcommand("solve-wos", "Walk-on-spheres exterior-value solver");
  cmd_sw->add_option("--measure", sw.measure, "measure JSON file")->required();
  cmd_sw->add_option("--domain", sw.domain, "'ball:<center>:<radius>' or 'box:<lo>:<hi>'")
      ->required();
  cmd_sw->add_option("--s", sw.s, "order, in (0,1)")->required();
  cmd_sw->add_option("--point", sw.point_csv, "start point, comma-separated");
  add_fn_flags(cmd_sw, sw.fn);
  cmd_sw->add_option("--walks", sw.walks, "number of walks");
  cmd_sw->add_option("--max-steps", sw.max_steps, "step budget per walk");
  cmd_sw->add_option("--theta", sw.theta, "step radius fraction, in (0,1]");
  cmd_sw->add_option("--hmax", sw.hmax, "step radius cap (0 = uncapped)");
  cmd_sw->add_option("--seed", sw.seed, "RNG seed");
  cmd_sw->add_option("--workers", sw.workers, "worker threads (0 = hardware)");
  cmd_sw->add_option("--caps", sw.caps_csv,
                     "bias scan: strictly decreasing caps, comma-separated");
  cmd_sw->add_option("--out", sw.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (cmd_mi->parsed()) return run_measure_info(mi);
    if (cmd_eo->parsed()) return run_eval_operator(eo);
    if (cmd_mv->parsed()) return run_mean_value(mv);
    if (cmd_sj->parsed()) return run_sample_jump(sj);
    if (cmd_ve->parsed()) return run_verify_expansion(ve);
    if (cmd_ls->parsed()) return run_limit_s1(ls);
    if (cmd_bb->parsed()) return run_bbm(bb);
    if (cmd_sn->parsed()) return run_seminorm(sn);
    if (cmd_sw->parsed()) return run_solve_wos(sw);
  } catch (const CliError& e) {
    std::cerr << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 2;
}
