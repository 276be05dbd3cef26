#include "anisomean.h"

#include <cstdlib>
#include <cstring>
#include <limits>
#include <new>
#include <string>

#include "anisomean/asymptotics.hpp"
#include "anisomean/errors.hpp"
#include "anisomean/meankernel.hpp"
#include "anisomean/measure.hpp"
#include "anisomean/measure_io.hpp"
#include "anisomean/operator.hpp"
#include "anisomean/rng.hpp"
#include "anisomean/testfunction.hpp"
#include "anisomean/textio.hpp"
#include "anisomean/wos.hpp"

struct am_measure {
  aniso::SpectralMeasure m;
};
struct am_function {
  aniso::TestFunction f;
};
struct am_domain {
  aniso::Domain d;
};

namespace {

using namespace aniso;

std::string& tl_error() {
  static thread_local std::string msg = "no error";
  return msg;
}

am_status map_code(errc code) {
  const int v = static_cast<int>(code);
  if (v >= 0 && v <= static_cast<int>(errc::io_error)) return static_cast<am_status>(v);
  return AM_ERR_INTERNAL;
}

am_status args_error(const char* what) {
  tl_error() = std::string("BadParameter: ") + what;
  return AM_ERR_BAD_PARAMETER;
}

template <typename F>
am_status guarded(F&& body) {
  try {
    body();
    return AM_OK;
  } catch (const error& e) {
    tl_error() = e.what();
    return map_code(e.code());
  } catch (const std::exception& e) {
    tl_error() = std::string("Internal: ") + e.what();
    return AM_ERR_INTERNAL;
  } catch (...) {
    tl_error() = "Internal: unknown error";
    return AM_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

QuadratureSpec to_spec(const am_quad_spec* s) {
  QuadratureSpec q;
  if (!s) return q;
  if (s->radial_nodes > 0) q.radial_nodes = s->radial_nodes;
  if (s->sphere_resolution > 0) q.sphere_resolution = s->sphere_resolution;
  if (s->rho0 > 0.0) q.rho0 = s->rho0;
  if (s->tail_cap > 0.0) q.tail_cap = s->tail_cap;
  return q;
}

WalkConfig to_walk_config(const am_walk_config* c) {
  WalkConfig w;
  if (!c) return w;
  w.walks = c->walks;
  w.max_steps = c->max_steps;
  w.theta = c->theta;
  w.hmax = c->hmax > 0.0 ? c->hmax : std::numeric_limits<double>::infinity();
  w.seed = c->seed;
  w.workers = c->workers;
  return w;
}

void append_bool(std::string& out, bool b) { out += b ? "true" : "false"; }

std::string limit_report_json(const LimitReport& rep) {
  std::string out = "{\"target\": ";
  append_json_number(out, rep.target);
  out += ", \"rows\": [";
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const LimitRow& row = rep.rows[i];
    if (i) out += ", ";
    out += "{\"s\": ";
    append_json_number(out, row.s);
    out += ", \"value\": ";
    append_json_number(out, row.value);
    out += ", \"abs_err\": ";
    append_json_number(out, row.abs_err);
    out += ", \"rel_err\": ";
    append_json_number(out, row.rel_err);
    out += "}";
  }
  out += "], \"errors_strictly_decreasing\": ";
  append_bool(out, rep.errors_strictly_decreasing);
  out += ", \"final_rel_err\": ";
  append_json_number(out, rep.final_rel_err);
  out += "}";
  return out;
}

}  // namespace

extern "C" {

const char* am_status_name(am_status status) {
  if (status == AM_ERR_INTERNAL) return "Internal";
  const int v = static_cast<int>(status);
  if (v < 0 || v > static_cast<int>(errc::io_error)) return "Unknown";
  return errc_name(static_cast<errc>(v));
}

const char* am_last_error_message(void) { return tl_error().c_str(); }

void am_string_free(char* s) { std::free(s); }

/* ---- measures ---- */

am_status am_measure_from_json(const char* text, am_measure** out) {
  if (!text || !out) return args_error("am_measure_from_json needs text and out");
  return guarded([&] { *out = new am_measure{load_measure_json(text)}; });
}

am_status am_measure_from_file(const char* path, am_measure** out) {
  if (!path || !out) return args_error("am_measure_from_file needs path and out");
  return guarded([&] { *out = new am_measure{load_measure_file(path)}; });
}

am_status am_measure_uniform(int n, am_measure** out) {
  if (!out) return args_error("am_measure_uniform needs out");
  return guarded([&] { *out = new am_measure{SpectralMeasure::uniform(n)}; });
}

am_status am_measure_atomic(int n, long long count, const double* dirs, const double* weights,
                            am_measure** out) {
  if (!out || !dirs || !weights) return args_error("am_measure_atomic needs dirs, weights, out");
  if (n < 1 || count < 1) return args_error("am_measure_atomic needs n >= 1 and count >= 1");
  return guarded([&] {
    std::vector<Atom> atoms(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) {
      atoms[static_cast<std::size_t>(i)].dir.assign(dirs + i * n, dirs + (i + 1) * n);
      atoms[static_cast<std::size_t>(i)].weight = weights[i];
    }
    *out = new am_measure{SpectralMeasure::atomic(n, std::move(atoms))};
  });
}

am_status am_measure_to_json(const am_measure* m, char** out_json) {
  if (!m || !out_json) return args_error("am_measure_to_json needs a measure and out_json");
  return guarded([&] { *out_json = dup_string(save_measure_json(m->m)); });
}

void am_measure_free(am_measure* m) { delete m; }

am_status am_measure_dim(const am_measure* m, int* out) {
  if (!m || !out) return args_error("am_measure_dim needs a measure and out");
  *out = m->m.dim();
  return AM_OK;
}

am_status am_measure_kind(const am_measure* m, const char** out) {
  if (!m || !out) return args_error("am_measure_kind needs a measure and out");
  switch (m->m.kind()) {
    case MeasureKind::atomic: *out = "atomic"; break;
    case MeasureKind::density_grid: *out = "density-grid"; break;
    case MeasureKind::uniform: *out = "uniform"; break;
  }
  return AM_OK;
}

am_status am_measure_total_mass(const am_measure* m, double* out) {
  if (!m || !out) return args_error("am_measure_total_mass needs a measure and out");
  return guarded([&] { *out = m->m.total_mass(); });
}

am_status am_measure_second_moment(const am_measure* m, double* out) {
  if (!m || !out) return args_error("am_measure_second_moment needs a measure and out");
  return guarded([&] {
    const Matrix mat = m->m.second_moment();
    std::memcpy(out, mat.a.data(), mat.a.size() * sizeof(double));
  });
}

am_status am_measure_ellipticity(const am_measure* m, double s, double* out) {
  if (!m || !out) return args_error("am_measure_ellipticity needs a measure and out");
  return guarded([&] { *out = m->m.ellipticity(s); });
}

am_status am_measure_validate(const am_measure* m, const double* s, double lambda_min,
                              char** out_json) {
  if (!m || !out_json) return args_error("am_measure_validate needs a measure and out_json");
  return guarded([&] {
    std::optional<double> sv;
    if (s) sv = *s;
    const ValidationReport rep = m->m.validate(sv, lambda_min);
    std::string out = "{\"pass\": ";
    append_bool(out, rep.pass);
    out += ", \"total_mass\": ";
    append_json_number(out, rep.total_mass);
    if (rep.ellipticity) {
      out += ", \"ellipticity\": ";
      append_json_number(out, *rep.ellipticity);
    }
    out += ", \"issues\": [";
    for (std::size_t i = 0; i < rep.issues.size(); ++i) {
      if (i) out += ", ";
      out += "{\"code\": ";
      append_json_string(out, errc_name(rep.issues[i].code));
      out += ", \"detail\": ";
      append_json_string(out, rep.issues[i].detail);
      out += "}";
    }
    out += "]}";
    *out_json = dup_string(out);
  });
}

/* ---- functions ---- */

am_status am_function_create(const char* name, int n, const double* params, long long n_params,
                             am_function** out) {
  if (!name || !out) return args_error("am_function_create needs a name and out");
  if (n_params < 0 || (n_params > 0 && !params))
    return args_error("am_function_create params pointer does not match n_params");
  return guarded([&] {
    const std::span<const double> p(params, static_cast<std::size_t>(n_params));
    *out = new am_function{make_function(name, n, p)};
  });
}

am_status am_function_translate(const am_function* f, const double* shift, am_function** out) {
  if (!f || !shift || !out) return args_error("am_function_translate needs f, shift, out");
  return guarded([&] {
    Vec sv(shift, shift + f->f.n);
    *out = new am_function{translate(f->f, std::move(sv))};
  });
}

am_status am_function_dilate(const am_function* f, double lambda, am_function** out) {
  if (!f || !out) return args_error("am_function_dilate needs f and out");
  return guarded([&] { *out = new am_function{dilate(f->f, lambda)}; });
}

am_status am_function_dim(const am_function* f, int* out) {
  if (!f || !out) return args_error("am_function_dim needs f and out");
  *out = f->f.n;
  return AM_OK;
}

am_status am_function_eval(const am_function* f, const double* x, double* out) {
  if (!f || !x || !out) return args_error("am_function_eval needs f, x, out");
  return guarded([&] {
    *out = f->f.value(std::span<const double>(x, static_cast<std::size_t>(f->f.n)));
  });
}

void am_function_free(am_function* f) { delete f; }

/* ---- operator ---- */

am_status am_eval_operator(const am_function* u, const am_measure* a, double s, const double* x,
                           const am_quad_spec* spec, double* value, double* error_estimate,
                           double* inner, double* tail, double* truncation_bound) {
  if (!u || !a || !x || !value) return args_error("am_eval_operator needs u, a, x, value");
  return guarded([&] {
    const std::span<const double> xs(x, static_cast<std::size_t>(u->f.n));
    const EvalResult res = eval_operator(u->f, xs, s, a->m, to_spec(spec));
    *value = res.value;
    if (error_estimate) *error_estimate = res.error_estimate;
    if (inner) *inner = res.pieces.inner;
    if (tail) *tail = res.pieces.tail;
    if (truncation_bound) *truncation_bound = res.pieces.truncation_bound;
  });
}

am_status am_symbol(const am_measure* a, double s, const double* k, double* out) {
  if (!a || !k || !out) return args_error("am_symbol needs a, k, out");
  return guarded([&] {
    const std::span<const double> ks(k, static_cast<std::size_t>(a->m.dim()));
    *out = symbol(ks, s, a->m);
  });
}

am_status am_symbol_constant(double s, double* out) {
  if (!out) return args_error("am_symbol_constant needs out");
  return guarded([&] { *out = symbol_constant(s); });
}

/* ---- mean kernel ---- */

am_status am_mean_value(const am_function* u, const am_measure* a, double s, double r,
                        const double* x, const am_quad_spec* spec, double* value,
                        double* error_estimate) {
  if (!u || !a || !x || !value) return args_error("am_mean_value needs u, a, x, value");
  return guarded([&] {
    const std::span<const double> xs(x, static_cast<std::size_t>(u->f.n));
    const MeanKernelParams kernel = make_mean_kernel(r, s, a->m);
    const EvalResult res = mean_value(u->f, xs, kernel, to_spec(spec));
    *value = res.value;
    if (error_estimate) *error_estimate = res.error_estimate;
  });
}

am_status am_sample_jumps(const am_measure* a, double s, double r, long long count,
                          unsigned long long seed, double* rho, double* omega, int* sign) {
  if (!a || !rho || !omega || !sign) return args_error("am_sample_jumps needs a, rho, omega, sign");
  if (count < 1) return args_error("am_sample_jumps needs count >= 1");
  return guarded([&] {
    const MeanKernelParams kernel = make_mean_kernel(r, s, a->m);
    const int n = a->m.dim();
    RngState rng(seed);
    for (long long i = 0; i < count; ++i) {
      const Jump jump = sample_jump(kernel, rng);
      rho[i] = jump.rho;
      for (int d = 0; d < n; ++d) omega[i * n + d] = jump.omega[static_cast<std::size_t>(d)];
      sign[i] = jump.sign;
    }
  });
}

am_status am_mc_mean_value(const am_function* u, const am_measure* a, double s, double r,
                           const double* x, long long count, unsigned long long seed,
                           double* value, double* std_error) {
  if (!u || !a || !x || !value) return args_error("am_mc_mean_value needs u, a, x, value");
  return guarded([&] {
    const std::span<const double> xs(x, static_cast<std::size_t>(u->f.n));
    const MeanKernelParams kernel = make_mean_kernel(r, s, a->m);
    const McEstimate est = mc_mean_value(u->f, xs, kernel, count, seed);
    *value = est.value;
    if (std_error) *std_error = est.std_error;
  });
}

/* ---- asymptotics ---- */

am_status am_expansion_residual(const am_function* u, const am_measure* a, double s,
                                const double* x, double r, const am_quad_spec* spec,
                                double* out) {
  if (!u || !a || !x || !out) return args_error("am_expansion_residual needs u, a, x, out");
  return guarded([&] {
    const std::span<const double> xs(x, static_cast<std::size_t>(u->f.n));
    *out = expansion_residual(u->f, xs, r, s, a->m, to_spec(spec));
  });
}

am_status am_fit_expansion_order(const am_function* u, const am_measure* a, double s,
                                 const double* x, const double* radii, long long n_radii,
                                 const am_quad_spec* spec, char** out_json) {
  if (!u || !a || !x || !radii || !out_json)
    return args_error("am_fit_expansion_order needs u, a, x, radii, out_json");
  if (n_radii < 1) return args_error("am_fit_expansion_order needs n_radii >= 1");
  return guarded([&] {
    const std::span<const double> xs(x, static_cast<std::size_t>(u->f.n));
    const std::span<const double> ladder(radii, static_cast<std::size_t>(n_radii));
    const OrderFit fit = fit_expansion_order(u->f, xs, s, a->m, ladder, to_spec(spec));
    std::string out = "{\"radii\": [";
    for (std::size_t i = 0; i < fit.radii.size(); ++i) {
      if (i) out += ", ";
      append_json_number(out, fit.radii[i]);
    }
    out += "], \"residuals\": [";
    for (std::size_t i = 0; i < fit.residuals.size(); ++i) {
      if (i) out += ", ";
      append_json_number(out, fit.residuals[i]);
    }
    out += "], \"slope\": ";
    append_json_number(out, fit.slope);
    out += ", \"fit_rms\": ";
    append_json_number(out, fit.fit_rms);
    out += ", \"vacuous\": ";
    append_bool(out, fit.vacuous);
    out += "}";
    *out_json = dup_string(out);
  });
}

am_status am_limit_operator(const am_function* u, const am_measure* a, const double* x,
                            const double* s_ladder, long long n_s, const am_quad_spec* spec,
                            char** out_json) {
  if (!u || !a || !x || !s_ladder || !out_json)
    return args_error("am_limit_operator needs u, a, x, s_ladder, out_json");
  if (n_s < 1) return args_error("am_limit_operator needs n_s >= 1");
  return guarded([&] {
    const std::span<const double> xs(x, static_cast<std::size_t>(u->f.n));
    const std::span<const double> ladder(s_ladder, static_cast<std::size_t>(n_s));
    *out_json = dup_string(limit_report_json(local_limit_operator(u->f, xs, a->m, ladder,
                                                                  to_spec(spec))));
  });
}

am_status am_limit_mean(const am_function* u, const am_measure* a, const double* x, double r,
                        const double* s_ladder, long long n_s, const am_quad_spec* spec,
                        char** out_json) {
  if (!u || !a || !x || !s_ladder || !out_json)
    return args_error("am_limit_mean needs u, a, x, s_ladder, out_json");
  if (n_s < 1) return args_error("am_limit_mean needs n_s >= 1");
  return guarded([&] {
    const std::span<const double> xs(x, static_cast<std::size_t>(u->f.n));
    const std::span<const double> ladder(s_ladder, static_cast<std::size_t>(n_s));
    *out_json = dup_string(limit_report_json(local_limit_mean(u->f, xs, r, a->m, ladder,
                                                              to_spec(spec))));
  });
}

am_status am_hs_seminorm(const am_function* u, const am_measure* a, double s,
                         const am_quad_spec* spec, double* squared, double* error_estimate,
                         double* truncation_bound) {
  if (!u || !a || !squared) return args_error("am_hs_seminorm needs u, a, squared");
  return guarded([&] {
    const SeminormResult res = hs_seminorm(u->f, s, a->m, to_spec(spec));
    *squared = res.squared;
    if (error_estimate) *error_estimate = res.error_estimate;
    if (truncation_bound) *truncation_bound = res.truncation_bound;
  });
}

am_status am_hs_seminorm_mc(const am_function* u, const am_measure* a, double s, long long count,
                            unsigned long long seed, const am_quad_spec* spec, double* squared,
                            double* std_error) {
  if (!u || !a || !squared) return args_error("am_hs_seminorm_mc needs u, a, squared");
  return guarded([&] {
    const McSeminormResult res = hs_seminorm_mc(u->f, s, a->m, count, seed, to_spec(spec));
    *squared = res.squared;
    if (std_error) *std_error = res.std_error;
  });
}

am_status am_h1_seminorm(const am_function* u, const am_measure* a, const am_quad_spec* spec,
                         double* squared) {
  if (!u || !a || !squared) return args_error("am_h1_seminorm needs u, a, squared");
  return guarded([&] { *squared = h1_seminorm(u->f, a->m, to_spec(spec)).squared; });
}

am_status am_l2_norm_sq(const am_function* u, const am_quad_spec* spec, double* out) {
  if (!u || !out) return args_error("am_l2_norm_sq needs u and out");
  return guarded([&] { *out = l2_norm_sq(u->f, to_spec(spec)); });
}

am_status am_energy(const am_function* u, const am_measure* a, double s,
                    const am_quad_spec* spec, double* out) {
  if (!u || !a || !out) return args_error("am_energy needs u, a, out");
  return guarded([&] { *out = energy(u->f, s, a->m, to_spec(spec)); });
}

am_status am_bbm_check(const am_function* u, const am_measure* a, const double* s_ladder,
                       long long n_s, const am_quad_spec* spec, char** out_json) {
  if (!u || !a || !s_ladder || !out_json)
    return args_error("am_bbm_check needs u, a, s_ladder, out_json");
  if (n_s < 1) return args_error("am_bbm_check needs n_s >= 1");
  return guarded([&] {
    const std::span<const double> ladder(s_ladder, static_cast<std::size_t>(n_s));
    const BbmReport rep = bbm_check(u->f, a->m, ladder, to_spec(spec));
    std::string out = "{\"h1_sq\": ";
    append_json_number(out, rep.h1_sq);
    out += ", \"l2_sq\": ";
    append_json_number(out, rep.l2_sq);
    out += ", \"rows\": [";
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
      const BbmRow& row = rep.rows[i];
      if (i) out += ", ";
      out += "{\"s\": ";
      append_json_number(out, row.s);
      out += ", \"hs_sq\": ";
      append_json_number(out, row.hs_sq);
      out += ", \"scaled\": ";
      append_json_number(out, row.scaled);
      out += ", \"abs_err\": ";
      append_json_number(out, row.abs_err);
      out += ", \"rel_err\": ";
      append_json_number(out, row.rel_err);
      out += ", \"ineq_ratio\": ";
      append_json_number(out, row.ineq_ratio);
      out += "}";
    }
    out += "], \"errors_strictly_decreasing\": ";
    append_bool(out, rep.errors_strictly_decreasing);
    out += ", \"final_rel_err\": ";
    append_json_number(out, rep.final_rel_err);
    out += ", \"ratio_min\": ";
    append_json_number(out, rep.ratio_min);
    out += ", \"ratio_max\": ";
    append_json_number(out, rep.ratio_max);
    out += "}";
    *out_json = dup_string(out);
  });
}

/* ---- walk on spheres ---- */

am_status am_domain_ball(int n, const double* center, double radius, am_domain** out) {
  if (!center || !out) return args_error("am_domain_ball needs center and out");
  if (n < 1) return args_error("am_domain_ball needs n >= 1");
  return guarded([&] {
    *out = new am_domain{Domain::ball(Vec(center, center + n), radius)};
  });
}

am_status am_domain_box(int n, const double* lo, const double* hi, am_domain** out) {
  if (!lo || !hi || !out) return args_error("am_domain_box needs lo, hi, out");
  if (n < 1) return args_error("am_domain_box needs n >= 1");
  return guarded([&] {
    *out = new am_domain{Domain::box(Vec(lo, lo + n), Vec(hi, hi + n))};
  });
}

am_status am_domain_signed_distance(const am_domain* d, const double* x, double* out) {
  if (!d || !x || !out) return args_error("am_domain_signed_distance needs d, x, out");
  return guarded([&] {
    *out = d->d.signed_distance(std::span<const double>(x, static_cast<std::size_t>(d->d.n)));
  });
}

void am_domain_free(am_domain* d) { delete d; }

am_status am_wos_run(const am_function* g, const am_measure* a, const am_domain* omega, double s,
                     const double* x0, const am_walk_config* cfg, double* estimate,
                     double* std_error, double* mean_steps, double* truncated_fraction) {
  if (!g || !a || !omega || !x0 || !estimate)
    return args_error("am_wos_run needs g, a, omega, x0, estimate");
  return guarded([&] {
    const std::span<const double> xs(x0, static_cast<std::size_t>(omega->d.n));
    const WalkStats stats = run_walks(g->f, xs, s, a->m, omega->d, to_walk_config(cfg));
    *estimate = stats.estimate;
    if (std_error) *std_error = stats.std_error;
    if (mean_steps) *mean_steps = stats.mean_steps;
    if (truncated_fraction) *truncated_fraction = stats.truncated_fraction;
  });
}

am_status am_wos_bias_scan(const am_function* g, const am_measure* a, const am_domain* omega,
                           double s, const double* x0, const am_walk_config* cfg,
                           const double* caps, long long n_caps, char** out_json) {
  if (!g || !a || !omega || !x0 || !caps || !out_json)
    return args_error("am_wos_bias_scan needs g, a, omega, x0, caps, out_json");
  if (n_caps < 1) return args_error("am_wos_bias_scan needs n_caps >= 1");
  return guarded([&] {
    const std::span<const double> xs(x0, static_cast<std::size_t>(omega->d.n));
    const std::span<const double> cap_span(caps, static_cast<std::size_t>(n_caps));
    const BiasScan scan = bias_scan(g->f, xs, s, a->m, omega->d, to_walk_config(cfg), cap_span);
    std::string out = "{\"rows\": [";
    for (std::size_t i = 0; i < scan.rows.size(); ++i) {
      const BiasRow& row = scan.rows[i];
      if (i) out += ", ";
      out += "{\"cap\": ";
      append_json_number(out, row.cap);
      out += ", \"estimate\": ";
      append_json_number(out, row.estimate);
      out += ", \"std_error\": ";
      append_json_number(out, row.std_error);
      out += ", \"diff_prev\": ";
      append_json_number(out, row.diff_prev);
      out += "}";
    }
    out += "]}";
    *out_json = dup_string(out);
  });
}

}  // extern "C"
