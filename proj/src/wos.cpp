#include "anisomean/wos.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "anisomean/errors.hpp"
#include "anisomean/meankernel.hpp"
#include "anisomean/rng.hpp"

namespace aniso {

Domain Domain::ball(Vec center, double radius) {
  require(!center.empty(), errc::dimension_mismatch, "ball center must have a dimension");
  require(std::isfinite(radius) && radius > 0.0, errc::bad_parameter,
          "ball radius must be positive");
  Domain d;
  d.shape = Shape::ball;
  d.n = static_cast<int>(center.size());
  d.center = std::move(center);
  d.radius = radius;
  return d;
}

Domain Domain::box(Vec lo, Vec hi) {
  require(!lo.empty() && lo.size() == hi.size(), errc::dimension_mismatch,
          "box corners must share a dimension");
  for (std::size_t i = 0; i < lo.size(); ++i)
    require(std::isfinite(lo[i]) && std::isfinite(hi[i]) && lo[i] < hi[i], errc::bad_parameter,
            "box needs lo < hi in every coordinate");
  Domain d;
  d.shape = Shape::box;
  d.n = static_cast<int>(lo.size());
  d.lo = std::move(lo);
  d.hi = std::move(hi);
  return d;
}

double Domain::signed_distance(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == n, errc::dimension_mismatch,
          "point dimension does not match the domain");
  if (shape == Shape::ball) {
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = x[i] - center[i];
      q += d * d;
    }
    return std::sqrt(q) - radius;
  }
  // Box SDF: for outside points the Euclidean distance to the box, for
  // inside points minus the distance to the nearest face.
  double out_sq = 0.0;
  double inside = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    const double below = lo[i] - x[i];
    const double above = x[i] - hi[i];
    const double d = std::max(below, above);  // negative iff strictly between the faces
    if (d > 0.0)
      out_sq += d * d;
    else
      inside = std::min(inside, -d);
  }
  return out_sq > 0.0 ? std::sqrt(out_sq) : -inside;
}

bool Domain::contains(std::span<const double> x) const { return signed_distance(x) < 0.0; }

Vec Domain::boundary_projection(std::span<const double> x) const {
  require(static_cast<int>(x.size()) == n, errc::dimension_mismatch,
          "point dimension does not match the domain");
  Vec p(x.begin(), x.end());
  if (shape == Shape::ball) {
    double q = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = x[i] - center[i];
      q += d * d;
    }
    const double len = std::sqrt(q);
    if (len >= radius) return p;
    if (len == 0.0) {  // center: any boundary point is nearest, pick +e1
      p[0] = center[0] + radius;
      return p;
    }
    for (int i = 0; i < n; ++i) p[i] = center[i] + (x[i] - center[i]) * (radius / len);
    return p;
  }
  if (signed_distance(x) >= 0.0) return p;
  // Inside a box: push the coordinate nearest to a face onto that face.
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  double best_target = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d_lo = x[i] - lo[i];
    const double d_hi = hi[i] - x[i];
    if (d_lo < best_d) {
      best_d = d_lo;
      best = i;
      best_target = lo[i];
    }
    if (d_hi < best_d) {
      best_d = d_hi;
      best = i;
      best_target = hi[i];
    }
  }
  p[best] = best_target;
  return p;
}

namespace {

struct WalkOutcome {
  double score = 0.0;
  std::int64_t steps = 0;
  bool truncated = false;
};

WalkOutcome one_walk(const TestFunction& g, std::span<const double> x0, double s,
                     const SpectralMeasure& a, const Domain& omega, const WalkConfig& cfg,
                     RngState& rng) {
  Vec x(x0.begin(), x0.end());
  MeanKernelParams kernel = make_mean_kernel(1.0, s, a);
  WalkOutcome out;
  while (out.steps < cfg.max_steps) {
    const double dist = -omega.signed_distance(x);
    kernel.r = std::min(cfg.theta * dist, cfg.hmax);
    const Jump jump = sample_jump(kernel, rng);
    for (int i = 0; i < omega.n; ++i) x[i] += jump.sign * jump.rho * jump.omega[i];
    ++out.steps;
    if (!omega.contains(x)) {
      out.score = g.value(x);
      return out;
    }
  }
  out.truncated = true;
  out.score = g.value(omega.boundary_projection(x));
  return out;
}

}  // namespace

WalkStats run_walks(const TestFunction& g, std::span<const double> x0, double s,
                    const SpectralMeasure& a, const Domain& omega, const WalkConfig& config) {
  require(a.dim() == omega.n, errc::dimension_mismatch, "measure and domain dimension differ");
  require(g.n == omega.n, errc::dimension_mismatch, "boundary data dimension differs");
  require(s > 0.0 && s < 1.0, errc::bad_parameter, "s must lie in (0,1)");
  require(config.walks >= 1, errc::bad_parameter, "need at least one walk");
  require(config.max_steps >= 1, errc::bad_parameter, "need at least one step");
  require(config.theta > 0.0 && config.theta <= 1.0, errc::bad_parameter,
          "theta must lie in (0,1]");
  require(config.hmax > 0.0, errc::degenerate_radius, "step cap must be positive");
  require(omega.signed_distance(x0) < 0.0, errc::start_outside_domain,
          "start point must lie strictly inside the domain");

  const std::int64_t count = config.walks;
  std::vector<double> scores(static_cast<std::size_t>(count));
  std::vector<std::int64_t> steps(static_cast<std::size_t>(count));
  std::vector<unsigned char> truncated(static_cast<std::size_t>(count));

  int workers = config.workers;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  if (workers < 1) workers = 1;
  workers = static_cast<int>(std::min<std::int64_t>(workers, count));

  auto body = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t i = begin; i < end; ++i) {
      RngState rng = RngState::substream(config.seed, static_cast<std::uint64_t>(i));
      const WalkOutcome out = one_walk(g, x0, s, a, omega, config, rng);
      scores[static_cast<std::size_t>(i)] = out.score;
      steps[static_cast<std::size_t>(i)] = out.steps;
      truncated[static_cast<std::size_t>(i)] = out.truncated ? 1 : 0;
    }
  };

  if (workers == 1) {
    body(0, count);
  } else {
    // Contiguous blocks; any split gives the same walk outcomes because each
    // index carries its own substream.
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const std::int64_t chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const std::int64_t begin = w * chunk;
      const std::int64_t end = std::min(count, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(body, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  // Reduce serially in index order so the result is bitwise independent of
  // the worker split.
  double sum = 0.0;
  double step_sum = 0.0;
  std::int64_t trunc_count = 0;
  for (std::int64_t i = 0; i < count; ++i) {
    sum += scores[static_cast<std::size_t>(i)];
    step_sum += static_cast<double>(steps[static_cast<std::size_t>(i)]);
    trunc_count += truncated[static_cast<std::size_t>(i)];
  }
  WalkStats stats;
  stats.count = count;
  stats.estimate = sum / static_cast<double>(count);
  stats.mean_steps = step_sum / static_cast<double>(count);
  stats.truncated_fraction = static_cast<double>(trunc_count) / static_cast<double>(count);
  double ss = 0.0;
  for (std::int64_t i = 0; i < count; ++i) {
    const double d = scores[static_cast<std::size_t>(i)] - stats.estimate;
    ss += d * d;
  }
  stats.std_error =
      count > 1 ? std::sqrt(ss / static_cast<double>(count - 1) / static_cast<double>(count))
                : 0.0;
  require(std::isfinite(stats.estimate), errc::nonfinite_value, "walk estimate is not finite");
  return stats;
}

BiasScan bias_scan(const TestFunction& g, std::span<const double> x0, double s,
                   const SpectralMeasure& a, const Domain& omega, const WalkConfig& config,
                   std::span<const double> caps) {
  require(caps.size() >= 2, errc::bad_parameter, "need at least two caps to compare");
  for (std::size_t i = 0; i < caps.size(); ++i) {
    require(caps[i] > 0.0, errc::degenerate_radius, "caps must be positive");
    require(i == 0 || caps[i] < caps[i - 1], errc::bad_parameter,
            "caps must be strictly decreasing");
  }
  BiasScan scan;
  scan.rows.reserve(caps.size());
  for (std::size_t i = 0; i < caps.size(); ++i) {
    WalkConfig cfg = config;  // same seed throughout: common random numbers
    cfg.hmax = caps[i];
    const WalkStats stats = run_walks(g, x0, s, a, omega, cfg);
    BiasRow row;
    row.cap = caps[i];
    row.estimate = stats.estimate;
    row.std_error = stats.std_error;
    row.diff_prev = i == 0 ? 0.0 : stats.estimate - scan.rows.back().estimate;
    scan.rows.push_back(row);
  }
  return scan;
}

}  // namespace aniso
