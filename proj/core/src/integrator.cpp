#include "spinfridge/integrator.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "spinfridge/errors.hpp"

namespace spinfridge {

namespace {

constexpr double a21 = 1.0 / 4.0;
constexpr double a31 = 3.0 / 32.0, a32 = 9.0 / 32.0;
constexpr double a41 = 1932.0 / 2197.0, a42 = -7200.0 / 2197.0, a43 = 7296.0 / 2197.0;
constexpr double a51 = 439.0 / 216.0, a52 = -8.0, a53 = 3680.0 / 513.0, a54 = -845.0 / 4104.0;
constexpr double a61 = -8.0 / 27.0, a62 = 2.0, a63 = -3544.0 / 2565.0, a64 = 1859.0 / 4104.0, a65 = -11.0 / 40.0;
constexpr double b1 = 16.0 / 135.0, b3 = 6656.0 / 12825.0, b4 = 28561.0 / 56430.0, b5 = -9.0 / 50.0, b6 = 2.0 / 55.0;
// fifth-order minus fourth-order weights
constexpr double e1 = b1 - 25.0 / 216.0, e3 = b3 - 1408.0 / 2565.0, e4 = b4 - 2197.0 / 4104.0, e5 = b5 + 1.0 / 5.0,
                 e6 = b6;

BlockMatrices like(const BlockMatrices& y) {
  BlockMatrices out(y.size());
  for (std::size_t b = 0; b < y.size(); ++b) out[b].resize(y[b].rows(), y[b].cols());
  return out;
}

struct Term {
  const BlockMatrices& k;
  double a;
};

// out = y + h * sum a_i k_i, in one pass per block
void combine(BlockMatrices& out, const BlockMatrices& y, double h, std::initializer_list<Term> terms) {
  std::array<const double*, 5> src{};
  std::array<double, 5> coef{};
  for (std::size_t b = 0; b < y.size(); ++b) {
    std::size_t m = 0;
    for (const Term& t : terms) {
      src[m] = reinterpret_cast<const double*>(t.k[b].data());
      coef[m] = h * t.a;
      ++m;
    }
    const auto n = 2 * y[b].size();
    const double* y0 = reinterpret_cast<const double*>(y[b].data());
    double* o = reinterpret_cast<double*>(out[b].data());
    switch (m) {
      case 1:
        for (Eigen::Index i = 0; i < n; ++i) o[i] = y0[i] + coef[0] * src[0][i];
        break;
      case 2:
        for (Eigen::Index i = 0; i < n; ++i) o[i] = y0[i] + coef[0] * src[0][i] + coef[1] * src[1][i];
        break;
      case 3:
        for (Eigen::Index i = 0; i < n; ++i) {
          o[i] = y0[i] + coef[0] * src[0][i] + coef[1] * src[1][i] + coef[2] * src[2][i];
        }
        break;
      case 4:
        for (Eigen::Index i = 0; i < n; ++i) {
          o[i] = y0[i] + coef[0] * src[0][i] + coef[1] * src[1][i] + coef[2] * src[2][i] + coef[3] * src[3][i];
        }
        break;
      default:
        for (Eigen::Index i = 0; i < n; ++i) {
          o[i] = y0[i] + coef[0] * src[0][i] + coef[1] * src[1][i] + coef[2] * src[2][i] + coef[3] * src[3][i] +
                 coef[4] * src[4][i];
        }
    }
  }
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) throw DomainError("integrator tolerances must be positive");
  if (!(initial_step > 0.0) || !(max_step > 0.0)) throw DomainError("integrator step sizes must be positive");
  if (!(dense_output_spacing > 0.0)) throw DomainError("dense output spacing must be positive");
  if (!(min_step > 0.0) || max_steps < 1) throw DomainError("invalid integrator limits");
}

IntegrationStats rkf45(const BlockRhs& rhs, BlockMatrices& y, double t_end, double rate, const IntegratorConfig& cfg,
                       std::span<const double> sample_times, const BlockObserver& observer) {
  cfg.validate();
  if (!(t_end >= 0.0)) throw DomainError("duration must be >= 0");
  if (!(rate > 0.0)) rate = 1.0;
  const double unit = 1.0 / rate;
  const double h_max = cfg.max_step * unit;
  const double h_min = cfg.min_step * unit;

  IntegrationStats stats;
  std::size_t next_sample = 0;
  auto emit_due = [&](double t) {
    while (next_sample < sample_times.size() && sample_times[next_sample] <= t) {
      if (observer) observer(sample_times[next_sample], y);
      ++next_sample;
    }
  };
  emit_due(0.0);
  if (t_end == 0.0) return stats;

  BlockMatrices k1 = like(y), k2 = like(y), k3 = like(y), k4 = like(y), k5 = like(y), k6 = like(y), tmp = like(y);
  double t = 0.0;
  double h = std::min(cfg.initial_step * unit, h_max);
  rhs(y, k1);
  ++stats.rhs_evaluations;

  while (t < t_end) {
    double target = t_end;
    if (next_sample < sample_times.size()) target = std::min(target, sample_times[next_sample]);
    bool landing = false;
    double step = h;
    if (t + step >= target - 1e-14 * std::max(1.0, std::abs(target))) {
      step = target - t;
      landing = true;
    }
    const std::size_t nb = y.size();
    combine(tmp, y, step, {{k1, a21}});
    rhs(tmp, k2);
    combine(tmp, y, step, {{k1, a31}, {k2, a32}});
    rhs(tmp, k3);
    combine(tmp, y, step, {{k1, a41}, {k2, a42}, {k3, a43}});
    rhs(tmp, k4);
    combine(tmp, y, step, {{k1, a51}, {k2, a52}, {k3, a53}, {k4, a54}});
    rhs(tmp, k5);
    combine(tmp, y, step, {{k1, a61}, {k2, a62}, {k3, a63}, {k4, a64}, {k5, a65}});
    rhs(tmp, k6);
    stats.rhs_evaluations += 5;

    double err = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      const auto n = 2 * y[b].size();
      // trace-norm errors grow like sqrt(dim) times the entrywise error
      const double weight = std::sqrt(static_cast<double>(y[b].rows()));
      const double* y0 = reinterpret_cast<const double*>(y[b].data());
      const double* p1 = reinterpret_cast<const double*>(k1[b].data());
      const double* p3 = reinterpret_cast<const double*>(k3[b].data());
      const double* p4 = reinterpret_cast<const double*>(k4[b].data());
      const double* p5 = reinterpret_cast<const double*>(k5[b].data());
      const double* p6 = reinterpret_cast<const double*>(k6[b].data());
      double* out = reinterpret_cast<double*>(tmp[b].data());
      // componentwise on real and imaginary parts
      for (Eigen::Index i = 0; i < n; ++i) {
        const double ynew = y0[i] + step * (b1 * p1[i] + b3 * p3[i] + b4 * p4[i] + b5 * p5[i] + b6 * p6[i]);
        const double e = step * (e1 * p1[i] + e3 * p3[i] + e4 * p4[i] + e5 * p5[i] + e6 * p6[i]);
        const double scale = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y0[i]), std::abs(ynew));
        err = std::max(err, weight * std::abs(e) / scale);
        out[i] = ynew;
      }
    }
    if (!std::isfinite(err)) {
      throw IntegrationError("non-finite error estimate", t, step, err);
    }

    if (err <= 1.0) {
      t = landing ? target : t + step;
      std::swap(y, tmp);
      ++stats.accepted;
      emit_due(t);
      if (t >= t_end) break;
      rhs(y, k1);
      ++stats.rhs_evaluations;
      const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
      // a shortened landing step says nothing about the natural step size
      h = std::min(h_max, landing ? std::max(h, step * factor) : step * factor);
    } else {
      ++stats.rejected;
      h = step * std::clamp(0.9 * std::pow(err, -0.25), 0.2, 1.0);
      if (h < h_min) throw IntegrationError("step size underflow", t, h, err);
    }
    if (stats.accepted + stats.rejected > cfg.max_steps) {
      throw IntegrationError("maximum number of steps exceeded", t, h, err);
    }
  }
  emit_due(t_end);
  return stats;
}

}  // namespace spinfridge
