#include "undernewton/theory.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <string>

#include "undernewton/error.hpp"

namespace undernewton::theory {
namespace {

// Closed comparisons at branch seams tolerate this much relative noise.
constexpr double kSeamSlack = 1e-12;

double pow2k(double delta, int k) {
  double term = delta;
  for (int i = 0; i < k && term > 0; ++i) term *= term;
  return term;
}

void require_delta(double delta) {
  if (!(delta >= 0 && delta < 1)) {
    throw Error(ErrorCode::DomainError, "delta must lie in [0, 1)");
  }
}

void require_positive(double v, const char* name) {
  if (!(v > 0)) throw Error(ErrorCode::DomainError, std::string(name) + " must be positive");
}

double floor_slack(double v) { return std::floor(v + kSeamSlack * std::max(1.0, std::abs(v))); }

}  // namespace

double H(int k, double delta) {
  require_delta(delta);
  if (k < 0) throw Error(ErrorCode::DomainError, "H index must be nonnegative");
  double term = pow2k(delta, k);
  double sum = 0;
  // Terms decay doubly exponentially; stop once they fall below one ulp of the sum.
  while (term > 0 && (sum == 0 || term >= 1e-17 * sum)) {
    sum += term;
    term *= term;
  }
  return sum;
}

double Delta(double h) {
  if (!(h >= 0)) throw Error(ErrorCode::DomainError, "Delta expects a nonnegative argument");
  if (h == 0) return 0;
  double lo = 0;
  double hi = 1 - 1e-15;
  if (H(0, hi) <= h) return hi;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (H(0, mid) < h) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double c_constant() {
  static const double c = H(0, 0.5);
  return c;
}

int k_max_beta(double u0, double beta) {
  require_positive(beta, "beta");
  if (!(u0 >= 0)) throw Error(ErrorCode::DomainError, "u0 must be nonnegative");
  const double ratio = 2 * u0 / beta;
  const double steps = std::ceil(ratio - kSeamSlack * std::max(1.0, ratio)) - 2;
  if (steps <= 0) return 0;
  if (steps >= static_cast<double>(INT_MAX)) return INT_MAX;
  return static_cast<int>(steps);
}

int k_max(double u0, double mu, double L) {
  require_positive(mu, "mu");
  require_positive(L, "L");
  return k_max_beta(u0, mu * mu / L);
}

namespace {

bool small_ball(double mu, double L, double rho) {
  return L * rho / (2 * mu) <= c_constant() * (1 + kSeamSlack);
}

void require_constants(double mu, double L, double rho) {
  require_positive(mu, "mu");
  require_positive(L, "L");
  require_positive(rho, "rho");
}

}  // namespace

double alg1_initial_threshold(double mu, double L, double rho) {
  require_constants(mu, L, rho);
  const double beta = mu * mu / L;
  if (small_ball(mu, L, rho)) return 2 * beta * Delta(L * rho / (2 * mu));
  if (std::isinf(rho)) return kInf;
  return beta * (1 + 0.5 * floor_slack(L * rho / mu - 2 * c_constant()));
}

double alg1_initial_threshold_approx(double mu, double L, double rho) {
  require_constants(mu, L, rho);
  const double beta = mu * mu / L;
  if (small_ball(mu, L, rho)) return 2 * beta / (1 + 2 * mu / (L * rho));
  return alg1_initial_threshold(mu, L, rho);
}

double alg3_initial_threshold(double mu, double L, double rho) {
  require_constants(mu, L, rho);
  if (small_ball(mu, L, rho)) return alg1_initial_threshold(mu, L, rho);
  if (std::isinf(rho)) return kInf;
  const double d = L * rho / mu - 2 * c_constant();
  return mu * mu / (2 * L) * floor_slack((-1 + std::sqrt(25 + 16 * d)) / 2);
}

double RateEnvelope::residual(int k) const {
  const double beta = mu * mu / L;
  if (variant == Variant::Pure) return 2 * beta * pow2k(delta, k);
  if (k < k_max) return u0 - 0.5 * beta * k;
  return 2 * beta * pow2k(0.5, k - k_max);
}

double RateEnvelope::distance(int k) const {
  const double c = c_constant();
  if (variant == Variant::Pure) return 2 * mu / L * H(k, delta);
  if (k >= k_max) return 2 * mu / L * H(k - k_max, 0.5);
  const double left = static_cast<double>(k_max - k);
  if (variant == Variant::Alg1) return mu / L * (left + 2 * c);
  return mu / L * (left * (left + 5) / 4 + 2 * c);
}

RateEnvelope pure_newton_envelope(double delta, double mu, double L) {
  require_delta(delta);
  require_positive(mu, "mu");
  require_positive(L, "L");
  RateEnvelope env;
  env.variant = Variant::Pure;
  env.mu = mu;
  env.L = L;
  env.delta = delta;
  env.u0 = 2 * mu * mu / L * delta;
  return env;
}

RateEnvelope rate_envelope(double u0, double mu, double L, Variant variant) {
  require_positive(mu, "mu");
  require_positive(L, "L");
  if (variant == Variant::Pure) return pure_newton_envelope(L * u0 / (2 * mu * mu), mu, L);
  RateEnvelope env;
  env.variant = variant;
  env.u0 = u0;
  env.mu = mu;
  env.L = L;
  env.k_max = k_max(u0, mu, L);
  return env;
}

std::string_view to_string(RegionSource s) {
  switch (s) {
    case RegionSource::Thm1: return "covering-ball";
    case RegionSource::Thm2: return "single-point";
    case RegionSource::Cor3: return "single-point-small-ball";
    case RegionSource::Thm5: return "quadratic-existence";
    case RegionSource::Thm6: return "quadratic-convergence";
  }
  return "unknown";
}

SolvabilityRegion region_thm1(double mu, double rho) {
  require_positive(mu, "mu");
  require_positive(rho, "rho");
  SolvabilityRegion r;
  r.radius_y = mu * rho;
  r.radius_x = rho;
  r.radius_x_factor = 1 / mu;
  r.source = RegionSource::Thm1;
  return r;
}

SolvabilityRegion region_thm2(double mu0, double L, double rho) {
  require_positive(mu0, "mu0");
  require_positive(L, "L");
  require_positive(rho, "rho");
  const double natural = mu0 / (2 * L);
  const double r_star = std::min(rho, natural);
  SolvabilityRegion r;
  r.radius_y = (mu0 - L * r_star) * r_star;
  r.radius_x = r_star;
  r.radius_x_factor = 1 / (mu0 - L * r_star);
  r.source = rho >= natural ? RegionSource::Thm2 : RegionSource::Cor3;
  return r;
}

SolvabilityRegion region_thm5(double mu0, double L) {
  SolvabilityRegion r = region_thm2(mu0, L, kInf);
  r.source = RegionSource::Thm5;
  return r;
}

SolvabilityRegion region_thm6(double mu0, double L) {
  require_positive(mu0, "mu0");
  require_positive(L, "L");
  const auto& k = region_constants();
  SolvabilityRegion r;
  r.radius_y = k.s1 * mu0 * mu0 / L;
  r.radius_x = k.t1 * mu0 / L;
  r.radius_x_factor = 0;
  r.source = RegionSource::Thm6;
  return r;
}

double quadratic_region_profile(double t) {
  if (!(t >= 0 && t < 1)) throw Error(ErrorCode::DomainError, "t must lie in [0, 1)");
  return 2 * (1 - t) * (1 - t) * Delta(t / (2 * (1 - t)));
}

const RegionConstants& region_constants() {
  static const RegionConstants constants = [] {
    RegionConstants k{};
    const auto [t1, s1] = golden_section_max(quadratic_region_profile, 0.0, 0.5, 1e-10);
    k.t1 = t1;
    k.s1 = s1;
    // Delta(H) >= H / (1 + H) turns S into 2 t (1 - t)^2 / (2 - t).
    const auto approx = [](double t) { return 2 * t * (1 - t) * (1 - t) / (2 - t); };
    k.s2 = golden_section_max(approx, 0.0, 0.5, 1e-10).second;
    return k;
  }();
  return constants;
}

double s2_closed_form() { return 5 * std::sqrt(5.0) - 11; }

double constant_step_alpha(double u0, double mu, double L, double rho, double eps) {
  require_positive(mu, "mu");
  require_positive(L, "L");
  require_positive(rho, "rho");
  if (!(eps > 0 && eps < 1)) throw Error(ErrorCode::DomainError, "eps must lie in (0, 1)");
  if (!(u0 >= 0 && u0 < mu * rho)) throw Error(ErrorCode::DomainError, "requires u0 < mu * rho");
  if (u0 == 0) return 1;
  const double alpha = eps * 2 * mu * mu / (L * u0) * (1 - u0 / (mu * rho));
  return std::min(1.0, alpha);
}

ApproxBounds approx_bounds_check(double delta, int k) {
  require_delta(delta);
  if (k < 0) throw Error(ErrorCode::DomainError, "k must be nonnegative");
  const double p = pow2k(delta, k);
  const double h0 = H(0, delta);
  return {p / (1 - p), h0 / (1 + h0)};
}

}  // namespace undernewton::theory
