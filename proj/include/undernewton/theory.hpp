#pragma once

// Closed-form certificates for the blended damped/pure Newton iterations:
// double-exponential tail sums, stage counts, admissible initial residuals,
// convergence-rate envelopes and solvability radii.

#include <limits>
#include <string_view>
#include <utility>

namespace undernewton::theory {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// H_k(delta) = sum_{l >= k} delta^(2^l), delta in [0, 1).
double H(int k, double delta);

/// Inverse of H_0 on [0, 1): the delta with H(0, delta) = h.
double Delta(double h);

/// c = H_0(1/2).
double c_constant();

/// Upper bound max{0, ceil(2 u0 / beta) - 2} on the number of damped steps.
int k_max_beta(double u0, double beta);
int k_max(double u0, double mu, double L);

/// Largest ||P(x_0)|| for which the basic method stays in the ball of radius rho.
double alg1_initial_threshold(double mu, double L, double rho);
/// Same with the rational lower bound of Delta in the small-ball branch.
double alg1_initial_threshold_approx(double mu, double L, double rho);
/// The L-only variant; never larger than alg1_initial_threshold.
double alg3_initial_threshold(double mu, double L, double rho);

enum class Variant { Alg1, Alg3, Pure };

struct RateEnvelope {
  Variant variant = Variant::Alg1;
  int k_max = 0;
  double u0 = 0;
  double mu = 0;
  double L = 0;
  double delta = 0;  // Pure only

  /// Bound on ||P(x_k)||.
  double residual(int k) const;
  /// Bound on ||x_k - x*||.
  double distance(int k) const;
};

RateEnvelope rate_envelope(double u0, double mu, double L, Variant variant);

/// Pure Newton from delta = L u0 / (2 mu^2) < 1.
RateEnvelope pure_newton_envelope(double delta, double mu, double L);

enum class RegionSource { Thm1, Thm2, Cor3, Thm5, Thm6 };

std::string_view to_string(RegionSource s);

struct SolvabilityRegion {
  double radius_y = 0;         // ||y|| below this is solvable
  double radius_x = 0;         // bound on ||x*||
  double radius_x_factor = 0;  // ||x*|| <= factor * ||y||, 0 when not applicable
  RegionSource source = RegionSource::Thm1;

  bool unbounded() const { return radius_y == kInf; }
  bool contains(double y_norm) const { return y_norm < radius_y; }
};

/// Covering constant mu on a ball of radius rho around the origin.
SolvabilityRegion region_thm1(double mu, double rho);
/// Covering constant mu0 at the origin only; rho may be infinite.
SolvabilityRegion region_thm2(double mu0, double L, double rho);
/// Quadratic maps: region_thm2 with rho = infinity.
SolvabilityRegion region_thm5(double mu0, double L);
/// Quadratic maps, region in which Algorithms 1 and 3 provably converge.
SolvabilityRegion region_thm6(double mu0, double L);

/// S(t) = 2 (1 - t)^2 Delta(t / (2 (1 - t))).
double quadratic_region_profile(double t);

struct RegionConstants {
  double s1;  // max of S on [0, 1/2]
  double t1;  // argmax
  double s2;  // max of the rational approximation of S
};

/// Computed once by golden-section search and cached.
const RegionConstants& region_constants();

/// 5 sqrt(5) - 11.
double s2_closed_form();

/// Step size from the constructive existence proof:
/// eps * 2 mu^2 / (L u0) * (1 - u0 / (mu rho)), clipped to 1.
double constant_step_alpha(double u0, double mu, double L, double rho, double eps);

struct ApproxBounds {
  double h_upper;      // delta^(2^k) / (1 - delta^(2^k)) >= H(k, delta)
  double delta_lower;  // H0 / (1 + H0) <= Delta(H0) with H0 = H(0, delta)
};

ApproxBounds approx_bounds_check(double delta, int k);

/// Maximises a unimodal f on [lo, hi]; returns {argmax, max}.
template <typename F>
std::pair<double, double> golden_section_max(F f, double lo, double hi, double tol);

}  // namespace undernewton::theory

#include "undernewton/theory_impl.hpp"
