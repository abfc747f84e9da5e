#include "undernewton/newton.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "undernewton/error.hpp"
#include "undernewton/min_norm.hpp"

namespace undernewton {

std::string_view to_string(Stage s) { return s == Stage::Damped ? "damped" : "pure"; }

std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::MaxIter: return "MaxIter";
    case SolveStatus::LeftTrustBall: return "LeftTrustBall";
    case SolveStatus::RankDeficientJacobian: return "RankDeficientJacobian";
    case SolveStatus::InnerReductionLimit: return "InnerReductionLimit";
    case SolveStatus::ZeroGradient: return "ZeroGradient";
    case SolveStatus::NonFinite: return "NonFinite";
  }
  return "Unknown";
}

void SolverConfig::validate() const {
  if (stop_tol && !(*stop_tol > 0)) throw Error(ErrorCode::InvalidInput, "stop_tol must be positive");
  if (max_iter < 1) throw Error(ErrorCode::InvalidInput, "max_iter must be at least 1");
  if (!(trust_radius > 0)) throw Error(ErrorCode::InvalidInput, "trust radius must be positive");
  if (!(q > 0 && q < 1)) throw Error(ErrorCode::InvalidInput, "q must lie in (0, 1)");
  if (growth && !(*growth > 1)) throw Error(ErrorCode::InvalidInput, "growth factor must exceed 1");
  if (max_inner < 0) throw Error(ErrorCode::InvalidInput, "max_inner must be nonnegative");
  if (!(armijo_factor > 0 && armijo_factor < 1)) {
    throw Error(ErrorCode::InvalidInput, "armijo factor must lie in (0, 1)");
  }
  if (!(armijo_slope > 0 && armijo_slope < 1)) {
    throw Error(ErrorCode::InvalidInput, "armijo slope must lie in (0, 1)");
  }
  if (fd_step && !(*fd_step > 0)) throw Error(ErrorCode::InvalidInput, "fd_step must be positive");
}

namespace {

struct Trial {
  VectorXd x;
  VectorXd r;
  double u = 0;
};

struct StepContext {
  int k;
  const VectorXd& x;
  double u;
  const VectorXd& z;
  double z_norm;
  std::function<Trial(double)> trial;
};

struct StepDecision {
  double alpha = 1;
  double beta = 0;
  int inner = 0;
  Trial next;
  std::optional<SolveStatus> failure;
};

using StepRule = std::function<StepDecision(const StepContext&)>;

double residual_norm(const VectorXd& r, NormKind k) {
  return r.allFinite() ? vector_norm(r, k) : std::numeric_limits<double>::infinity();
}

SolveOutcome run(const ProblemDefinition& p, const VectorXd& x0, const SolverConfig& cfg,
                 const StepRule& rule) {
  p.validate();
  cfg.validate();
  if (x0.size() != p.n) throw Error(ErrorCode::InvalidInput, "x0 has wrong length");
  if (!x0.allFinite()) throw Error(ErrorCode::InvalidInput, "x0 has non-finite entries");

  SolveOutcome out;
  VectorXd x = x0;
  VectorXd r = p.evaluate(x);
  double u = residual_norm(r, cfg.image_norm);
  const double tol = cfg.stop_tol.value_or(1e-10 * std::max(1.0, u));
  out.stop_tol = tol;
  if (cfg.record_iterates) out.iterates.push_back(x);

  auto trial = [&](const VectorXd& from, const VectorXd& z, double alpha) {
    Trial t;
    t.x = from - alpha * z;
    t.r = p.evaluate(t.x);
    t.u = residual_norm(t.r, cfg.image_norm);
    return t;
  };

  for (int k = 0;; ++k) {
    if (!std::isfinite(u)) {
      out.status = SolveStatus::NonFinite;
      break;
    }
    if (u <= tol) {
      out.status = SolveStatus::Converged;
      break;
    }
    if (vector_norm(x - x0, cfg.domain_norm) > cfg.trust_radius * (1 + 1e-12)) {
      out.status = SolveStatus::LeftTrustBall;
      break;
    }
    if (k >= cfg.max_iter) {
      out.status = SolveStatus::MaxIter;
      break;
    }

    const MatrixXd jac = p.jacobian_at(x, cfg.fd_step);
    if (!jac.allFinite()) {
      out.status = SolveStatus::NonFinite;
      break;
    }
    VectorXd z;
    try {
      z = min_norm(LinearSystem<double>{jac, r}, cfg.domain_norm);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::RankDeficient && e.code() != ErrorCode::LPInfeasible) throw;
      out.status = SolveStatus::RankDeficientJacobian;
      break;
    }
    const double z_norm = vector_norm(z, cfg.domain_norm);
    if (!(z_norm > 0)) {
      out.status = SolveStatus::RankDeficientJacobian;
      break;
    }

    StepContext ctx{k, x, u, z, z_norm, [&](double alpha) { return trial(x, z, alpha); }};
    StepDecision step = rule(ctx);
    out.total_inner_reductions += step.inner;
    if (step.failure) {
      out.status = *step.failure;
      break;
    }

    IterationRecord rec;
    rec.k = k;
    rec.u = u;
    rec.step_norm = z_norm;
    rec.alpha = step.alpha;
    rec.beta = step.beta;
    rec.stage = step.alpha < 1 ? Stage::Damped : Stage::Pure;
    rec.inner_reductions = step.inner;
    if (rec.stage == Stage::Damped) ++out.stage1_count;
    out.trace.push_back(rec);

    x = std::move(step.next.x);
    r = std::move(step.next.r);
    u = step.next.u;
    if (cfg.record_iterates) out.iterates.push_back(x);
  }

  out.x = x;
  out.final_residual = u;
  return out;
}

StepRule fixed_rule(std::function<std::pair<double, double>(const StepContext&)> choose) {
  return [choose](const StepContext& ctx) {
    StepDecision d;
    std::tie(d.alpha, d.beta) = choose(ctx);
    d.next = ctx.trial(d.alpha);
    return d;
  };
}

void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v)) {
    throw Error(ErrorCode::InvalidInput, std::string(name) + " must be positive and finite");
  }
}

}  // namespace

SolveOutcome solve_with_beta(const ProblemDefinition& p, const VectorXd& x0, double beta,
                             const SolverConfig& cfg) {
  require_positive(beta, "beta");
  return run(p, x0, cfg, fixed_rule([beta](const StepContext& ctx) {
               return std::pair{std::min(1.0, beta / ctx.u), beta};
             }));
}

SolveOutcome solve_basic(const ProblemDefinition& p, const VectorXd& x0, double mu, double L,
                         const SolverConfig& cfg) {
  require_positive(mu, "mu");
  require_positive(L, "L");
  return solve_with_beta(p, x0, mu * mu / L, cfg);
}

SolveOutcome solve_L(const ProblemDefinition& p, const VectorXd& x0, double L,
                     const SolverConfig& cfg) {
  require_positive(L, "L");
  return run(p, x0, cfg, fixed_rule([L](const StepContext& ctx) {
               const double ratio = ctx.u / (L * ctx.z_norm * ctx.z_norm);
               return std::pair{std::min(1.0, ratio), ratio * ctx.u};
             }));
}

SolveOutcome solve_damped_constant(const ProblemDefinition& p, const VectorXd& x0, double alpha,
                                   const SolverConfig& cfg) {
  if (!(alpha > 0 && alpha <= 1)) throw Error(ErrorCode::InvalidInput, "alpha must lie in (0, 1]");
  return run(p, x0, cfg, fixed_rule([alpha](const StepContext& ctx) {
               return std::pair{alpha, alpha * ctx.u};
             }));
}

SolveOutcome solve_pure(const ProblemDefinition& p, const VectorXd& x0, const SolverConfig& cfg) {
  return solve_damped_constant(p, x0, 1.0, cfg);
}

SolveOutcome solve_adaptive(const ProblemDefinition& p, const VectorXd& x0, double beta0,
                            const SolverConfig& cfg) {
  require_positive(beta0, "beta0");
  double beta = beta0;

  if (cfg.line_search) {
    return run(p, x0, cfg, [&cfg](const StepContext& ctx) {
      StepDecision d;
      double alpha = 1.0;
      for (;;) {
        d.next = ctx.trial(alpha);
        if (d.next.u <= (1 - cfg.armijo_slope * alpha) * ctx.u) break;
        if (++d.inner > cfg.max_inner) {
          d.failure = SolveStatus::InnerReductionLimit;
          return d;
        }
        alpha *= cfg.armijo_factor;
      }
      d.alpha = alpha;
      d.beta = alpha * ctx.u;
      return d;
    });
  }

  return run(p, x0, cfg, [&beta, &cfg](const StepContext& ctx) {
    StepDecision d;
    for (;;) {
      d.alpha = std::min(1.0, beta / ctx.u);
      d.next = ctx.trial(d.alpha);
      const bool accepted = d.alpha < 1 ? d.next.u < (1 - d.alpha / 2) * ctx.u
                                        : d.next.u < 0.5 * ctx.u;
      if (accepted) break;
      beta *= cfg.q;
      if (++d.inner > cfg.max_inner) {
        d.failure = SolveStatus::InnerReductionLimit;
        return d;
      }
    }
    d.beta = beta;
    if (cfg.growth) beta *= *cfg.growth;
    return d;
  });
}

}  // namespace undernewton
