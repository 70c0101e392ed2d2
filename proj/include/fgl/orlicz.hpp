#pragma once

// Parametric Orlicz functions G with derivative g, conjugate G*, and growth
// exponent certification. Three families are supported:
//   power:     G(t) = |t|^p / p          (g(t) = |t|^{p-2} t)
//   sumpowers: G(t) = |t|^a + |t|^b      (a <= b)
//   powerlog:  G(t) = |t|^p log(1 + |t|)
// The p-normalization of the power family makes g the kernel of the usual
// fractional p-Laplacian. All inequality certification runs in log space so
// that large exponents cannot overflow.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace fgl {

struct numeric_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct singularity_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double pi = 3.14159265358979323846;

// measure of the unit ball, dimensions 1 and 2
inline double unit_ball_measure(int dim) {
  if (dim == 1) return 2.0;
  if (dim == 2) return pi;
  throw std::invalid_argument("unit_ball_measure: dimension must be 1 or 2");
}

namespace detail {

inline double log_add_exp(double x, double y) {
  if (x < y) std::swap(x, y);
  if (!std::isfinite(x)) return x;
  return x + std::log1p(std::exp(y - x));
}

// log(1 + e^x), stable for any x; equals log(1+t) at x = log t
inline double log1p_exp(double x) {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

// t/(1+t) at t = e^x
inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline void require_finite(double t, const char* who) {
  if (!std::isfinite(t)) throw std::domain_error(std::string(who) + ": non-finite argument");
}

}  // namespace detail

enum class FamilyKind { PowerLaw, SumOfPowers, PowerLog };

class OrliczFamily {
 public:
  static OrliczFamily power_law(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("power_law: need p > 1");
    OrliczFamily f;
    f.kind_ = FamilyKind::PowerLaw;
    f.p_ = p;
    f.p_minus_ = p;
    f.p_plus_ = p;
    f.finish();
    return f;
  }

  static OrliczFamily sum_of_powers(double a, double b) {
    if (!(a > 1.0) || !(b >= a)) throw std::invalid_argument("sum_of_powers: need 1 < a <= b");
    OrliczFamily f;
    f.kind_ = FamilyKind::SumOfPowers;
    f.a_ = a;
    f.b_ = b;
    f.p_minus_ = a;
    f.p_plus_ = b;
    f.finish();
    return f;
  }

  static OrliczFamily power_log(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("power_log: need p > 1");
    OrliczFamily f;
    f.kind_ = FamilyKind::PowerLog;
    f.p_ = p;
    f.p_minus_ = p;
    f.p_plus_ = p + 1.0;
    f.finish();
    return f;
  }

  FamilyKind kind() const { return kind_; }
  double p_minus() const { return p_minus_; }
  double p_plus() const { return p_plus_; }
  double beta() const { return beta_; }

  double G(double t) const {
    detail::require_finite(t, "G");
    const double u = std::fabs(t);
    switch (kind_) {
      case FamilyKind::PowerLaw:
        return std::pow(u, p_) / p_;
      case FamilyKind::SumOfPowers:
        return std::pow(u, a_) + std::pow(u, b_);
      case FamilyKind::PowerLog:
        return std::pow(u, p_) * std::log1p(u);
    }
    return 0.0;
  }

  double g(double t) const {
    detail::require_finite(t, "g");
    const double u = std::fabs(t);
    const double sg = t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0);
    switch (kind_) {
      case FamilyKind::PowerLaw:
        return sg * std::pow(u, p_ - 1.0);
      case FamilyKind::SumOfPowers:
        return sg * (a_ * std::pow(u, a_ - 1.0) + b_ * std::pow(u, b_ - 1.0));
      case FamilyKind::PowerLog:
        return sg * (p_ * std::pow(u, p_ - 1.0) * std::log1p(u) + std::pow(u, p_) / (1.0 + u));
    }
    return 0.0;
  }

  // right-limit value at t = 0; throws when the limit is infinite
  double g_prime(double t) const {
    detail::require_finite(t, "g_prime");
    const double u = std::fabs(t);
    switch (kind_) {
      case FamilyKind::PowerLaw:
        if (u == 0.0 && p_ < 2.0)
          throw singularity_error("g_prime: power family with p < 2 is singular at 0");
        if (u == 0.0) return p_ == 2.0 ? 1.0 : 0.0;
        return (p_ - 1.0) * std::pow(u, p_ - 2.0);
      case FamilyKind::SumOfPowers: {
        if (u == 0.0 && a_ < 2.0)
          throw singularity_error("g_prime: sum-of-powers with a < 2 is singular at 0");
        if (u == 0.0) return a_ == 2.0 ? a_ * (a_ - 1.0) : 0.0;
        return a_ * (a_ - 1.0) * std::pow(u, a_ - 2.0) + b_ * (b_ - 1.0) * std::pow(u, b_ - 2.0);
      }
      case FamilyKind::PowerLog: {
        if (u == 0.0 && p_ < 2.0)
          throw singularity_error("g_prime: power-log with p < 2 is singular at 0");
        if (u == 0.0) return 0.0;
        const double L = std::log1p(u);
        const double ou = 1.0 + u;
        return p_ * (p_ - 1.0) * std::pow(u, p_ - 2.0) * L +
               2.0 * p_ * std::pow(u, p_ - 1.0) / ou - std::pow(u, p_) / (ou * ou);
      }
    }
    return 0.0;
  }

  // conjugate sup_{t>0} (a t - G(t)); closed form for the power family,
  // golden-section maximization over [0, t_max] with g(t_max) >= a otherwise
  double G_star(double a) const {
    detail::require_finite(a, "G_star");
    if (a < 0.0) throw std::domain_error("G_star: need a >= 0");
    if (a == 0.0) return 0.0;
    if (kind_ == FamilyKind::PowerLaw) {
      const double pc = p_ / (p_ - 1.0);
      return std::pow(a, pc) / pc;
    }
    const double t_hi = upper_bracket(a);
    // golden section on the concave map t -> a t - G(t)
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double lo = 0.0, hi = t_hi;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = a * x1 - G(x1), f2 = a * x2 - G(x2);
    for (int it = 0; it < 220 && (hi - lo) > 1e-15 * (1.0 + hi); ++it) {
      if (f1 < f2) {
        lo = x1; x1 = x2; f1 = f2;
        x2 = lo + gr * (hi - lo); f2 = a * x2 - G(x2);
      } else {
        hi = x2; x2 = x1; f2 = f1;
        x1 = hi - gr * (hi - lo); f1 = a * x1 - G(x1);
      }
    }
    return std::max(0.0, std::max(f1, f2));
  }

  // (G*)' = g^{-1}
  double g_star(double a) const {
    detail::require_finite(a, "g_star");
    if (a < 0.0) throw std::domain_error("g_star: need a >= 0");
    if (a == 0.0) return 0.0;
    if (kind_ == FamilyKind::PowerLaw) return std::pow(a, 1.0 / (p_ - 1.0));
    double hi = upper_bracket(a), lo = 0.0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (g(mid) < a ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  // log G(e^x) and log g(e^x); safe for exponents far beyond double range
  double log_G(double x) const {
    switch (kind_) {
      case FamilyKind::PowerLaw:
        return p_ * x - std::log(p_);
      case FamilyKind::SumOfPowers:
        return detail::log_add_exp(a_ * x, b_ * x);
      case FamilyKind::PowerLog:
        return p_ * x + std::log(detail::log1p_exp(x));
    }
    return 0.0;
  }

  double log_g(double x) const {
    switch (kind_) {
      case FamilyKind::PowerLaw:
        return (p_ - 1.0) * x;
      case FamilyKind::SumOfPowers:
        return detail::log_add_exp(std::log(a_) + (a_ - 1.0) * x,
                                   std::log(b_) + (b_ - 1.0) * x);
      case FamilyKind::PowerLog:
        return (p_ - 1.0) * x +
               std::log(p_ * detail::log1p_exp(x) + detail::sigmoid(x));
    }
    return 0.0;
  }

  double log_g_prime(double x) const {
    switch (kind_) {
      case FamilyKind::PowerLaw:
        return std::log(p_ - 1.0) + (p_ - 2.0) * x;
      case FamilyKind::SumOfPowers:
        return detail::log_add_exp(std::log(a_ * (a_ - 1.0)) + (a_ - 2.0) * x,
                                   std::log(b_ * (b_ - 1.0)) + (b_ - 2.0) * x);
      case FamilyKind::PowerLog: {
        const double L = detail::log1p_exp(x);
        const double sig = detail::sigmoid(x);
        return (p_ - 2.0) * x +
               std::log(p_ * (p_ - 1.0) * L + sig * (2.0 * p_ - sig));
      }
    }
    return 0.0;
  }

  // t g(t)/G(t) at t = e^x, exact up to rounding for any magnitude
  double elasticity(double x) const { return std::exp(x + log_g(x) - log_G(x)); }

  // t g'(t)/g(t) at t = e^x
  double derivative_elasticity(double x) const {
    switch (kind_) {
      case FamilyKind::PowerLaw:
        return p_ - 1.0;
      case FamilyKind::SumOfPowers:
      case FamilyKind::PowerLog:
        return std::exp(x + log_g_prime(x) - log_g(x));
    }
    return 0.0;
  }

  std::string spec_string() const {
    char buf[64];
    switch (kind_) {
      case FamilyKind::PowerLaw:
        std::snprintf(buf, sizeof buf, "power:p=%.17g", p_);
        break;
      case FamilyKind::SumOfPowers:
        std::snprintf(buf, sizeof buf, "sumpowers:a=%.17g,b=%.17g", a_, b_);
        break;
      case FamilyKind::PowerLog:
        std::snprintf(buf, sizeof buf, "powerlog:p=%.17g", p_);
        break;
    }
    return buf;
  }

 private:
  void finish() { beta_ = std::max(1.0, p_plus_ / p_minus_); }

  // smallest power-of-two t with g(t) >= a
  double upper_bracket(double a) const {
    double t = 1.0;
    for (int it = 0; it < 4000; ++it) {
      if (g(t) >= a) return t;
      t *= 2.0;
      if (!std::isfinite(t)) break;
    }
    throw numeric_error("conjugate bracket: g(t) never reached " + std::to_string(a));
  }

  FamilyKind kind_ = FamilyKind::PowerLaw;
  double p_ = 2.0, a_ = 0.0, b_ = 0.0;
  double p_minus_ = 2.0, p_plus_ = 2.0, beta_ = 1.0;
};

inline double eval_G(const OrliczFamily& f, double t) { return f.G(t); }
inline double eval_g(const OrliczFamily& f, double t) { return f.g(t); }
inline double eval_g_prime(const OrliczFamily& f, double t) { return f.g_prime(t); }
inline double eval_G_star(const OrliczFamily& f, double a) { return f.G_star(a); }

// "power:p=8", "sumpowers:a=4,b=6", "powerlog:p=5"
inline OrliczFamily parse_family(const std::string& spec) {
  auto bad = [&]() -> OrliczFamily {
    throw std::invalid_argument("parse_family: cannot parse '" + spec + "'");
  };
  const auto colon = spec.find(':');
  if (colon == std::string::npos) return bad();
  const std::string head = spec.substr(0, colon);
  const std::string args = spec.substr(colon + 1);
  auto grab = [&](const char* key) -> double {
    const std::string pat = std::string(key) + "=";
    auto pos = args.find(pat);
    if (pos != 0 && (pos == std::string::npos || args[pos - 1] != ','))
      throw std::invalid_argument("parse_family: missing '" + pat + "' in '" + spec + "'");
    size_t end = 0;
    const std::string rest = args.substr(pos + pat.size());
    double v = 0.0;
    try {
      v = std::stod(rest, &end);
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_family: bad number in '" + spec + "'");
    }
    if (end == 0 || (end < rest.size() && rest[end] != ','))
      throw std::invalid_argument("parse_family: trailing junk in '" + spec + "'");
    return v;
  };
  if (head == "power") return OrliczFamily::power_law(grab("p"));
  if (head == "sumpow" || head == "sumpowers")
    return OrliczFamily::sum_of_powers(grab("a"), grab("b"));
  if (head == "powerlog") return OrliczFamily::power_log(grab("p"));
  return bad();
}

// ---------------------------------------------------------------------------
// growth certification

struct InequalityRecord {
  std::string name;
  double worst_slack = 0.0;  // most negative margin seen; >= -tol passes
  bool pass = true;
};

struct CertReport {
  double p_minus = 0.0, p_plus = 0.0, beta = 1.0;
  std::vector<InequalityRecord> checks;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const InequalityRecord* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

inline std::vector<double> log_uniform_samples(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw std::invalid_argument("log_uniform_samples: bad range");
  std::vector<double> out(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i)
    out[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
  return out;
}

// Samples must span [1e-6, 1e6]. Single-variable inequalities run on every
// sample; two-variable envelopes run on a 100x100 log-uniform subgrid. All
// ratio comparisons are done on log differences, normalized by the exponent
// scale, so the tolerance is meaningful uniformly in p.
inline CertReport certify_growth(const OrliczFamily& fam, const std::vector<double>& samples,
                                 double rel_tol = 1e-9) {
  if (samples.empty()) throw std::invalid_argument("certify_growth: empty samples");
  double smin = samples.front(), smax = samples.front();
  for (double t : samples) {
    if (!(t > 0.0)) throw std::invalid_argument("certify_growth: samples must be positive");
    smin = std::min(smin, t);
    smax = std::max(smax, t);
  }
  if (smin > 1e-6 * (1.0 + 1e-12) || smax < 1e6 * (1.0 - 1e-12))
    throw std::invalid_argument("certify_growth: samples must span [1e-6, 1e6]");

  CertReport rep;
  const double pm = fam.p_minus(), pp = fam.p_plus(), beta = fam.beta();
  rep.p_minus = pm;
  rep.p_plus = pp;
  rep.beta = beta;

  auto add = [&](const std::string& name, double worst, double tol) {
    rep.checks.push_back({name, worst, worst >= -tol});
  };
  auto mins = [](double& acc, double v) { acc = std::min(acc, v); };

  const double scale = std::max(1.0, pp);

  // elasticity range: p- <= t g/G <= p+
  {
    double worst = 1e300;
    for (double t : samples) {
      const double r = fam.elasticity(std::log(t));
      mins(worst, std::min(r - pm, pp - r) / scale);
    }
    add("elasticity-range", worst, rel_tol);
  }

  // derivative elasticity: t g'/g <= p+ - 1
  {
    double worst = 1e300;
    for (double t : samples) {
      const double r = fam.derivative_elasticity(std::log(t));
      mins(worst, (pp - 1.0 - r) / scale);
    }
    add("derivative-elasticity", worst, rel_tol);
  }

  // power bounds on the G(1)-normalized function, both sides of t = 1
  {
    const double lG1 = fam.log_G(0.0);
    double wg_hi = 1e300, wg_lo = 1e300, wd_hi = 1e300, wd_lo = 1e300;
    for (double t : samples) {
      const double x = std::log(t);
      if (std::fabs(x) < 1e-12) continue;
      const double lG = fam.log_G(x) - lG1;
      const double lg = fam.log_g(x) - lG1;
      const double den = std::max(1.0, pp * std::fabs(x));
      if (x > 0.0) {
        mins(wg_hi, std::min(lG - pm * x, pp * x - lG) / den);
        mins(wd_hi, std::min(lg - (std::log(pm) + (pm - 1.0) * x),
                             (std::log(pp) + (pp - 1.0) * x) - lg) / den);
      } else {
        mins(wg_lo, std::min(lG - pp * x, pm * x - lG) / den);
        mins(wd_lo, std::min(lg - (std::log(pm) + (pp - 1.0) * x),
                             (std::log(pp) + (pm - 1.0) * x) - lg) / den);
      }
    }
    add("G-power-bounds-large-t", wg_hi, rel_tol);
    add("G-power-bounds-small-t", wg_lo, rel_tol);
    add("g-power-bounds-large-t", wd_hi, rel_tol);
    add("g-power-bounds-small-t", wd_lo, rel_tol);
  }

  const auto agrid = log_uniform_samples(1e-3, 1e3, 100);
  const auto tgrid_unit = log_uniform_samples(1e-3, 1.0 - 1e-9, 100);

  // scaling envelope of G: G(a) min{t^p-, t^p+} <= G(at) <= G(a) max{...}
  {
    double worst = 1e300;
    for (double a : agrid) {
      const double la = std::log(a), lGa = fam.log_G(la);
      for (double t : agrid) {
        const double lt = std::log(t);
        const double d = fam.log_G(la + lt) - lGa;
        const double lo = std::min(pm * lt, pp * lt), hi = std::max(pm * lt, pp * lt);
        mins(worst, std::min(d - lo, hi - d) / std::max(1.0, pp * std::fabs(lt)));
      }
    }
    add("scaling-envelope-G", worst, rel_tol);
  }

  // scaling envelope of g on 0 < t < 1 with the beta factor
  {
    const double lb = std::log(beta);
    double worst = 1e300;
    for (double a : agrid) {
      const double la = std::log(a), lga = fam.log_g(la);
      for (double t : tgrid_unit) {
        const double lt = std::log(t);
        const double v = fam.log_g(la + lt);
        mins(worst, std::min(v - (lga - lb + (pp - 1.0) * lt),
                             (lga + lb + (pm - 1.0) * lt) - v) /
                        std::max(1.0, pp * std::fabs(lt)));
      }
    }
    add("scaling-envelope-g", worst, rel_tol);
  }

  // derivative scaling: g'(ct) <= (p+ - 1) beta (g(c)/c) t^{p- - 2}
  {
    const double lead = std::log((pp - 1.0) * beta);
    double worst = 1e300;
    for (double c : agrid) {
      const double lc = std::log(c), lgc = fam.log_g(lc);
      for (double t : tgrid_unit) {
        const double lt = std::log(t);
        const double v = fam.log_g_prime(lc + lt);
        mins(worst, (lead + lgc - lc + (pm - 2.0) * lt - v) /
                        std::max(1.0, pp * std::fabs(lt)));
      }
    }
    add("derivative-scaling-bound", worst, rel_tol);
  }

  // Young's inequality a t <= G(t) + G*(a)
  {
    double worst = 1e300;
    for (double a : agrid) {
      const double Gs = fam.G_star(a);
      for (double t : agrid) {
        const double lhs = a * t, rhs = fam.G(t) + Gs;
        mins(worst, (rhs - lhs) / std::max({1.0, lhs, rhs}));
      }
    }
    add("young-inequality", worst, rel_tol);
  }

  // equality case G*(g(t)) = t g(t) - G(t); conjugate is numeric for the
  // non-power families, so this check carries its own tolerance
  {
    double worst = 1e300;
    for (double t : agrid) {
      const double gt = fam.g(t);
      const double want = t * gt - fam.G(t);
      const double got = fam.G_star(gt);
      mins(worst, -std::fabs(got - want) / std::max(1.0, std::fabs(want)));
    }
    add("young-equality-at-g", worst, 1e-8);
  }

  // dual elasticity: (p+)' <= a g*(a)/G*(a) <= (p-)'
  {
    const double qlo = pp / (pp - 1.0), qhi = pm / (pm - 1.0);
    double worst = 1e300;
    for (double t : agrid) {
      const double a = fam.g(t);
      const double r = a * fam.g_star(a) / fam.G_star(a);
      mins(worst, std::min(r - qlo, qhi - r) / std::max(1.0, qhi));
    }
    add("dual-elasticity-range", worst, rel_tol);
  }

  // doubling: G(2t) <= 2^{p+} G(t)
  {
    const double l2 = std::log(2.0);
    double worst = 1e300;
    for (double t : samples) {
      const double x = std::log(t);
      mins(worst, (pp * l2 - (fam.log_G(x + l2) - fam.log_G(x))) / std::max(1.0, pp));
    }
    add("doubling", worst, rel_tol);
  }

  return rep;
}

}  // namespace fgl
