#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bfev/copulas.hpp"
#include "bfev/format.hpp"

namespace bfev {

namespace {

void require_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0))
    throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

PickandsFn PickandsFn::independence() { return {Form::independence, {}}; }

PickandsFn PickandsFn::comonotone() { return {Form::comonotone, {}}; }

PickandsFn PickandsFn::gumbel_mixed(double theta) {
  require_unit(theta, "gumbel-mixed theta");
  return {Form::gumbel_mixed, {{"theta", theta}}};
}

PickandsFn PickandsFn::logistic(double m) {
  if (!(m >= 1.0) || !std::isfinite(m)) throw std::invalid_argument("logistic m must be >= 1");
  return {Form::logistic, {{"m", m}}};
}

PickandsFn PickandsFn::marshall_olkin(double theta, double phi) {
  require_unit(theta, "marshall-olkin theta");
  require_unit(phi, "marshall-olkin phi");
  return {Form::marshall_olkin, {{"phi", phi}, {"theta", theta}}};
}

double PickandsFn::operator()(double t) const {
  t = std::clamp(t, 0.0, 1.0);
  const double s = 1.0 - t;
  switch (form_) {
    case Form::independence:
      return 1.0;
    case Form::comonotone:
      return std::max(t, s);
    case Form::gumbel_mixed: {
      const double th = params_.at("theta");
      return 1.0 - th * t * s;
    }
    case Form::logistic: {
      const double m = params_.at("m");
      const double hi = std::max(t, s), lo = std::min(t, s);
      if (hi == 0.0) return 0.0;
      return hi * std::pow(1.0 + std::pow(lo / hi, m), 1.0 / m);
    }
    case Form::marshall_olkin:
      return 1.0 - std::min(params_.at("theta") * t, params_.at("phi") * s);
    case Form::spectral: {
      double a = 0.0;
      for (const auto& at : rho_.atoms()) a += at.mass * std::max(t * at.at.x, s * at.at.y);
      return a;
    }
  }
  return 1.0;
}

bool PickandsFn::smooth() const {
  return form_ == Form::independence || form_ == Form::gumbel_mixed || form_ == Form::logistic;
}

std::string PickandsFn::spec() const {
  std::string name;
  switch (form_) {
    case Form::independence: return "independence";
    case Form::comonotone: return "comonotone";
    case Form::gumbel_mixed: name = "gumbel-mixed"; break;
    case Form::logistic: name = "logistic"; break;
    case Form::marshall_olkin: name = "marshall-olkin"; break;
    case Form::spectral: return "pickands-spectral";
  }
  std::string out = name + ":";
  bool first = true;
  for (const auto& [k, v] : params_) {
    if (!first) out += ",";
    out += k + "=" + format_double(v);
    first = false;
  }
  return out;
}

PickandsFn pickands_from_measure(const DiscreteMeasure& rho, double tol) {
  double mx = 0.0, my = 0.0;
  for (const auto& a : rho.atoms()) {
    mx += a.at.x * a.mass;
    my += a.at.y * a.mass;
  }
  for (const auto& a : rho.atoms()) {
    if (a.at.x < -tol || a.at.y < -tol || std::abs(a.at.x + a.at.y - 1.0) > tol)
      throw PickandsConstraintError("spectral measure: atom (" + format_double(a.at.x) + ", " +
                                        format_double(a.at.y) + ") is off the simplex",
                                    mx, my);
  }
  if (std::abs(mx - 1.0) > tol || std::abs(my - 1.0) > tol)
    throw PickandsConstraintError("spectral measure: mean constraints fail (mean x = " +
                                      format_double(mx) + ", mean y = " + format_double(my) + ")",
                                  mx, my);
  PickandsFn A(PickandsFn::Form::spectral, {});
  A.rho_ = rho;
  return A;
}

double f_from_pickands(const PickandsFn& A, double u, double v) {
  const double s = (1.0 - u) + (1.0 - v);
  if (s <= 0.0) return 1.0;
  // -1 + u + v + s A(t) rewritten as 1 - s (1 - A(t)).
  return 1.0 - s * (1.0 - A((1.0 - u) / s));
}

}  // namespace bfev
