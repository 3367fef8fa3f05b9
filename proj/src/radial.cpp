// Radial ground state of -w'' - (d-1)/r w' + w = w^(p-1) by shooting on w(0).
//
// Too large a w(0) makes the solution cross zero; too small a value makes it
// turn back up before decaying. Bisection between the two behaviours
// converges to the positive decaying solution, whose p-th power integral
// gives the optimal constant of the Gagliardo-Nirenberg quotient.

#include <array>
#include <cmath>
#include <numbers>

#include <boost/numeric/odeint.hpp>

#include "klt/errors.hpp"
#include "klt/line_solver.hpp"

namespace klt {
namespace {

using State = std::array<double, 3>;  // w, w', integral of r^(d-1) w^p

enum class Fate { crosses_zero, turns_up };

struct Shot {
  Fate fate;
  double r_end;
  double integral;  // accumulated up to the last monotone point
  std::vector<double> r;
  std::vector<double> w;
};

Shot shoot(int d, double p, double w0, double r_max, bool record) {
  namespace odeint = boost::numeric::odeint;
  const auto rhs = [d, p](const State& x, State& dx, double r) {
    const double w = x[0];
    const double aw = std::fabs(w);
    const double wp1 = aw == 0.0 ? 0.0 : std::pow(aw, p - 2.0) * w;
    dx[0] = x[1];
    dx[1] = -(d - 1.0) / r * x[1] + w - wp1;
    dx[2] = std::pow(r, d - 1.0) * std::pow(aw, p);
  };

  // series start away from the r = 0 singularity
  const double r0 = 1e-6;
  const double c = (w0 - std::pow(w0, p - 1.0)) / (2.0 * d);
  State x{w0 + c * r0 * r0, 2.0 * c * r0, std::pow(r0, d) / d * std::pow(w0, p)};

  auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<State>());
  double r = r0;
  double dr = 1e-4;
  Shot shot{Fate::turns_up, r0, x[2], {}, {}};
  if (record) {
    shot.r.push_back(0.0);
    shot.w.push_back(w0);
  }
  while (r < r_max) {
    State prev = x;
    const double r_prev = r;
    dr = std::min(dr, 0.05);
    if (stepper.try_step(rhs, x, r, dr) != odeint::success) continue;
    if (x[0] < 0.0) {
      shot.fate = Fate::crosses_zero;
      shot.r_end = r;
      return shot;
    }
    if (x[1] > 0.0 && r > 1e-3) {
      shot.fate = Fate::turns_up;
      shot.r_end = r_prev;
      shot.integral = prev[2];
      return shot;
    }
    shot.integral = x[2];
    shot.r_end = r;
    if (record) {
      shot.r.push_back(r);
      shot.w.push_back(x[0]);
    }
  }
  return shot;
}

double sphere_area(int d) {
  // |S^{d-1}| = 2 pi^(d/2) / Gamma(d/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

void check_range(int d, double p) {
  if (d < 1) throw ValidationError("radial solver requires d >= 1");
  if (!(p > 2.0)) throw ValidationError("radial solver requires p > 2");
  if (d >= 3 && !(p < 2.0 * d / (d - 2.0))) throw ValidationError("radial solver requires p < 2d/(d-2)");
}

}  // namespace

RadialProfile radial_ground_state(int d, double p) {
  check_range(d, p);
  const double r_max = 80.0;
  // w(0) exceeds 1 (w^(p-2) > 1 at the maximum); find an overshooting value
  double lo = 1.0 + 1e-9;
  double hi = 2.0;
  int grow = 0;
  while (shoot(d, p, hi, r_max, false).fate != Fate::crosses_zero) {
    lo = hi;
    hi *= 2.0;
    if (++grow > 60) throw ValidationError("shooting could not bracket the ground state");
  }
  if (shoot(d, p, lo, r_max, false).fate != Fate::turns_up)
    throw ValidationError("shooting could not bracket the ground state");
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (shoot(d, p, mid, r_max, false).fate == Fate::crosses_zero)
      hi = mid;
    else
      lo = mid;
  }
  Shot best = shoot(d, p, lo, r_max, true);
  RadialProfile profile;
  profile.w0 = lo;
  profile.r = std::move(best.r);
  profile.w = std::move(best.w);
  profile.lp_norm_p = sphere_area(d) * best.integral;
  return profile;
}

double radial_gns_constant(int d, double p) {
  const RadialProfile profile = radial_ground_state(d, p);
  // at the ground state the quotient equals ||w||_p^(p-2)
  const double q = p / (p - 2.0);
  const double s = std::pow(profile.lp_norm_p, (p - 2.0) / p);
  return std::pow(s, -q);
}

}  // namespace klt
