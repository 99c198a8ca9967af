// Copyright 2026 The crackchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crackchain/potential.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "crackchain/errors.h"

namespace crackchain {
namespace {

double LjValue(double r) {
  const double r6 = 1.0 / (r * r * r * r * r * r);
  return r6 * r6 - r6;
}

double LjFirst(double r) {
  const double r6 = 1.0 / (r * r * r * r * r * r);
  return (-12.0 * r6 * r6 + 6.0 * r6) / r;
}

double LjSecond(double r) {
  const double r6 = 1.0 / (r * r * r * r * r * r);
  return (156.0 * r6 * r6 - 42.0 * r6) / (r * r);
}

// Quintic switch S(x) = 1 - (10 x^3 - 15 x^4 + 6 x^5) on x in [0, 1] and its
// derivatives with respect to x.
void Switch(double x, double* s, double* ds, double* d2s) {
  if (x <= 0.0) {
    *s = 1.0;
    *ds = 0.0;
    *d2s = 0.0;
    return;
  }
  if (x >= 1.0) {
    *s = 0.0;
    *ds = 0.0;
    *d2s = 0.0;
    return;
  }
  const double x2 = x * x;
  *s = 1.0 - x2 * x * (10.0 - 15.0 * x + 6.0 * x2);
  *ds = -30.0 * x2 * (1.0 - 2.0 * x + x2);
  *d2s = -60.0 * x * (1.0 - 3.0 * x + 2.0 * x2);
}

// Tail bound of sum_{n > n_t} (n z)^-s by the integral from n_t.
double PowerTail(double z, double s, int n_t) {
  return std::pow(z, -s) * std::pow(static_cast<double>(n_t), 1.0 - s) /
         (s - 1.0);
}

int TruncationIndex(double z, double s, double tolerance) {
  int n = 2;
  while (PowerTail(z, s, n) > tolerance && n < (1 << 24)) n *= 2;
  return n;
}

constexpr double kTailTolerance = 1e-12;

}  // namespace

std::string PotentialKindName(PotentialKind kind) {
  switch (kind) {
    case PotentialKind::kLennardJones:
      return "lj";
    case PotentialKind::kSpline:
      return "spline";
    case PotentialKind::kHardRod:
      return "hard-rod";
    case PotentialKind::kTabulated:
      return "tabulated";
  }
  return "unknown";
}

PairPotential PairPotential::LennardJones(double r_hc, double z_min) {
  const double z_max = std::pow(2.0, 1.0 / 6.0);
  if (!(r_hc > 0.0) || !(r_hc < z_min) || !(z_min < z_max)) {
    throw InvalidInput("LennardJones: need 0 < r_hc < z_min < 2^(1/6)");
  }
  PairPotential p;
  p.kind_ = PotentialKind::kLennardJones;
  p.r_hc_ = r_hc;
  p.z_min_ = z_min;
  p.z_max_ = z_max;
  return p;
}

PairPotential PairPotential::Spline(double r_hc, double z_min, double r_on,
                                    double r_cut) {
  PairPotential p = LennardJones(r_hc, z_min);
  if (!(r_on > p.z_max_) || !(r_cut > r_on)) {
    throw InvalidInput("Spline: need 2^(1/6) < r_on < r_cut");
  }
  p.kind_ = PotentialKind::kSpline;
  p.r_on_ = r_on;
  p.r_cut_ = r_cut;
  p.support_radius_ = r_cut;
  return p;
}

PairPotential PairPotential::HardRod(double diameter) {
  if (!(diameter > 0.0)) throw InvalidInput("HardRod: diameter must be > 0");
  PairPotential p;
  p.kind_ = PotentialKind::kHardRod;
  p.r_hc_ = diameter;
  // The hard rod has no well. These nominal values only seed optimizers and
  // proposal scales.
  p.z_min_ = diameter;
  p.z_max_ = 1.5 * diameter;
  p.alpha1_ = 0.0;
  p.alpha2_ = 0.0;
  p.support_radius_ = diameter;
  return p;
}

PairPotential PairPotential::Tabulated(std::vector<double> r,
                                       std::vector<double> v,
                                       std::optional<double> r_hc,
                                       std::optional<double> z_min, double s) {
  if (r.size() != v.size() || r.size() < 2) {
    throw InvalidInput("Tabulated: need at least two (r, v) pairs");
  }
  for (size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !std::isfinite(v[i])) {
      throw InvalidInput("Tabulated: r must be positive and v finite");
    }
    if (i > 0 && !(r[i] > r[i - 1])) {
      throw InvalidInput("Tabulated: r must be strictly increasing");
    }
  }
  if (!(s > 2.0)) throw InvalidInput("Tabulated: decay exponent must be > 2");
  PairPotential p;
  p.kind_ = PotentialKind::kTabulated;
  p.s_ = s;
  p.r_hc_ = r_hc.value_or(r.front());
  if (!(p.r_hc_ > 0.0) || p.r_hc_ > r.front()) {
    throw InvalidInput("Tabulated: r_hc must lie in (0, first node]");
  }
  const size_t imin = std::min_element(v.begin(), v.end()) - v.begin();
  p.z_max_ = r[imin];
  p.z_min_ = z_min.value_or(0.5 * (p.r_hc_ + p.z_max_));
  if (v.back() == 0.0) p.support_radius_ = r.back();
  auto table = std::make_shared<Table>();
  table->v = v;
  table->log_r.resize(r.size());
  for (size_t i = 0; i < r.size(); ++i) table->log_r[i] = std::log(r[i]);
  p.table_ = table;
  // Envelope constants read off the data, so the growth bounds hold on the
  // tabulated range by construction.
  double a1 = 0.0;
  double a2 = 0.0;
  for (size_t i = 0; i < r.size(); ++i) {
    if (v[i] < 0.0) a1 = std::max(a1, -v[i] * std::pow(r[i], s));
    if (r[i] > p.r_hc_) {
      const double vpp = p.SecondDerivative(r[i]);
      if (vpp < 0.0) a2 = std::max(a2, -vpp * std::pow(r[i], s + 2.0));
    }
  }
  p.alpha1_ = a1;
  p.alpha2_ = a2;
  return p;
}

PairPotential PairPotential::FromFile(const std::string& path,
                                      std::optional<double> r_hc,
                                      std::optional<double> z_min, double s) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open potential table: " + path);
  std::vector<double> r;
  std::vector<double> v;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    double a;
    double b;
    if (!(ss >> a)) continue;
    if (!(ss >> b)) {
      throw InvalidInput(path + ":" + std::to_string(line_no) +
                         ": expected two columns");
    }
    r.push_back(a);
    v.push_back(b);
  }
  return Tabulated(std::move(r), std::move(v), r_hc, z_min, s);
}

double PairPotential::EvaluateTable(double r, int derivative) const {
  const Table& t = *table_;
  const double x = std::log(r);
  const size_t n = t.log_r.size();
  if (x >= t.log_r[n - 1]) {
    const double v_last = t.v[n - 1];
    if (v_last == 0.0) return 0.0;
    const double val = v_last * std::pow(std::exp(t.log_r[n - 1]) / r, s_);
    if (derivative == 0) return val;
    if (derivative == 1) return -s_ * val / r;
    return s_ * (s_ + 1.0) * val / (r * r);
  }
  size_t i = std::upper_bound(t.log_r.begin(), t.log_r.end(), x) -
             t.log_r.begin();
  i = std::clamp<size_t>(i, 1, n - 1);
  const double slope =
      (t.v[i] - t.v[i - 1]) / (t.log_r[i] - t.log_r[i - 1]);
  if (derivative == 0) return t.v[i - 1] + slope * (x - t.log_r[i - 1]);
  if (derivative == 1) return slope / r;
  return -slope / (r * r);
}

double PairPotential::Evaluate(double r) const {
  if (!(r > 0.0)) throw InvalidInput("potential evaluated at r <= 0");
  if (r <= r_hc_) return kInfinity;
  switch (kind_) {
    case PotentialKind::kLennardJones:
      return LjValue(r);
    case PotentialKind::kSpline: {
      if (r >= r_cut_) return 0.0;
      double s, ds, d2s;
      Switch((r - r_on_) / (r_cut_ - r_on_), &s, &ds, &d2s);
      return LjValue(r) * s;
    }
    case PotentialKind::kHardRod:
      return 0.0;
    case PotentialKind::kTabulated:
      return EvaluateTable(r, 0);
  }
  return 0.0;
}

double PairPotential::Derivative(double r) const {
  if (!(r > r_hc_)) throw InvalidInput("derivative requested inside the core");
  switch (kind_) {
    case PotentialKind::kLennardJones:
      return LjFirst(r);
    case PotentialKind::kSpline: {
      if (r >= r_cut_) return 0.0;
      const double width = r_cut_ - r_on_;
      double s, ds, d2s;
      Switch((r - r_on_) / width, &s, &ds, &d2s);
      return LjFirst(r) * s + LjValue(r) * ds / width;
    }
    case PotentialKind::kHardRod:
      return 0.0;
    case PotentialKind::kTabulated:
      return EvaluateTable(r, 1);
  }
  return 0.0;
}

double PairPotential::SecondDerivative(double r) const {
  if (!(r > r_hc_)) throw InvalidInput("derivative requested inside the core");
  switch (kind_) {
    case PotentialKind::kLennardJones:
      return LjSecond(r);
    case PotentialKind::kSpline: {
      if (r >= r_cut_) return 0.0;
      const double width = r_cut_ - r_on_;
      double s, ds, d2s;
      Switch((r - r_on_) / width, &s, &ds, &d2s);
      return LjSecond(r) * s + 2.0 * LjFirst(r) * ds / width +
             LjValue(r) * d2s / (width * width);
    }
    case PotentialKind::kHardRod:
      return 0.0;
    case PotentialKind::kTabulated:
      return EvaluateTable(r, 2);
  }
  return 0.0;
}

std::string PairPotential::Describe() const {
  std::ostringstream os;
  os << PotentialKindName(kind_) << "(r_hc=" << r_hc_ << ", z_min=" << z_min_
     << ", z_max=" << z_max_ << ", s=" << s_ << ", alpha1=" << alpha1_
     << ", alpha2=" << alpha2_;
  if (kind_ == PotentialKind::kSpline) {
    os << ", r_on=" << r_on_ << ", r_cut=" << r_cut_;
  }
  if (support_radius_) os << ", support=" << *support_radius_;
  os << ")";
  return os.str();
}

double CauchyBorn(const PairPotential& v, int m, double r) {
  if (m < 1) throw InvalidInput("CauchyBorn: m must be >= 1");
  if (r <= v.r_hc()) return kInfinity;
  double w = 0.0;
  for (int k = 1; k <= m; ++k) w += v(k * r);
  return w;
}

double CauchyBornDerivative(const PairPotential& v, int m, double r) {
  double w = 0.0;
  for (int k = 1; k <= m; ++k) w += k * v.Derivative(k * r);
  return w;
}

double CauchyBornSecondDerivative(const PairPotential& v, int m, double r) {
  double w = 0.0;
  for (int k = 1; k <= m; ++k) w += k * k * v.SecondDerivative(k * r);
  return w;
}

CauchyBornResult FindLatticeConstant(const PairPotential& v, int m,
                                     int grid_points) {
  if (grid_points < 2) throw InvalidInput("FindLatticeConstant: grid < 2");
  const double lo_end = v.z_min();
  const double hi_end = v.z_max();
  const double h = (hi_end - lo_end) / grid_points;
  int best = 0;
  double best_w = kInfinity;
  for (int i = 0; i <= grid_points; ++i) {
    const double r = (i == grid_points) ? hi_end : lo_end + i * h;
    const double w = CauchyBorn(v, m, r);
    if (w < best_w) {
      best_w = w;
      best = i;
    }
  }
  double lo = lo_end + std::max(0, best - 1) * h;
  double hi = (best + 1 >= grid_points) ? hi_end : lo_end + (best + 1) * h;
  const double d_lo = CauchyBornDerivative(v, m, lo);
  const double d_hi = CauchyBornDerivative(v, m, hi);
  // A derivative within rounding of zero at the right end counts as a root;
  // this is the m = 1 case where the minimizer is z_max itself.
  const double slack = 1e-12 * (1.0 + std::abs(best_w));
  if (!(d_lo < 0.0) || !(d_hi > -slack)) {
    throw ValidationError(
        "FindLatticeConstant: W' has no sign change in (z_min, z_max]");
  }
  for (int iter = 0; iter < 200 && hi - lo > 0.0; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (CauchyBornDerivative(v, m, mid) < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  CauchyBornResult result;
  result.m = m;
  result.a = (CauchyBorn(v, m, lo) < CauchyBorn(v, m, hi)) ? lo : hi;
  result.e0 = CauchyBorn(v, m, result.a);
  if (!(result.e0 < 0.0)) {
    throw ValidationError("FindLatticeConstant: W(a) is not negative");
  }
  return result;
}

bool ValidationReport::AllPassed() const {
  return std::all_of(items.begin(), items.end(),
                     [](const ValidationItem& it) { return it.passed; });
}

const ValidationItem& ValidationReport::Item(const std::string& id) const {
  for (const auto& it : items) {
    if (it.id == id) return it;
  }
  throw InvalidInput("no validation item " + id);
}

double GrowthInequalityValue(const PairPotential& v, double z) {
  const double s = v.s();
  const int n_t = TruncationIndex(z, s, kTailTolerance);
  double sum = 0.0;
  for (int n = n_t; n >= 2; --n) sum += std::pow(n * z, -s);
  const double tail = PowerTail(z, s, n_t);
  return v(z) + v(v.z_max()) - 2.0 * v.alpha1() * (sum + tail);
}

double CurvatureInequalityValue(const PairPotential& v) {
  const double s = v.s();
  const double zm = v.z_min();
  // |n^2 v''(n z_min)| <= alpha2 z_min^{-s-2} n^{-s}, so the tail matches the
  // power sum with exponent s at z = 1 scaled by alpha2 z_min^{-s-2}.
  const double scale = v.alpha2() * std::pow(zm, -s - 2.0);
  int n_t = 2;
  while (scale * PowerTail(1.0, s, n_t) > kTailTolerance && n_t < (1 << 24)) {
    n_t *= 2;
  }
  double sum = 0.0;
  for (int n = n_t; n >= 2; --n) {
    sum += static_cast<double>(n) * n * v.SecondDerivative(n * zm);
  }
  return v.SecondDerivative(v.z_max()) + sum - scale * PowerTail(1.0, s, n_t);
}

ValidationReport ValidateAssumptions(const PairPotential& v, int m,
                                     int grid_points) {
  if (grid_points < 2) throw InvalidInput("ValidateAssumptions: grid < 2");
  ValidationReport report;
  report.relaxed_only = v.relaxed_only();
  const double r_hc = v.r_hc();
  const double z_min = v.z_min();
  const double z_max = v.z_max();
  const double r_end = v.support_radius()
                           ? std::max(*v.support_radius() * 1.25, 2.5 * z_max)
                           : 5.0 * z_max;
  std::vector<double> grid(grid_points);
  for (int k = 0; k < grid_points; ++k) {
    grid[k] = r_hc + (r_end - r_hc) * (k + 1.0) / grid_points;
  }
  auto near_equal_tol = [](double x) { return 1e-13 * (1.0 + std::abs(x)); };

  {
    ValidationItem it{"structure", "r_hc < z_min < z_max < 2 z_min"};
    it.passed = r_hc < z_min && z_min < z_max && z_max < 2.0 * z_min;
    it.margin = std::min({z_min - r_hc, z_max - z_min, 2.0 * z_min - z_max});
    it.detail = it.passed ? "ordering holds" : "ordering violated";
    report.items.push_back(it);
  }
  {
    ValidationItem it{"i", "shape: unique negative minimum at z_max"};
    it.passed = true;
    const double vmin = v(z_max);
    if (!(vmin < 0.0)) {
      it.passed = false;
      it.first_violation = z_max;
      it.detail = "no negative minimum; relaxed mode only";
    }
    for (int k = 0; k + 1 < grid_points && it.passed; ++k) {
      const double r1 = grid[k];
      const double r2 = grid[k + 1];
      const double v1 = v(r1);
      const double v2 = v(r2);
      bool ok = true;
      if (r2 <= z_max) {
        ok = v1 >= v2 - near_equal_tol(v2);
      } else if (r1 >= z_max) {
        ok = v1 <= v2 + near_equal_tol(v2) && v2 <= near_equal_tol(0.0);
      }
      ok = ok && v1 >= vmin - near_equal_tol(vmin);
      if (!ok) {
        it.passed = false;
        it.first_violation = r1;
        it.detail = "monotonicity violated";
      }
    }
    if (it.passed) it.detail = "monotone on both sides of z_max";
    it.margin = -vmin;
    report.items.push_back(it);
  }
  {
    ValidationItem it{"ii", "growth: v >= -alpha1 z^-s and core inequality"};
    it.passed = true;
    double worst = kInfinity;
    for (double z : grid) {
      const double val = v(z) + v.alpha1() * std::pow(z, -v.s());
      if (!(val >= -near_equal_tol(0.0)) && it.passed) {
        it.passed = false;
        it.first_violation = z;
        it.detail = "envelope v >= -alpha1 z^-s violated";
      }
    }
    for (double z : grid) {
      if (z >= z_min) break;
      const double val = GrowthInequalityValue(v, z);
      worst = std::min(worst, val);
      if (!(val > 0.0) && it.passed) {
        it.passed = false;
        it.first_violation = z;
        it.detail = "core inequality not positive";
      }
    }
    it.margin = worst;
    if (it.passed) it.detail = "both growth bounds hold on the grid";
    report.items.push_back(it);
  }
  {
    ValidationItem it{"iii", "curvature shape of v''"};
    it.passed = true;
    if (v.relaxed_only()) {
      it.passed = false;
      it.detail = "not applicable to the hard rod; relaxed mode only";
    } else {
      const int n = grid_points;
      double prev = kInfinity;
      for (int k = 0; k <= n && it.passed; ++k) {
        const double z = z_min + (z_max - z_min) * k / n;
        const double d2 = v.SecondDerivative(z);
        if (d2 > prev + near_equal_tol(prev)) {
          it.passed = false;
          it.first_violation = z;
          it.detail = "v'' not decreasing on [z_min, z_max]";
        }
        prev = d2;
      }
      prev = -kInfinity;
      const double lo = 2.0 * z_min;
      for (int k = 0; k <= n && it.passed; ++k) {
        const double z = lo + (r_end - lo) * k / n;
        const double d2 = v.SecondDerivative(z);
        if (d2 < prev - near_equal_tol(prev) || d2 > near_equal_tol(0.0)) {
          it.passed = false;
          it.first_violation = z;
          it.detail = "v'' not increasing and non-positive on [2 z_min, inf)";
        }
        prev = d2;
      }
      if (it.passed) it.detail = "v'' monotone as required";
    }
    report.items.push_back(it);
  }
  {
    ValidationItem it{"iv", "curvature growth"};
    it.passed = true;
    if (v.relaxed_only()) {
      it.passed = false;
      it.detail = "not applicable to the hard rod; relaxed mode only";
    } else {
      for (double z : grid) {
        const double val =
            v.SecondDerivative(z) + v.alpha2() * std::pow(z, -v.s() - 2.0);
        if (!(val >= -near_equal_tol(0.0))) {
          it.passed = false;
          it.first_violation = z;
          it.detail = "envelope v'' >= -alpha2 z^-(s+2) violated";
          break;
        }
      }
      it.margin = CurvatureInequalityValue(v);
      if (it.passed && !(it.margin > 0.0)) {
        it.passed = false;
        it.first_violation = z_min;
        it.detail = "v''(z_max) + sum n^2 v''(n z_min) not positive";
      }
      if (it.passed) it.detail = "curvature bounds hold";
    }
    report.items.push_back(it);
  }
  {
    ValidationItem it{"v", "repulsion near the hard core"};
    const double r = r_hc * (1.0 + 1e-9);
    const double val = v(r);
    const double scale = std::abs(v(z_max));
    it.margin = val;
    if (std::isinf(val) || v.relaxed_only()) {
      it.passed = true;
      it.detail = "v is infinite at the core";
    } else {
      it.passed = val >= 1e3 * std::max(scale, 1e-300);
      it.detail = it.passed
                      ? "effective: v(r_hc+) exceeds 1e3 |v(z_max)|"
                      : "v(r_hc+) too small to act as a hard core";
      if (!it.passed) it.first_violation = r;
    }
    report.items.push_back(it);
  }
  {
    ValidationItem it{"vi", "v <= 0 on [2 r_hc, inf)"};
    it.passed = true;
    double worst = -kInfinity;
    for (int k = 0; k <= grid_points; ++k) {
      const double z = 2.0 * r_hc + (r_end - 2.0 * r_hc) * k / grid_points;
      const double val = v(z);
      worst = std::max(worst, val);
      if (val > near_equal_tol(0.0) && it.passed) {
        it.passed = false;
        it.first_violation = z;
      }
    }
    it.margin = worst;
    it.detail = it.passed ? "non-positive beyond twice the core" : "positive";
    report.items.push_back(it);
  }
  (void)m;
  return report;
}

double AcrossCrackConstant(const PairPotential& v, int m, double R) {
  if (!(R > 0.0)) throw InvalidInput("AcrossCrackConstant: R must be > 0");
  return 0.5 * m * (m + 1) * v.alpha1() / (R * R);
}

double MinTruncationRadius(double z_max, double s, double e_surf, double C) {
  if (!(e_surf > 0.0)) throw InvalidInput("MinTruncationRadius: e_surf <= 0");
  if (!(C > 0.0)) throw InvalidInput("MinTruncationRadius: C <= 0");
  if (!(s > 2.0)) throw InvalidInput("MinTruncationRadius: s <= 2");
  return std::max(z_max, std::pow(2.0 * C / e_surf, 1.0 / (s - 2.0)));
}

double MinTruncationRadius(const PairPotential& v, double e_surf, double C) {
  if (!(e_surf > 0.0)) throw InvalidInput("MinTruncationRadius: e_surf <= 0");
  if (v.support_radius()) return std::max(*v.support_radius(), v.z_max());
  return MinTruncationRadius(v.z_max(), v.s(), e_surf, C);
}

double SelfConsistentTruncationRadius(const PairPotential& v, int m,
                                      double e_surf) {
  if (!(e_surf > 0.0)) {
    throw InvalidInput("SelfConsistentTruncationRadius: e_surf <= 0");
  }
  if (v.support_radius()) return std::max(*v.support_radius(), v.z_max());
  // C(R) / R^(s-2) = m (m + 1) alpha1 / (2 R^s) < e_surf / 2.
  const double r = std::pow(m * (m + 1) * v.alpha1() / e_surf, 1.0 / v.s());
  return std::max(v.z_max(), r);
}

}  // namespace crackchain
