#include "plike/fatou.hpp"

#include <algorithm>
#include <cmath>

#include "plike/error.hpp"

namespace plike {

namespace {

constexpr int kSeriesTerms = 10;
constexpr int kDriftStreak = 5;

using Series = std::vector<Cx>;

Series mul(const Series& a, const Series& b) {
  const std::size_t n = a.size();
  Series r(n, Cx{});
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] == Cx{}) continue;
    for (std::size_t j = 0; i + j < n; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

Series inverse(const Series& a) {
  const std::size_t n = a.size();
  Series r(n, Cx{});
  r[0] = 1.0 / a[0];
  for (std::size_t k = 1; k < n; ++k) {
    Cx acc{};
    for (std::size_t j = 1; j <= k; ++j) acc += a[j] * r[k - j];
    r[k] = -acc * r[0];
  }
  return r;
}

// log(1 + s) for s with zero constant term.
Series log1p(const Series& s) {
  const std::size_t n = s.size();
  Series r(n, Cx{});
  Series power = s;
  for (std::size_t j = 1; j < n; ++j) {
    const double c = (j % 2 == 1 ? 1.0 : -1.0) / static_cast<double>(j);
    for (std::size_t i = 0; i < n; ++i) r[i] += c * power[i];
    power = mul(power, s);
  }
  return r;
}

// Coefficients b_1..b_K of the formal solution of Psi(F(u)) = Psi(u) + 1,
// where F(u) = u q(1/u) and q is given as a series in x = 1/u.
std::vector<Cx> solve_abel_series(const Series& q, Cx alpha, int terms) {
  const std::size_t n = q.size();
  Series s = q;
  s[0] -= 1.0;
  const Series log_q = log1p(s);
  const Series q_inv = inverse(q);

  // Residual of Psi(F) - Psi - 1 with all b_k = 0: (F - u) - 1 - alpha log q.
  Series r(n, Cx{});
  for (std::size_t i = 0; i + 1 < n; ++i) r[i] = s[i + 1] - alpha * log_q[i];
  r[0] -= 1.0;

  std::vector<Cx> b;
  Series power(n, Cx{});
  power[0] = 1.0;
  for (int k = 1; k <= terms && static_cast<std::size_t>(k + 1) < n; ++k) {
    power = mul(power, q_inv);
    const Cx bk = r[k + 1] / static_cast<double>(k);
    b.push_back(bk);
    // r += b_k x^k (q^-k - 1)
    for (std::size_t i = 1; i + k < n; ++i) r[i + k] += bk * power[i];
  }
  return b;
}

}  // namespace

NormalForm normal_form(const FamilySlot& slot) {
  NormalForm nf;
  switch (slot.kind()) {
    case FamilyKind::Cubic:
      nf.fixed_point = ExtPoint::finite(Cx{});
      nf.a2 = slot.param();
      nf.a3 = 1.0;
      break;
    case FamilyKind::PerOne:
      nf.fixed_point = ExtPoint::at_infinity();
      nf.a2 = -slot.param();
      nf.a3 = slot.param() * slot.param() - 1.0;
      break;
    case FamilyKind::ExtH2:
      throw Error(ErrorKind::InvalidArgument, "no normal form for the external map");
  }
  if (nf.a2 == Cx{}) {
    throw Error(ErrorKind::DegenerateParabolic, "parabolic point has multiplicity 2");
  }
  nf.alpha = 1.0 - nf.a3 / (nf.a2 * nf.a2);
  return nf;
}

Cx ParabolicChart::petal_coordinate(Cx z) const {
  if (slot.kind() == FamilyKind::PerOne) return z / slot.param();
  return -1.0 / (slot.param() * z);
}

Cx ParabolicChart::asymptotic(Cx u) const {
  const Cx x = 1.0 / u;
  Cx tail{};
  for (auto it = series.rbegin(); it != series.rend(); ++it) tail = (tail + *it) * x;
  return u - alpha * std::log(u) + tail;
}

Cx ParabolicChart::petal_map(Cx u) const {
  if (slot.kind() == FamilyKind::PerOne) return u + 1.0 + alpha / u;
  const Cx x = 1.0 / u;
  const Cx gamma = 1.0 - alpha;
  return u / (1.0 - x + gamma * x * x);
}

ParabolicChart build_chart(const FamilySlot& slot, int n_iter, double tol) {
  if (n_iter < 1 || !(tol > 0.0)) {
    throw Error(ErrorKind::InvalidArgument, "n_iter must be >= 1 and tol > 0");
  }
  const NormalForm nf = normal_form(slot);
  ParabolicChart chart;
  chart.slot = slot;
  chart.fixed_point = nf.fixed_point;
  chart.a2 = nf.a2;
  chart.a3 = nf.a3;
  chart.alpha = nf.alpha;
  chart.n_iter = n_iter;
  chart.tol = tol;
  chart.petal_threshold = std::max(10.0, 4.0 * std::abs(nf.alpha));

  Series q(kSeriesTerms + 3, Cx{});
  if (slot.kind() == FamilyKind::PerOne) {
    q[0] = 1.0;
    q[1] = 1.0;
    q[2] = nf.alpha;
    chart.anchor = 2.0 + slot.param();
  } else {
    Series den(q.size(), Cx{});
    den[0] = 1.0;
    den[1] = -1.0;
    den[2] = 1.0 - nf.alpha;
    q = inverse(den);
    chart.anchor = cubic_critical_points(slot.param()).plus;
  }
  chart.series = solve_abel_series(q, nf.alpha, kSeriesTerms);

  try {
    chart.anchor_raw = raw_fatou_coordinate(chart, chart.anchor);
  } catch (const Error& e) {
    throw Error(ErrorKind::NoConvergence,
                std::string("anchor does not converge to the parabolic point: ") + e.what());
  }
  chart.normalization = 1.0 - chart.anchor_raw;
  return chart;
}

Cx raw_fatou_coordinate(const ParabolicChart& chart, Cx z) {
  const double threshold = chart.petal_threshold;
  int n = 0;
  Cx u;
  bool entered = false;
  visit_map(chart.slot, [&](const auto& f) {
    using Map = std::decay_t<decltype(f)>;
    for (; n <= chart.n_iter; ++n) {
      if (!is_finite(z)) break;
      if (z != Cx{}) {
        u = chart.petal_coordinate(z);
        if (u.real() > threshold) {
          entered = true;
          return;
        }
      }
      if (Map::pole(z)) break;
      z = f(z);
    }
  });
  if (!entered) throw Error(ErrorKind::NotInPetal, "orbit does not enter the attracting petal");

  const double scale = static_cast<double>(chart.series.size() + 1);
  Cx prev = chart.asymptotic(u) - static_cast<double>(n);
  while (n < chart.n_iter) {
    u = chart.petal_map(u);
    ++n;
    const Cx est = chart.asymptotic(u) - static_cast<double>(n);
    if (std::abs(est - prev) * std::abs(u) / scale < chart.tol) return est;
    prev = est;
  }
  throw Error(ErrorKind::NoConvergence, "Fatou coordinate limit did not settle within n_iter");
}

Cx fatou_coordinate(const ParabolicChart& chart, Cx z) {
  return (raw_fatou_coordinate(chart, z) - chart.anchor_raw) + 1.0;
}

ParabolicDriftTest::ParabolicDriftTest(const FamilySlot& slot) : param_(slot.param()) {
  switch (slot.kind()) {
    case FamilyKind::PerOne:
      if (param_ == Cx{}) {
        mode_ = Mode::PerOneTwoPetal;
      } else {
        mode_ = Mode::PerOneDrift;
        const double r = std::max(10.0, 10.0 / std::abs(param_));
        radius2_ = r * r;
      }
      break;
    case FamilyKind::Cubic:
      if (param_ == Cx{}) {
        mode_ = Mode::PetalDouble;
        threshold_ = 10.0;
        radius2_ = 1.0 / (2.0 * threshold_);
      } else {
        mode_ = Mode::Petal;
        inv_ = -1.0 / param_;
        const Cx alpha = 1.0 - 1.0 / (param_ * param_);
        threshold_ = std::max(10.0, 4.0 * std::abs(alpha));
        const double bound = 1.0 / (std::abs(param_) * threshold_);
        radius2_ = bound * bound;
      }
      break;
    case FamilyKind::ExtH2:
      mode_ = Mode::H2;
      threshold_ = 10.0;
      radius2_ = 2.0 / threshold_;
      break;
  }
}

bool ParabolicDriftTest::petal_step(Cx u) {
  const double re = u.real();
  if (re > threshold_) {
    streak_ = (have_prev_u_ && re > prev_re_u_) ? streak_ + 1 : 0;
  } else {
    streak_ = 0;
  }
  prev_re_u_ = re;
  have_prev_u_ = true;
  return streak_ >= kDriftStreak;
}

bool ParabolicDriftTest::step(Cx z) {
  switch (mode_) {
    case Mode::PerOneDrift:
      return abs2(z) > radius2_ && (z * std::conj(param_)).real() > 0.0;
    case Mode::PerOneTwoPetal: {
      bool hit = false;
      if (prev_z_) {
        const Cx p = *prev_z_;
        hit = abs2(p) > 100.0 && p.real() * z.real() > 0.0 && abs2(z) > abs2(p);
      }
      prev_z_ = z;
      return hit;
    }
    case Mode::Petal:
      if (z == Cx{} || abs2(z) >= radius2_) break;
      return petal_step(inv_ / z);
    case Mode::PetalDouble:
      if (z == Cx{} || abs2(z) >= radius2_) break;
      return petal_step(-0.5 / (z * z));
    case Mode::H2: {
      const Cx e = z - 1.0;
      if (e == Cx{} || abs2(e) >= radius2_) break;
      return petal_step(2.0 / (e * e));
    }
  }
  have_prev_u_ = false;
  streak_ = 0;
  return false;
}

bool converges_to_parabolic(const FamilySlot& slot, Cx z0, int budget) {
  if (budget < 1) throw Error(ErrorKind::InvalidArgument, "budget must be >= 1");
  ParabolicDriftTest drift(slot);
  return visit_map(slot, [&](const auto& f) {
    using Map = std::decay_t<decltype(f)>;
    Cx z = z0;
    for (int n = 0; n <= budget; ++n) {
      if (drift.step(z)) return true;
      if (!is_finite(z) || Map::pole(z)) return false;
      z = f(z);
    }
    return false;
  });
}

}  // namespace plike
