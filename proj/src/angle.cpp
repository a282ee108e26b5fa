#include "plike/angle.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "plike/error.hpp"

namespace plike {

namespace {

std::int64_t mod(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

double frac(double x) { return x - std::floor(x); }

}  // namespace

Turns Turns::rational(std::int64_t p, std::int64_t q) {
  if (q == 0) throw Error(ErrorKind::InvalidArgument, "angle denominator is zero");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  p = mod(p, q);
  const std::int64_t g = std::gcd(p, q);
  Turns t;
  t.num_ = p / g;
  t.den_ = q / g;
  return t;
}

Turns Turns::decimal(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "angle is not finite");
  Turns t;
  t.exact_ = false;
  t.dec_ = frac(x);
  if (t.dec_ >= 1.0) t.dec_ = 0.0;
  return t;
}

Turns Turns::parse(std::string_view text) {
  auto bad = [&] {
    return Error(ErrorKind::InvalidArgument, "cannot parse angle '" + std::string(text) + "'");
  };
  const auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::int64_t p = 0, q = 0;
    const auto lhs = text.substr(0, slash);
    const auto rhs = text.substr(slash + 1);
    auto r1 = std::from_chars(lhs.data(), lhs.data() + lhs.size(), p);
    auto r2 = std::from_chars(rhs.data(), rhs.data() + rhs.size(), q);
    if (r1.ec != std::errc{} || r1.ptr != lhs.data() + lhs.size() || r2.ec != std::errc{} ||
        r2.ptr != rhs.data() + rhs.size() || q <= 0) {
      throw bad();
    }
    return rational(p, q);
  }
  double x = 0;
  auto r = std::from_chars(text.data(), text.data() + text.size(), x);
  if (r.ec != std::errc{} || r.ptr != text.data() + text.size()) throw bad();
  return decimal(x);
}

double Turns::value() const {
  return exact_ ? static_cast<double>(num_) / static_cast<double>(den_) : dec_;
}

Turns Turns::tripled(int n) const {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "negative tripling count");
  if (!exact_) return decimal(dec_ * std::pow(3.0, n));
  // 3^n p mod q by square-and-multiply in 128-bit arithmetic.
  using u128 = unsigned __int128;
  const auto q = static_cast<u128>(den_);
  u128 result = static_cast<u128>(num_) % q;
  u128 base = 3 % q;
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) result = result * base % q;
    base = base * base % q;
  }
  return rational(static_cast<std::int64_t>(result), den_);
}

Turns Turns::negated() const {
  return exact_ ? rational(-num_, den_) : decimal(-dec_);
}

Turns Turns::plus_half() const {
  if (!exact_) return decimal(dec_ + 0.5);
  if (den_ % 2 == 0) return rational(num_ + den_ / 2, den_);
  return rational(2 * num_ + den_, 2 * den_);
}

std::string Turns::to_string() const {
  if (exact_) return std::to_string(num_) + "/" + std::to_string(den_);
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", dec_);
  return buf;
}

std::vector<Turns> angles_fixed_by_tripling(int max_den) {
  std::vector<Turns> out;
  for (std::int64_t q = 1; q <= max_den; ++q) {
    for (std::int64_t p = 0; p < q; ++p) {
      if (std::gcd(p, q) != 1) continue;
      const Turns t = Turns::rational(p, q);
      if (t.tripled() == t) out.push_back(t);
    }
  }
  return out;
}

}  // namespace plike
