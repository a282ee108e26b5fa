#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace plike {

/// An angle in turns, reduced to [0, 1). Rationals p/q are kept exact so
/// that tripling and fixed-angle arithmetic do not drift; decimals fall back
/// to a double.
class Turns {
 public:
  Turns() = default;

  static Turns rational(std::int64_t p, std::int64_t q);
  static Turns decimal(double x);
  /// Accepts "p/q" or a decimal literal. Throws InvalidArgument.
  static Turns parse(std::string_view text);

  bool exact() const { return exact_; }
  std::int64_t numerator() const { return num_; }
  std::int64_t denominator() const { return den_; }
  double value() const;

  /// 3^n * angle mod 1.
  Turns tripled(int n = 1) const;
  /// -angle mod 1.
  Turns negated() const;
  /// angle + 1/2 mod 1.
  Turns plus_half() const;

  std::string to_string() const;

  friend bool operator==(const Turns& x, const Turns& y) {
    if (x.exact_ != y.exact_) return false;
    return x.exact_ ? (x.num_ == y.num_ && x.den_ == y.den_) : x.dec_ == y.dec_;
  }

 private:
  bool exact_ = true;
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
  double dec_ = 0.0;
};

/// Solves 3x = x mod 1 over rationals with denominator <= max_den: the
/// angles of the external rays fixed by the cubic tripling map.
std::vector<Turns> angles_fixed_by_tripling(int max_den = 64);

}  // namespace plike
