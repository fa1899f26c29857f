#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace topsteer {

/// Laurent polynomial with 64-bit integer coefficients:
/// sum_k coeffs[k] * x^(low + k). Kept trimmed (no zero at either end);
/// the zero polynomial has empty coeffs and low = 0.
/// Arithmetic throws ErrorCode::complexity_limit on overflow.
class Laurent {
 public:
  Laurent() = default;
  Laurent(int low, std::vector<std::int64_t> coeffs);
  static Laurent constant(std::int64_t c) { return Laurent(0, {c}); }
  static Laurent monomial(std::int64_t c, int exponent) { return Laurent(exponent, {c}); }

  bool is_zero() const noexcept { return coeffs_.empty(); }
  int low() const noexcept { return low_; }
  int high() const noexcept { return low_ + static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<std::int64_t>& coeffs() const noexcept { return coeffs_; }
  std::int64_t coeff(int exponent) const;

  Laurent operator+(const Laurent& o) const;
  Laurent operator-(const Laurent& o) const;
  Laurent operator-() const;
  Laurent operator*(const Laurent& o) const;
  Laurent& operator+=(const Laurent& o) { return *this = *this + o; }
  Laurent shifted(int by) const;
  Laurent pow(int n) const;
  /// Exact quotient; throws ErrorCode::internal when `o` does not divide.
  Laurent exact_div(const Laurent& o) const;
  /// Value at integer x (x = +-1 only for negative exponents).
  std::int64_t eval(std::int64_t x) const;

  bool operator==(const Laurent&) const = default;

  /// "low:c0,c1,..." ; "0:" for zero.
  std::string key() const;
  static Laurent parse(const std::string& key);
  /// Human-readable form in variable `var`.
  std::string pretty(char var) const;

 private:
  void trim();
  int low_ = 0;
  std::vector<std::int64_t> coeffs_;
};

}  // namespace topsteer
