#include "topsteer/polynomial.hpp"

#include <sstream>

#include "topsteer/error.hpp"

namespace topsteer {

namespace {

std::int64_t add_checked(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::complexity_limit, "polynomial coefficient overflow");
  return r;
}

std::int64_t mul_checked(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorCode::complexity_limit, "polynomial coefficient overflow");
  return r;
}

}  // namespace

Laurent::Laurent(int low, std::vector<std::int64_t> coeffs) : low_(low), coeffs_(std::move(coeffs)) { trim(); }

void Laurent::trim() {
  std::size_t lead = 0;
  while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
  if (lead == coeffs_.size()) {
    coeffs_.clear();
    low_ = 0;
    return;
  }
  while (coeffs_.back() == 0) coeffs_.pop_back();
  if (lead) {
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
    low_ += static_cast<int>(lead);
  }
}

std::int64_t Laurent::coeff(int e) const {
  if (is_zero() || e < low_ || e > high()) return 0;
  return coeffs_[e - low_];
}

Laurent Laurent::operator+(const Laurent& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  const int lo = std::min(low_, o.low_), hi = std::max(high(), o.high());
  std::vector<std::int64_t> c(hi - lo + 1, 0);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) c[low_ - lo + k] = coeffs_[k];
  for (std::size_t k = 0; k < o.coeffs_.size(); ++k) c[o.low_ - lo + k] = add_checked(c[o.low_ - lo + k], o.coeffs_[k]);
  return Laurent(lo, std::move(c));
}

Laurent Laurent::operator-() const {
  Laurent r = *this;
  for (auto& c : r.coeffs_) c = mul_checked(c, -1);
  return r;
}

Laurent Laurent::operator-(const Laurent& o) const { return *this + (-o); }

Laurent Laurent::operator*(const Laurent& o) const {
  if (is_zero() || o.is_zero()) return {};
  std::vector<std::int64_t> c(coeffs_.size() + o.coeffs_.size() - 1, 0);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    for (std::size_t j = 0; j < o.coeffs_.size(); ++j) c[i + j] = add_checked(c[i + j], mul_checked(coeffs_[i], o.coeffs_[j]));
  }
  return Laurent(low_ + o.low_, std::move(c));
}

Laurent Laurent::shifted(int by) const {
  Laurent r = *this;
  if (!r.is_zero()) r.low_ += by;
  return r;
}

Laurent Laurent::pow(int n) const {
  require(n >= 0, "negative polynomial power");
  Laurent r = constant(1), base = *this;
  while (n) {
    if (n & 1) r = r * base;
    n >>= 1;
    if (n) base = base * base;
  }
  return r;
}

Laurent Laurent::exact_div(const Laurent& o) const {
  if (o.is_zero()) fail(ErrorCode::internal, "polynomial division by zero");
  if (is_zero()) return {};
  // long division from the top coefficient
  std::vector<std::int64_t> rem = coeffs_;
  const int n = static_cast<int>(rem.size()), m = static_cast<int>(o.coeffs_.size());
  if (n < m) fail(ErrorCode::internal, "inexact polynomial division");
  std::vector<std::int64_t> q(n - m + 1, 0);
  const std::int64_t lead = o.coeffs_.back();
  for (int k = n - m; k >= 0; --k) {
    const std::int64_t top = rem[k + m - 1];
    if (top % lead != 0) fail(ErrorCode::internal, "inexact polynomial division");
    const std::int64_t f = top / lead;
    q[k] = f;
    if (f == 0) continue;
    for (int j = 0; j < m; ++j) rem[k + j] = add_checked(rem[k + j], -mul_checked(f, o.coeffs_[j]));
  }
  for (std::int64_t r : rem)
    if (r != 0) fail(ErrorCode::internal, "inexact polynomial division");
  return Laurent(low_ - o.low_, std::move(q));
}

std::int64_t Laurent::eval(std::int64_t x) const {
  if (is_zero()) return 0;
  if (low_ < 0) require(x == 1 || x == -1, "negative exponents need x = +-1");
  std::int64_t acc = 0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) acc = add_checked(mul_checked(acc, x), coeffs_[k]);
  // multiply by x^low
  const int lo = low_;
  if (lo >= 0) {
    for (int i = 0; i < lo; ++i) acc = mul_checked(acc, x);
  } else if (x == -1 && (-lo) % 2 == 1) {
    acc = -acc;
  }
  return acc;
}

std::string Laurent::key() const {
  std::string out = std::to_string(low_) + ":";
  for (std::size_t k = 0; k < coeffs_.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(coeffs_[k]);
  }
  return out;
}

Laurent Laurent::parse(const std::string& key) {
  const auto colon = key.find(':');
  if (colon == std::string::npos) fail(ErrorCode::parse_error, "bad polynomial key: " + key);
  try {
    const int low = std::stoi(key.substr(0, colon));
    std::vector<std::int64_t> c;
    std::stringstream ss(key.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) c.push_back(std::stoll(tok));
    return Laurent(low, std::move(c));
  } catch (const std::logic_error&) {
    fail(ErrorCode::parse_error, "bad polynomial key: " + key);
  }
}

std::string Laurent::pretty(char var) const {
  if (is_zero()) return "0";
  std::string out;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    const std::int64_t c = coeffs_[k];
    if (c == 0) continue;
    const int e = low_ + static_cast<int>(k);
    if (!out.empty()) out += c < 0 ? " - " : " + ";
    else if (c < 0) out += "-";
    const std::int64_t a = c < 0 ? -c : c;
    if (a != 1 || e == 0) out += std::to_string(a);
    if (e != 0) {
      out += var;
      if (e != 1) out += "^" + std::to_string(e);
    }
  }
  return out;
}

}  // namespace topsteer
