#include "wlsys/clodum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "wlsys/error.hpp"

namespace wlsys {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Clodum::Clodum(ClodumKind kind, double tolerance) : kind_(kind), tolerance_(tolerance) {
  if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) {
    throw ConfigError("tolerance must be a finite non-negative number");
  }
}

Clodum Clodum::make(std::string_view name, double tolerance) {
  if (name == "max-plus") return Clodum(ClodumKind::MaxPlus, tolerance);
  if (name == "max-times") return Clodum(ClodumKind::MaxTimes, tolerance);
  if (name == "max-min") return Clodum(ClodumKind::MaxMin, tolerance);
  if (name == "product-tnorm") return Clodum(ClodumKind::ProductTNorm, tolerance);
  throw ConfigError("unknown clodum '" + std::string(name) +
                    "' (expected max-plus, max-times, max-min or product-tnorm)");
}

std::string_view Clodum::name() const {
  switch (kind_) {
    case ClodumKind::MaxPlus: return "max-plus";
    case ClodumKind::MaxTimes: return "max-times";
    case ClodumKind::MaxMin: return "max-min";
    case ClodumKind::ProductTNorm: return "product-tnorm";
  }
  return "?";
}

std::string Clodum::carrier() const {
  switch (kind_) {
    case ClodumKind::MaxPlus: return "[-inf,+inf]";
    case ClodumKind::MaxTimes: return "[0,+inf]";
    case ClodumKind::MaxMin:
    case ClodumKind::ProductTNorm: return "[0,1]";
  }
  return "?";
}

Scalar Clodum::bottom() const {
  return kind_ == ClodumKind::MaxPlus ? -kInf : 0.0;
}

Scalar Clodum::top() const {
  switch (kind_) {
    case ClodumKind::MaxPlus:
    case ClodumKind::MaxTimes: return kInf;
    default: return 1.0;
  }
}

Scalar Clodum::unit() const {
  switch (kind_) {
    case ClodumKind::MaxPlus: return 0.0;
    default: return 1.0;
  }
}

Scalar Clodum::dual_unit() const {
  switch (kind_) {
    case ClodumKind::MaxPlus: return 0.0;
    case ClodumKind::MaxTimes: return 1.0;
    default: return 0.0;
  }
}

bool Clodum::is_clog() const {
  return kind_ == ClodumKind::MaxPlus || kind_ == ClodumKind::MaxTimes;
}

bool Clodum::contains(Scalar v) const {
  if (std::isnan(v)) return false;
  return v >= bottom() && v <= top();
}

void Clodum::require(Scalar v) const {
  if (!contains(v)) {
    throw DomainError("scalar " + format(v) + " outside the " + std::string(name()) + " carrier " +
                      carrier());
  }
}

// Case table of a clog: the bottom absorbs under mult even against the top,
// the top absorbs under dual_mult even against the bottom.
Scalar Clodum::mult(Scalar a, Scalar b) const {
  switch (kind_) {
    case ClodumKind::MaxPlus:
      if (a == -kInf || b == -kInf) return -kInf;
      if (a == kInf || b == kInf) return kInf;
      return a + b;
    case ClodumKind::MaxTimes:
      if (a == 0.0 || b == 0.0) return 0.0;
      if (a == kInf || b == kInf) return kInf;
      return a * b;
    case ClodumKind::MaxMin: return std::min(a, b);
    case ClodumKind::ProductTNorm: return a * b;
  }
  return a;
}

Scalar Clodum::dual_mult(Scalar a, Scalar b) const {
  switch (kind_) {
    case ClodumKind::MaxPlus:
      if (a == kInf || b == kInf) return kInf;
      if (a == -kInf || b == -kInf) return -kInf;
      return a + b;
    case ClodumKind::MaxTimes:
      if (a == kInf || b == kInf) return kInf;
      if (a == 0.0 || b == 0.0) return 0.0;
      return a * b;
    case ClodumKind::MaxMin: return std::max(a, b);
    case ClodumKind::ProductTNorm:
      if (a == 1.0 || b == 1.0) return 1.0;
      if (a == 0.0) return b;
      if (b == 0.0) return a;
      return std::min(1.0, a + b - a * b);
  }
  return a;
}

Scalar Clodum::conjugate(Scalar a) const {
  switch (kind_) {
    case ClodumKind::MaxPlus: return -a;
    case ClodumKind::MaxTimes:
      if (a == 0.0) return kInf;
      if (a == kInf) return 0.0;
      return 1.0 / a;
    case ClodumKind::MaxMin:
    case ClodumKind::ProductTNorm: return 1.0 - a;
  }
  return a;
}

Scalar Clodum::adj_erosion(Scalar a, Scalar w) const {
  switch (kind_) {
    case ClodumKind::MaxPlus:
    case ClodumKind::MaxTimes: return dual_mult(conjugate(a), w);
    case ClodumKind::MaxMin: return w >= a ? 1.0 : w;
    case ClodumKind::ProductTNorm:
      if (a == 0.0) return 1.0;
      return std::min(w / a, 1.0);
  }
  return w;
}

Scalar Clodum::adj_dilation(Scalar a, Scalar v) const {
  switch (kind_) {
    case ClodumKind::MaxPlus:
    case ClodumKind::MaxTimes: return mult(conjugate(a), v);
    case ClodumKind::MaxMin: return v > a ? v : 0.0;
    case ClodumKind::ProductTNorm:
      if (a == 1.0) return 0.0;
      return std::max((v - a) / (1.0 - a), 0.0);
  }
  return v;
}

Scalar Clodum::power(Scalar a, int k) const {
  Scalar r = unit();
  for (int i = 0; i < k; ++i) r = mult(r, a);
  return r;
}

Scalar Clodum::dual_power(Scalar a, int k) const {
  Scalar r = dual_unit();
  for (int i = 0; i < k; ++i) r = dual_mult(r, a);
  return r;
}

Scalar Clodum::kth_root(Scalar a, int k) const {
  if (k < 1) throw DomainError("root order must be >= 1");
  if (k == 1) return a;
  switch (kind_) {
    case ClodumKind::MaxPlus:
      if (std::isinf(a)) return a;
      return a / k;
    case ClodumKind::MaxTimes:
      if (a == 0.0 || a == kInf) return a;
      return std::pow(a, 1.0 / k);
    case ClodumKind::MaxMin: return a;
    case ClodumKind::ProductTNorm: return std::pow(a, 1.0 / k);
  }
  return a;
}

Scalar Clodum::dual_kth_root(Scalar a, int k) const {
  if (k < 1) throw DomainError("root order must be >= 1");
  if (k == 1) return a;
  switch (kind_) {
    case ClodumKind::MaxPlus:
    case ClodumKind::MaxTimes:
    case ClodumKind::MaxMin: return kth_root(a, k);
    case ClodumKind::ProductTNorm: return 1.0 - std::pow(1.0 - a, 1.0 / k);
  }
  return a;
}

bool Clodum::equal(Scalar a, Scalar b) const {
  if (a == b) return true;
  if (std::isinf(a) || std::isinf(b) || std::isnan(a) || std::isnan(b)) return false;
  const double scale = std::max(std::fabs(a), std::fabs(b));
  return std::fabs(a - b) <= tolerance_ + tolerance_ * scale;
}

Scalar Clodum::parse(std::string_view token) const {
  token = trim(token);
  double v = 0.0;
  if (token == "-inf" || token == "-Inf" || token == "-INF") {
    v = -kInf;
  } else if (token == "+inf" || token == "inf" || token == "Inf" || token == "+Inf" ||
             token == "INF") {
    v = kInf;
  } else {
    std::string_view digits = token;
    if (!digits.empty() && digits.front() == '+') digits.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
    if (digits.empty() || ec != std::errc() || ptr != digits.data() + digits.size() ||
        std::isnan(v)) {
      throw ParseError("invalid scalar token '" + std::string(token) + "'");
    }
  }
  if (!contains(v)) {
    throw DomainError("scalar " + std::string(token) + " outside the " + std::string(name()) +
                      " carrier " + carrier());
  }
  return v;
}

std::string Clodum::format(Scalar v) const {
  if (v == kInf) return "+inf";
  if (v == -kInf) return "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

void require_same_clodum(const Clodum& a, const Clodum& b, std::string_view what) {
  if (!(a == b)) {
    throw ClodumMismatch(std::string(what) + ": operands over " + std::string(a.name()) + " and " +
                         std::string(b.name()));
  }
}

}  // namespace wlsys
