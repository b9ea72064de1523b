#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <stdexcept>
#include <string>

namespace pca {

/// Exact rational number. All market quantities (goods, prices, payments,
/// revenues) are kept exact; decimals appear only in output formatting.
using Rat = boost::multiprecision::cpp_rational;
using Int = boost::multiprecision::cpp_int;

/// Parses "p/q", "p", or a plain decimal like "8.75". Throws on garbage.
Rat parse_rat(const std::string& s);

/// Canonical "p/q" form ("p" when the denominator is 1).
std::string format_rat(const Rat& r);

/// Fixed-point decimal approximation with the given number of fractional
/// digits, rounded half away from zero. Deterministic across platforms.
std::string format_decimal(const Rat& r, int digits = 6);

/// Extended rational with a single +infinity, used for budgets, demands and
/// capacities. Arithmetic saturates: inf - finite = inf, min(inf, x) = x.
/// inf - inf and inf * 0 are domain errors; the mechanisms never need them.
class ExtRat {
 public:
  ExtRat() : finite_(0) {}
  ExtRat(Rat v) : finite_(std::move(v)) {}  // NOLINT: implicit by design
  ExtRat(int v) : finite_(v) {}             // NOLINT
  static ExtRat infinity() {
    ExtRat e;
    e.finite_.reset();
    return e;
  }

  bool is_infinite() const { return !finite_.has_value(); }
  bool is_finite() const { return finite_.has_value(); }
  const Rat& value() const {
    if (!finite_) throw std::domain_error("ExtRat: value() of infinity");
    return *finite_;
  }

  ExtRat operator+(const ExtRat& o) const {
    if (is_infinite() || o.is_infinite()) return infinity();
    return ExtRat(*finite_ + *o.finite_);
  }
  ExtRat operator-(const ExtRat& o) const {
    if (o.is_infinite()) throw std::domain_error("ExtRat: x - inf");
    if (is_infinite()) return infinity();
    return ExtRat(*finite_ - *o.finite_);
  }
  ExtRat& operator+=(const ExtRat& o) { return *this = *this + o; }
  ExtRat& operator-=(const ExtRat& o) { return *this = *this - o; }

  bool operator==(const ExtRat& o) const {
    if (is_infinite() != o.is_infinite()) return false;
    return is_infinite() || *finite_ == *o.finite_;
  }
  bool operator!=(const ExtRat& o) const { return !(*this == o); }
  bool operator<(const ExtRat& o) const {
    if (is_infinite()) return false;
    if (o.is_infinite()) return true;
    return *finite_ < *o.finite_;
  }
  bool operator<=(const ExtRat& o) const { return *this < o || *this == o; }
  bool operator>(const ExtRat& o) const { return o < *this; }
  bool operator>=(const ExtRat& o) const { return o <= *this; }

  friend ExtRat min(const ExtRat& a, const ExtRat& b) { return a < b ? a : b; }

 private:
  std::optional<Rat> finite_;  // nullopt encodes +infinity
};

/// Parses an ExtRat: "inf" or anything parse_rat accepts.
ExtRat parse_extrat(const std::string& s);
std::string format_extrat(const ExtRat& e);

}  // namespace pca
