#pragma once

#include <cstdint>
#include <string>

namespace kwnet {

// Exact non-negative rational. Rounding happens only when formatting.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  // Decimal text with `decimals` digits after the point, rounded half up.
  std::string fixed(int decimals) const;

  // Value rounded half up to `decimals` digits, as a double.
  double rounded(int decimals) const;

  friend bool operator==(const Ratio& a, const Ratio& b) {
    return static_cast<__int128>(a.num) * b.den == static_cast<__int128>(b.num) * a.den;
  }
};

}  // namespace kwnet
