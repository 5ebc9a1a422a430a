#include "kwnet/ratio.hpp"

#include <cassert>
#include <string>

namespace kwnet {

namespace {

__int128 pow10(int decimals) {
  __int128 p = 1;
  for (int i = 0; i < decimals; ++i) p *= 10;
  return p;
}

// round-half-up(num * 10^decimals / den)
__int128 scaled(const Ratio& r, int decimals) {
  assert(r.num >= 0 && r.den > 0);
  const __int128 n = static_cast<__int128>(r.num) * pow10(decimals);
  return (2 * n + r.den) / (2 * static_cast<__int128>(r.den));
}

}  // namespace

std::string Ratio::fixed(int decimals) const {
  const __int128 s = scaled(*this, decimals);
  const __int128 p = pow10(decimals);
  std::string out = std::to_string(static_cast<long long>(s / p));
  if (decimals > 0) {
    std::string frac = std::to_string(static_cast<long long>(s % p));
    out += '.';
    out += std::string(static_cast<std::size_t>(decimals) - frac.size(), '0');
    out += frac;
  }
  return out;
}

double Ratio::rounded(int decimals) const { return std::stod(fixed(decimals)); }

}  // namespace kwnet
