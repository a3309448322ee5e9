#include "pagraph/rng.hpp"

#include <cmath>

namespace pagraph {

// Lemire's nearly-divisionless method.
std::uint64_t Rng::index(std::uint64_t bound) {
  std::uint64_t x = engine_();
  auto m = static_cast<unsigned __int128>(x) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      x = engine_();
      m = static_cast<unsigned __int128>(x) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Rng::exponential(double rate) { return -std::log(uniform_pos()) / rate; }

}  // namespace pagraph
