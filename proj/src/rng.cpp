#include "ptheory/rng.hpp"

#include <cmath>
#include <numbers>

namespace ptheory {

namespace {

// splitmix64; also used to decorrelate forked streams.
std::uint64_t splitmix(std::uint64_t& s) {
  s += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, const std::string& label) {
  std::uint64_t h = 0xCBF29CE484222325ULL ^ seed;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

Rng::Rng(std::uint64_t seed) : state_(seed) {
  // Warm up so nearby seeds diverge immediately.
  next_raw();
  next_raw();
}

std::uint64_t Rng::next_raw() { return splitmix(state_); }

double Rng::uniform() {
  return static_cast<double>(next_raw() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

bool Rng::coin() { return (next_raw() & 1ULL) != 0; }

std::uint64_t Rng::integer(std::uint64_t bound) {
  if (bound == 0) throw TheoryError("Rng::integer: zero bound");
  return next_raw() % bound;
}

cval Rng::gauss_scalar(Kind kind) {
  if (kind == Kind::boolean) return coin() ? 1.0 : 0.0;
  double re = gaussian();
  if (kind == Kind::real) return cval(re, 0.0);
  return cval(re, gaussian());
}

Rng Rng::fork(const std::string& label) const {
  return Rng(mix_seed(state_, label));
}

}  // namespace ptheory
