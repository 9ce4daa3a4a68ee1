#include "cdpinfer/rng.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <stdexcept>

namespace cdp {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

RngState::RngState(std::uint64_t seed) : seed_(seed), engine_(seed) {}

RngState RngState::split(std::uint64_t stream) const {
  return RngState(splitmix64(splitmix64(seed_) ^ splitmix64(stream + 1)));
}

std::uint64_t RngState::next_u64() { return engine_(); }

double RngState::uniform01() {
  // 53-bit lattice offset by half a step: values lie strictly in (0,1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngState::uniform(double a, double b) {
  return a + (b - a) * uniform01();
}

std::uint64_t RngState::uniform_below(std::uint64_t n) {
  if (n == 0) throw std::domain_error("uniform_below: n must be positive");
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
}

double RngState::normal() {
  static const boost::math::normal_distribution<double> std_normal(0.0, 1.0);
  return boost::math::quantile(std_normal, uniform01());
}

double RngState::exponential() { return -std::log(uniform01()); }

double RngState::beta(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::domain_error("beta: shape parameters must be positive");
  }
  return boost::math::ibeta_inv(a, b, uniform01());
}

}  // namespace cdp
