#include "lorentz/random.hpp"

#include <boost/random/gamma_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace lorentz {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t derive_seed(std::uint64_t master, std::string_view name) {
  return splitmix64(master ^ fnv1a64(name));
}

double standard_normal(Rng& rng) {
  boost::random::normal_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

double uniform01(Rng& rng) {
  boost::random::uniform_01<double> dist;
  return dist(rng);
}

double gamma_variate(Rng& rng, double shape, double rate) {
  boost::random::gamma_distribution<double> dist(shape, 1.0 / rate);
  return dist(rng);
}

double beta_variate(Rng& rng, double alpha, double beta) {
  const double x = gamma_variate(rng, alpha, 1.0);
  const double y = gamma_variate(rng, beta, 1.0);
  return x / (x + y);
}

}  // namespace lorentz
