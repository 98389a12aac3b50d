#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace lorentz {

/// All sampling takes this engine by reference; callers own the stream.
using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t fnv1a64(std::string_view s);

/// Stream seed for a named consumer of a master seed:
/// splitmix64(master ^ fnv1a64(name)).
std::uint64_t derive_seed(std::uint64_t master, std::string_view name);

double standard_normal(Rng& rng);
double uniform01(Rng& rng);
double gamma_variate(Rng& rng, double shape, double rate);
double beta_variate(Rng& rng, double alpha, double beta);

}  // namespace lorentz
