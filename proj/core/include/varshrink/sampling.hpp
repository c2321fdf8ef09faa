#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace varshrink {

// Identifies one reproducible sample stream. The map
// (master_seed, stream_index) -> stream is pure, so results never depend
// on evaluation order or thread scheduling.
struct SeedSpec {
    std::uint64_t master_seed = 42;
    std::uint64_t stream_index = 0;
};

// splitmix64 finalizer; the published mixing function behind stream_seed.
std::uint64_t splitmix64(std::uint64_t x);

// Engine seed for a stream: splitmix64(splitmix64(master) ^ index).
std::uint64_t stream_seed(const SeedSpec& seed);

// Self-contained sampler. All distribution algorithms are implemented here
// (Box-Muller, Marsaglia-Tsang, Poisson inversion/PTRS) so a fixed SeedSpec
// yields bit-identical output everywhere.
class Rng {
  public:
    explicit Rng(const SeedSpec& seed) : gen_(stream_seed(seed)) {}

    // Uniform on the open interval (0, 1).
    double uniform();
    // Standard normal.
    double normal();
    // Gamma(shape, scale = 1), shape > 0.
    double gamma(double shape);
    // Chi-square with df > 0 degrees of freedom (df need not be integer).
    double chi_square(double df);
    // Poisson(rate), rate >= 0.
    long poisson(double rate);

  private:
    std::mt19937_64 gen_;
};

// count draws from chi^2_df as one deterministic stream.
std::vector<double> sample_chi2(double df, const SeedSpec& seed, std::size_t count);

}  // namespace varshrink
