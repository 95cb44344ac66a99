#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace slris {

/// Deterministic random stream with explicit splitting.
///
/// All distributions are generated in-house (Box-Muller for normals,
/// 53-bit mantissa uniforms) so that a given seed yields the same byte-exact
/// sequence on every platform and standard library. split() derives an
/// independent child stream from the parent seed and a stream index, which
/// is how per-window / per-realization generators are handed to workers.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform in [0, 1) with 53 random mantissa bits.
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi);
    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t uniform_index(std::uint64_t n);

    /// Standard normal (Box-Muller, one spare value cached).
    double normal();
    /// Circularly symmetric complex Gaussian with total variance `variance`
    /// (variance/2 per real component).
    std::complex<double> normal_complex(double variance);

    /// Independent child stream. Depends only on the constructor seed and
    /// `stream`, never on how many values were already drawn.
    Rng split(std::uint64_t stream) const;

    /// In-place Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_index(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    double cached_normal_ = 0.0;
    bool has_cached_normal_ = false;
};

/// splitmix64 finalizer; used for seed derivation.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

}  // namespace slris
