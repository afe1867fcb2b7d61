#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace gaussint {

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

/// Independent stream `stream` of experiment seed `master`. Streams are keyed
/// by index, never by thread, so results do not depend on scheduling.
class Rng {
public:
    Rng(std::uint64_t master, std::uint64_t stream);

    /// Uniform on [0, 1) with 53 random bits.
    double uniform();
    /// Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi);
    /// Standard normal (Box-Muller, both outputs used).
    double normal();
    void fill_normal(std::span<double> out);

    std::uint64_t master() const noexcept { return master_; }
    std::uint64_t stream() const noexcept { return stream_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t master_;
    std::uint64_t stream_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace gaussint
