#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace cmin
{
namespace detail
{
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
{
    return (x << k) | (x >> (64 - k));
}
}  // namespace detail

/*!
 * Reproducible random stream identified by (master seed, stream index).
 *
 * The generator is xoshiro256**; its state is derived from the pair by
 * hashing the stream index into the master seed and expanding with
 * splitmix64, so distinct indices give independent, reproducible streams
 * without any shared state. Satisfies UniformRandomBitGenerator, so the
 * standard <random> distributions accept it directly.
 *
 * A stream must not be shared between concurrent callers.
 */
class RngStream
{
  public:
    using result_type = std::uint64_t;

    explicit RngStream(std::uint64_t master_seed, std::uint64_t stream_index = 0)
        : master_seed_(master_seed), stream_index_(stream_index)
    {
        std::uint64_t mix = master_seed;
        std::uint64_t key = detail::splitmix64(mix);
        std::uint64_t idx = stream_index ^ 0x6a09e667f3bcc909ULL;
        key ^= detail::splitmix64(idx);
        for (auto& word : state_)
            word = detail::splitmix64(key);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() noexcept
    {
        const std::uint64_t result = detail::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = detail::rotl(state_[3], 45);
        return result;
    }

    //! Uniform on the open interval (0, 1); never returns 0 or 1.
    double uniform() noexcept
    {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() { return normal_(*this); }

    double exponential() noexcept { return -std::log(uniform()); }

    //! Uniform integer on {lo, ..., hi}.
    long uniform_int(long lo, long hi)
    {
        return std::uniform_int_distribution<long>(lo, hi)(*this);
    }

    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t stream_index() const noexcept { return stream_index_; }

  private:
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::array<std::uint64_t, 4> state_{};
    std::normal_distribution<double> normal_{0.0, 1.0};
};
}  // namespace cmin
