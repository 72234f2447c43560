#pragma once

#include <array>
#include <cstdint>
#include <string_view>

namespace stablets {

/// Philox4x32-10 counter-based block cipher (Salmon et al., SC'11).
/// Pure function of (counter, key); no internal state.
class Philox4x32 {
public:
    using Counter = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static Counter encrypt(Counter counter, Key key) noexcept;
};

enum class StreamPurpose : std::uint32_t {
    RewardNoise = 1,
    PosteriorNoise = 2,
    Auxiliary = 3,
};

std::string_view to_string(StreamPurpose purpose) noexcept;

/// Random stream keyed by (master seed, replication, purpose).
///
/// The output sequence depends only on those three values. Each Philox block
/// yields two 64-bit words; `position()` counts words consumed, so one call to
/// `uniform()` or `normal()` advances it by exactly one.
///
/// Normal variates use inversion: z = normal_quantile(u) with u the open-interval
/// uniform below. Trajectories are reproducible for a given seed but are tied to
/// this transform.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t replication, StreamPurpose purpose);

    std::uint64_t next_u64() noexcept;

    /// Uniform on the open interval (0, 1) with 53 bits of resolution.
    double uniform() noexcept;

    /// Standard normal variate.
    double normal() noexcept;

    std::uint64_t position() const noexcept { return position_; }
    std::uint64_t master_seed() const noexcept { return master_seed_; }
    std::uint64_t replication() const noexcept { return replication_; }
    StreamPurpose purpose() const noexcept { return purpose_; }

private:
    void refill() noexcept;

    std::uint64_t master_seed_;
    std::uint64_t replication_;
    StreamPurpose purpose_;
    Philox4x32::Key key_;
    std::uint64_t block_ = 0;
    std::uint64_t position_ = 0;
    std::array<std::uint64_t, 2> buffer_{};
    unsigned buffered_ = 0;
};

/// The three streams owned by one replication worker.
struct StreamSet {
    RngStream reward;
    RngStream posterior;
    RngStream auxiliary;

    static StreamSet for_replication(std::uint64_t master_seed, std::uint64_t replication);
};

}  // namespace stablets
