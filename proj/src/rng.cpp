#include "stablets/rng.hpp"

#include "stablets/errors.hpp"
#include "stablets/normal.hpp"

namespace stablets {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept {
    const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(product >> 32);
    lo = static_cast<std::uint32_t>(product);
}

inline Philox4x32::Counter round(Philox4x32::Counter c, Philox4x32::Key k) noexcept {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

Philox4x32::Counter Philox4x32::encrypt(Counter counter, Key key) noexcept {
    for (int r = 0; r < 10; ++r) {
        if (r > 0) {
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        counter = round(counter, key);
    }
    return counter;
}

std::string_view to_string(StreamPurpose purpose) noexcept {
    switch (purpose) {
        case StreamPurpose::RewardNoise: return "reward-noise";
        case StreamPurpose::PosteriorNoise: return "posterior-noise";
        case StreamPurpose::Auxiliary: return "auxiliary";
    }
    return "unknown";
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t replication, StreamPurpose purpose)
    : master_seed_(master_seed),
      replication_(replication),
      purpose_(purpose),
      key_{static_cast<std::uint32_t>(master_seed), static_cast<std::uint32_t>(master_seed >> 32)} {
    // counter word 3 carries the purpose tag and the high bits of the replication index
    if ((replication >> 56) != 0) throw DomainError("replication index must be below 2^56");
}

void RngStream::refill() noexcept {
    // counter layout: [block lo, block hi, replication lo, (replication hi << 8) | purpose]
    const Philox4x32::Counter counter{
        static_cast<std::uint32_t>(block_),
        static_cast<std::uint32_t>(block_ >> 32),
        static_cast<std::uint32_t>(replication_),
        static_cast<std::uint32_t>(((replication_ >> 32) << 8) | static_cast<std::uint32_t>(purpose_)),
    };
    const auto out = Philox4x32::encrypt(counter, key_);
    buffer_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
    buffer_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
    buffered_ = 2;
    ++block_;
}

std::uint64_t RngStream::next_u64() noexcept {
    if (buffered_ == 0) refill();
    ++position_;
    return buffer_[2 - buffered_--];
}

double RngStream::uniform() noexcept {
    constexpr double kScale = 0x1.0p-53;
    return (static_cast<double>(next_u64() >> 11) + 0.5) * kScale;
}

double RngStream::normal() noexcept { return normal_quantile_unchecked(uniform()); }

StreamSet StreamSet::for_replication(std::uint64_t master_seed, std::uint64_t replication) {
    return StreamSet{
        RngStream(master_seed, replication, StreamPurpose::RewardNoise),
        RngStream(master_seed, replication, StreamPurpose::PosteriorNoise),
        RngStream(master_seed, replication, StreamPurpose::Auxiliary),
    };
}

}  // namespace stablets
