#pragma once

#include <cstdint>

namespace cbkit {

// Deterministic splitmix64 stream. All randomness in the library flows
// through an explicitly seeded Rng so runs are reproducible across
// platforms (std:: distributions are implementation-defined).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    // Independent child stream, e.g. one per trial index.
    Rng fork(std::uint64_t index) const {
        Rng mixer(state_ ^ (0xd1342543de82ef95ULL * (index + 1)));
        return Rng(mixer.next());
    }

private:
    std::uint64_t state_;
};

}  // namespace cbkit
