#ifndef WSOPT_RNG_HPP
#define WSOPT_RNG_HPP

#include <cstdint>

namespace wsopt {

    // Counter-based deterministic RNG.
    //
    // Every draw is a pure function of (stream key, counter), so any consumer
    // can be evaluated in any order, on any number of threads, and still
    // produce bit-identical values. Streams are derived from a master seed via
    // tag mixing; counters are chosen by the call site (sample index, joint
    // index, iteration, ...).
    //
    // The mixer is the splitmix64 finalizer, which has full avalanche; two
    // rounds keyed by the golden-ratio increment give independent streams.

    namespace rng {

        inline constexpr std::uint64_t golden = 0x9e3779b97f4a7c15ULL;

        inline std::uint64_t mix64(std::uint64_t z)
        {
            z += golden;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            return z ^ (z >> 31);
        }

        // Order-sensitive key combination: combine(a, b) != combine(b, a).
        inline std::uint64_t combine(std::uint64_t a, std::uint64_t b)
        {
            return mix64(a ^ (mix64(b) + golden + (a << 6) + (a >> 2)));
        }

    } // namespace rng

    struct RngStream {
        std::uint64_t key = 0;

        RngStream() = default;
        explicit RngStream(std::uint64_t seed) : key(rng::mix64(seed)) {}

        // Derived independent sub-stream (e.g. per purpose, per iteration).
        RngStream sub(std::uint64_t tag) const { return RngStream::from_key(rng::combine(key, tag)); }

        // Raw 64 bits for the given counter.
        std::uint64_t bits(std::uint64_t counter) const { return rng::mix64(key ^ (counter * rng::golden)); }

        // Uniform double in [0, 1), 53-bit resolution.
        double u01(std::uint64_t counter) const
        {
            return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
        }

        // Uniform double in [lo, hi).
        double uniform(std::uint64_t counter, double lo, double hi) const
        {
            return lo + (hi - lo) * u01(counter);
        }

        // Uniform integer in [0, n). Uses the double path: the 2^-53 bias is
        // irrelevant here and the result is platform-independent.
        std::uint64_t below(std::uint64_t counter, std::uint64_t n) const
        {
            std::uint64_t v = static_cast<std::uint64_t>(u01(counter) * static_cast<double>(n));
            return v >= n ? n - 1 : v;
        }

        static RngStream from_key(std::uint64_t raw_key)
        {
            RngStream s;
            s.key = raw_key;
            return s;
        }
    };

    // Convenience stateful wrapper for strictly serial call sites (e.g. a
    // Fisher-Yates shuffle during initialization).
    struct RngSequence {
        RngStream stream;
        std::uint64_t counter = 0;

        explicit RngSequence(RngStream s) : stream(s) {}

        double u01() { return stream.u01(counter++); }
        double uniform(double lo, double hi) { return stream.uniform(counter++, lo, hi); }
        std::uint64_t below(std::uint64_t n) { return stream.below(counter++, n); }
    };

} // namespace wsopt

#endif
