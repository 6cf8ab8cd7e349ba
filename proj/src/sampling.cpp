#include "wrinkle/sampling.hpp"

namespace wf {

long Rng::integer(long lo, long hi) {
    auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(next() % span);
}

Rational Rng::rational(long span, long max_den) {
    long num = integer(-span, span);
    long den = integer(1, max_den);
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational Rng::nonzero_rational(long span, long max_den) {
    for (;;) {
        Rational q = rational(span, max_den);
        if (q != 0) return q;
    }
}

std::uint64_t stable_hash(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace wf
