// Independent reference implementations used only by tests. These stay
// deliberately dumb: composite Simpson instead of adaptive panels, a series
// expansion instead of erfc, a self-contained RNG. Expected values in the
// test files were either computed with these oracles or by hand from the
// closed forms.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>

namespace oracle {

// Composite Simpson. With ~1e6 panels this is good to ~1e-12 on the smooth
// integrands we use it for, and it shares no code with the library's
// adaptive Gauss-Kronrod.
inline double simpson(const std::function<double(double)>& f, double a,
                      double b, int panels = 1000000) {
    const double h = (b - a) / panels;
    double acc = f(a) + f(b);
    for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return acc * h / 3.0;
}

// Standard normal cdf by Taylor series around 0 in long double:
//   Phi(x) = 1/2 + phi(x) * sum_k x^(2k+1) / (1*3*5*...*(2k+1))
// Converges for the |x| <= 8 range we certify against.
inline long double normal_cdf_series(long double x) {
    const long double ax = fabsl(x);
    long double term = ax;
    long double sum = ax;
    for (int k = 1; k < 500; ++k) {
        term *= ax * ax / (2 * k + 1);
        sum += term;
        if (term < 1e-25L * sum) break;
    }
    const long double phi = expl(-0.5L * ax * ax) / sqrtl(2.0L * 3.14159265358979323846264338327950288L);
    const long double p = 0.5L + phi * sum;
    return x >= 0 ? p : 1.0L - p;
}

// Self-contained splitmix64-based generator, unrelated to the library's
// stream type, for randomized property tests.
struct Rng {
    std::uint64_t s;
    explicit Rng(std::uint64_t seed) : s(seed) {}
    std::uint64_t next() {
        s += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = s;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }
    // uniform in (0,1)
    double uniform() { return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Box-Muller is fine at test precision
    double normal() {
        const double u1 = uniform(), u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }
};

}  // namespace oracle
