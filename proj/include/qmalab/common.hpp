#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmalab {

// Contract violations: a caller handed us inputs that break a precondition.
struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Budget refusals: the request is well-formed but exceeds a configured cap.
// Never downgraded to a silent approximation.
struct BudgetError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input files; message carries the position of the offending field.
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& msg) {
    if (!cond) throw ContractError(msg);
}

// Exact fraction with int64 parts. Large enough for desk-scale edge counts
// and brute-force satisfaction accounting; construction normalizes.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw ContractError("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    double value() const { return static_cast<double>(num) / static_cast<double>(den); }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        // den > 0 on both sides; desk-scale products fit in __int128
        return static_cast<__int128>(a.num) * b.den < static_cast<__int128>(b.num) * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return a < b || a == b; }
};

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Seeded generator with explicit stream derivation. Gaussian draws use
// Box-Muller on raw bits so results do not depend on the standard library's
// (unspecified) distribution implementations.
class Rng {
  public:
    explicit Rng(uint64_t seed) : base_(seed), s_(splitmix64(seed)) {
        if (s_ == 0) s_ = 0x106689D45497FDB5ULL;
    }

    // Independent stream derived from (seed, index); order-independent merges
    // rely on streams never sharing state.
    Rng stream(uint64_t index) const {
        return Rng(splitmix64(base_ ^ (0xA0761D6478BD642FULL + index * 0xE7037ED1A0B428DBULL)));
    }

    uint64_t next_u64() {
        // xorshift64* on a splitmix-initialized state
        s_ ^= s_ >> 12;
        s_ ^= s_ << 25;
        s_ ^= s_ >> 27;
        return s_ * 0x2545F4914F6CDD1DULL;
    }

    double uniform01() {  // [0, 1)
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // Unbiased integer in [0, n)
    uint64_t index(uint64_t n) {
        if (n == 0) throw ContractError("Rng::index: n must be positive");
        uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    double normal() {
        if (have_spare_) { have_spare_ = false; return spare_; }
        double u1, u2;
        do { u1 = uniform01(); } while (u1 <= 0.0);
        u2 = uniform01();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    uint64_t base_seed() const { return base_; }

  private:
    uint64_t base_;
    uint64_t s_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Ordinary least squares on (x, y); used by the scaling experiments on
// log-log points.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double residual_rms = 0.0;
};

inline LineFit fit_line(const std::vector<double>& xs, const std::vector<double>& ys) {
    require(xs.size() == ys.size() && xs.size() >= 2, "fit_line: need >= 2 points");
    const double n = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= n; my /= n;
    double sxy = 0, sxx = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    require(sxx > 0, "fit_line: degenerate x values");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double r = ys[i] - (f.intercept + f.slope * xs[i]);
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / n);
    return f;
}

}  // namespace qmalab
