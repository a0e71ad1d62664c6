#ifndef ABK_RNG_HPP
#define ABK_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace abk {

// Derives independent stream seeds from a master seed (splitmix64 step).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t z = master + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// mt19937_64 with hand-rolled variate generators so that streams are
// reproducible across standard library implementations.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() {  // in (0,1)
        return (static_cast<double>(eng_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    int uniform_int(int n) {  // in [0, n)
        return static_cast<int>(std::min<double>(n - 1, std::floor(uniform() * n)));
    }

    double normal() {  // Marsaglia polar method
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

    double exponential(double rate) { return -std::log(uniform()) / rate; }

    // Marsaglia-Tsang for shape >= 1; boosted by U^(1/shape) for shape < 1.
    double gamma(double shape, double scale) {
        if (shape < 1.0) {
            double u = uniform();
            return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
        }
        double d = shape - 1.0 / 3.0;
        double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, vcube;
            do {
                x = normal();
                vcube = 1.0 + c * x;
            } while (vcube <= 0.0);
            vcube = vcube * vcube * vcube;
            double u = uniform();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * vcube * scale;
            if (std::log(u) < 0.5 * x * x + d * (1.0 - vcube + std::log(vcube))) return d * vcube * scale;
        }
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (int i = static_cast<int>(v.size()) - 1; i > 0; --i) {
            int j = uniform_int(i + 1);
            std::swap(v[i], v[j]);
        }
    }

  private:
    std::mt19937_64 eng_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace abk

#endif
