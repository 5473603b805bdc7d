#pragma once
// Shared Monte Carlo plumbing: deterministic chunk seeding, a small RNG with
// explicit draw formulas (so streams are reproducible across platforms and
// thread counts), LU determinants, and the dart-order permutation sign.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <random>
#include <thread>
#include <vector>

#include "knotcs/integrator.hpp"
#include "knotcs/vec3.hpp"
#include "knotcs/wilson_graph.hpp"

namespace knotcs::detail {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t chunk_seed(std::uint64_t seed, std::int64_t chunk) {
    return splitmix64(seed ^ (0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(chunk + 1)));
}

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(std::uint64_t s) : eng(s) {}
    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }
    void normal2(double& a, double& b) {
        double u1 = std::max(uniform(), 0x1.0p-60), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        a = r * std::cos(2.0 * kPi * u2);
        b = r * std::sin(2.0 * kPi * u2);
    }
    double normal() {
        double a, b;
        normal2(a, b);
        return a;
    }
    Vec3 normal3() {
        double a, b, c, d;
        normal2(a, b);
        normal2(c, d);
        return {a, b, c};
    }
    int below(int n) { return std::min(static_cast<int>(uniform() * n), n - 1); }
};

inline int resolve_threads(const McOptions& opt) {
    int th = opt.threads;
    if (th <= 0) {
        if (const char* env = std::getenv("KNOTCS_THREADS")) th = std::atoi(env);
    }
    if (th <= 0) th = static_cast<int>(std::thread::hardware_concurrency());
    return std::clamp(th, 1, 64);
}

inline double det_inplace(std::vector<double>& m, int n) {
    double det = 1.0;
    for (int c = 0; c < n; ++c) {
        int piv = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(m[r * n + c]) > std::fabs(m[piv * n + c])) piv = r;
        if (m[piv * n + c] == 0.0) return 0.0;
        if (piv != c) {
            for (int k = c; k < n; ++k) std::swap(m[piv * n + k], m[c * n + k]);
            det = -det;
        }
        det *= m[c * n + c];
        double inv = 1.0 / m[c * n + c];
        for (int r = c + 1; r < n; ++r) {
            double f = m[r * n + c] * inv;
            if (f == 0.0) continue;
            for (int k = c + 1; k < n; ++k) m[r * n + k] -= f * m[c * n + k];
        }
    }
    return det;
}

// Sign of the permutation taking the per-vertex dart sequence to the per-edge
// (tail, head) sequence; together with the graph sign it orients the integral.
inline int dart_permutation_sign(const WilsonGraph& g) {
    std::vector<int> seq;
    for (const auto& ord : g.vertex_orders())
        for (const Dart& d : ord) seq.push_back(d.edge * 2 + d.end);
    std::vector<char> seen(seq.size(), 0);
    int odd = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (seen[i]) continue;
        std::size_t j = i;
        int len = 0;
        while (!seen[j]) {
            seen[j] = 1;
            j = static_cast<std::size_t>(seq[j]);
            ++len;
        }
        odd ^= (len - 1) & 1;
    }
    return odd ? -1 : +1;
}

}  // namespace knotcs::detail
