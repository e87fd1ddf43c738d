#include "roughheat/fft.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace roughheat::fft {

namespace {

struct Tables {
    std::vector<std::size_t> bitrev;
    std::vector<std::complex<double>> tw;  // tw[h + j] = exp(-i*pi*j/h) for stage half-size h
};

std::shared_ptr<const Tables> tables_for(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::shared_ptr<const Tables>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    auto t = std::make_shared<Tables>();
    t->bitrev.resize(n);
    t->bitrev[0] = 0;
    for (std::size_t i = 1; i < n; ++i)
        t->bitrev[i] = (t->bitrev[i >> 1] >> 1) | ((i & 1) ? n >> 1 : 0);
    t->tw.resize(n);
    for (std::size_t h = 1; h < n; h <<= 1) {
        const double step = -M_PI / static_cast<double>(h);
        for (std::size_t j = 0; j < h; ++j)
            t->tw[h + j] = std::polar(1.0, step * static_cast<double>(j));
    }
    cache[n] = t;
    return t;
}

}  // namespace

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void transform(std::complex<double>* a, std::size_t n, bool inverse) {
    if (!is_pow2(n)) throw std::invalid_argument("fft: length must be a power of two");
    if (n == 1) return;
    auto t = tables_for(n);

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = t->bitrev[i];
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t h = 1; h < n; h <<= 1) {
        for (std::size_t base = 0; base < n; base += h << 1) {
            for (std::size_t j = 0; j < h; ++j) {
                std::complex<double> w = t->tw[h + j];
                if (inverse) w = std::conj(w);
                const std::complex<double> u = a[base + j];
                const std::complex<double> v = a[base + j + h] * w;
                a[base + j] = u + v;
                a[base + j + h] = u - v;
            }
        }
    }
    if (inverse) {
        const double inv = 1.0 / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) a[i] *= inv;
    }
}

void transform_2d(std::complex<double>* a, std::size_t n1, std::size_t n2, bool inverse) {
    for (std::size_t j2 = 0; j2 < n2; ++j2) transform(a + j2 * n1, n1, inverse);
    std::vector<std::complex<double>> col(n2);
    for (std::size_t j1 = 0; j1 < n1; ++j1) {
        for (std::size_t j2 = 0; j2 < n2; ++j2) col[j2] = a[j2 * n1 + j1];
        transform(col.data(), n2, inverse);
        for (std::size_t j2 = 0; j2 < n2; ++j2) a[j2 * n1 + j1] = col[j2];
    }
}

}  // namespace roughheat::fft
