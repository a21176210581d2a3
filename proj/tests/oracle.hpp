// Test-only oracles, kept independent of the library implementation paths
// they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

namespace oracle {

struct Rng {
    std::mt19937_64 gen;

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform01() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

private:
    double spare_ = 0.0;
    bool has_spare_ = false;
};

// Lower-triangular Cholesky factor of a symmetric positive semi-definite
// matrix (row-major n x n). Adds diagonal jitter when a pivot collapses.
inline std::vector<double> cholesky(std::vector<double> a, std::size_t n) {
    double jitter = 0.0;
    for (int attempt = 0; attempt < 6; ++attempt) {
        std::vector<double> l(n * n, 0.0);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            for (std::size_t j = 0; j <= i; ++j) {
                double sum = a[i * n + j] + (i == j ? jitter : 0.0);
                for (std::size_t k = 0; k < j; ++k) {
                    sum -= l[i * n + k] * l[j * n + k];
                }
                if (i == j) {
                    if (sum <= 0.0) {
                        ok = false;
                        break;
                    }
                    l[i * n + i] = std::sqrt(sum);
                } else {
                    l[i * n + j] = sum / l[j * n + j];
                }
            }
        }
        if (ok) {
            return l;
        }
        jitter = jitter == 0.0 ? 1e-12 : jitter * 100.0;
    }
    throw std::runtime_error("cholesky failed: matrix not positive definite");
}

// Covariance matrix with the given diagonal: random correlation from a
// Gram matrix, rescaled so Sigma_ii equals variances[i].
inline std::vector<double> random_covariance(const std::vector<double>& variances, Rng& rng) {
    const std::size_t n = variances.size();
    std::vector<double> factor(n * n);
    for (double& v : factor) {
        v = rng.gaussian();
    }
    std::vector<double> gram(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                sum += factor[i * n + k] * factor[j * n + k];
            }
            gram[i * n + j] = sum;
        }
    }
    std::vector<double> sigma(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double r = gram[i * n + j] / std::sqrt(gram[i * n + i] * gram[j * n + j]);
            sigma[i * n + j] = r * std::sqrt(variances[i] * variances[j]);
        }
    }
    return sigma;
}

// Sample variance of sum_i w_i X_i with X ~ N(0, Sigma), over `draws` draws.
inline double weighted_sum_variance_mc(const std::vector<double>& weights,
                                       const std::vector<double>& covariance,
                                       std::size_t draws, std::uint64_t seed) {
    const std::size_t n = weights.size();
    const auto l = cholesky(covariance, n);
    Rng rng(seed);
    double sum = 0.0;
    double sum_sq = 0.0;
    std::vector<double> z(n);
    for (std::size_t d = 0; d < draws; ++d) {
        for (double& v : z) {
            v = rng.gaussian();
        }
        double y = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double x = 0.0;
            for (std::size_t k = 0; k <= i; ++k) {
                x += l[i * n + k] * z[k];
            }
            y += weights[i] * x;
        }
        sum += y;
        sum_sq += y * y;
    }
    const double m = static_cast<double>(draws);
    return (sum_sq - sum * sum / m) / (m - 1.0);
}

} // namespace oracle
