#include "torwalk/stats.hpp"

namespace torwalk {

double spectral_norm(std::span<const double> a, int d, SpectralNormParams p) {
    if (static_cast<int>(a.size()) != static_cast<int>(d) * d)
        throw std::invalid_argument("spectral_norm: bad matrix size");
    const std::size_t n = static_cast<std::size_t>(d);
    auto at = [&](int i, int j) { return a[static_cast<std::size_t>(i) * n + static_cast<std::size_t>(j)]; };

    // power iteration on A^T A with a deterministic, non-axis start vector
    std::vector<double> v(n), av(n), w(n);
    for (int i = 0; i < d; ++i) v[static_cast<std::size_t>(i)] = 1.0 + 0.3 * i;
    double nrm = 0.0;
    for (double x : v) nrm += x * x;
    nrm = std::sqrt(nrm);
    for (double& x : v) x /= nrm;

    double sigma2 = 0.0;
    for (int it = 0; it < p.max_iter; ++it) {
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) s += at(i, j) * v[static_cast<std::size_t>(j)];
            av[static_cast<std::size_t>(i)] = s;
        }
        for (int i = 0; i < d; ++i) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) s += at(j, i) * av[static_cast<std::size_t>(j)];
            w[static_cast<std::size_t>(i)] = s;
        }
        double wn = 0.0;
        for (double x : w) wn += x * x;
        wn = std::sqrt(wn);
        if (wn == 0.0) return 0.0;  // zero matrix
        const double next = wn;     // |A^T A v| -> sigma^2 at the fixed point
        for (std::size_t i = 0; i < n; ++i) v[i] = w[i] / wn;
        if (it > 0 && std::abs(next - sigma2) <= p.tol * std::max(1.0, next)) {
            sigma2 = next;
            break;
        }
        sigma2 = next;
    }
    return std::sqrt(sigma2);
}

}  // namespace torwalk
