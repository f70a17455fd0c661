#include "modisperse/util.hpp"

#include <cstdlib>
#include <thread>

namespace modisperse {

int resolve_threads(int requested) {
    if (requested < 0) requested = 0;
    if (requested == 0) {
        if (const char* env = std::getenv("MODISPERSE_THREADS")) {
            requested = std::atoi(env);
        }
    }
    if (requested == 0) {
        requested = static_cast<int>(std::thread::hardware_concurrency());
    }
    return requested > 0 ? requested : 1;
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn) {
    threads = resolve_threads(threads);
    if (threads <= 1 || n <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::size_t workers = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("least_squares: need >= 2 matching points");
    }
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw NumericalError("least_squares: degenerate abscissa");
    LinearFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

}  // namespace modisperse
