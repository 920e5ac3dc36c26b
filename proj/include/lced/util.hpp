#ifndef LCED_UTIL_HPP
#define LCED_UTIL_HPP

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <future>
#include <string>
#include <vector>

namespace lced {

/// Round to `digits` significant decimal digits (nearest). Used to keep
/// scalarization weights on clean decimal values so traces reproduce
/// bit-for-bit across platforms.
inline double round_sig(double x, int digits = 12) {
    if (x == 0.0 || !std::isfinite(x)) return x;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*e", digits - 1, x);
    return std::strtod(buf, nullptr);
}

/// Result formatting convention: 12 significant digits everywhere.
inline std::string format_value(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

/// Shortest exact decimal for a double; round-trips via strtod.
inline std::string format_exact(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

/// Run fn(i) for i in [0, n) on up to `workers` threads. Results must be
/// written to pre-sized slots; output is then independent of scheduling.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    if (n <= 0) return;
    if (workers <= 1 || n == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto drain = [&] {
        for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    };
    int spawn = std::min(workers, n) - 1;
    std::vector<std::future<void>> tasks;
    tasks.reserve(spawn);
    for (int k = 0; k < spawn; ++k) tasks.push_back(std::async(std::launch::async, drain));
    drain();
    for (auto& t : tasks) t.get();  // rethrows the first worker exception
}

}  // namespace lced

#endif
