#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

namespace netcert::detail {

struct ArgMax {
    double value = -std::numeric_limits<double>::infinity();
    std::uint64_t index = 0;

    // larger value wins; exact ties go to the smaller index, so the
    // combined result does not depend on how the range was chunked
    void offer(double v, std::uint64_t i) {
        if (v > value || (v == value && i < index)) {
            value = v;
            index = i;
        }
    }
};

/// Evaluates eval(i) for i in [0, count) on all hardware threads and returns the maximum.
inline ArgMax parallel_argmax(std::uint64_t count, const std::function<double(std::uint64_t)>& eval) {
    const std::uint64_t hw = std::max(1U, std::thread::hardware_concurrency());
    const std::uint64_t workers = std::min<std::uint64_t>(hw, std::max<std::uint64_t>(1, count / 256));
    std::vector<ArgMax> partial(workers);
    auto run = [&](std::uint64_t w) {
        const std::uint64_t lo = count * w / workers;
        const std::uint64_t hi = count * (w + 1) / workers;
        for (std::uint64_t i = lo; i < hi; ++i) partial[w].offer(eval(i), i);
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::uint64_t w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    ArgMax best;
    for (const auto& p : partial) best.offer(p.value, p.index);
    return best;
}

}  // namespace netcert::detail
