#pragma once

#include <chrono>

namespace asianmc::detail {

class Stopwatch {
public:
    double elapsed_ms() const {
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
            .count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

template <typename Fn>
auto timed(Fn&& fn) {
    Stopwatch sw;
    auto e = fn();
    e.wall_time_ms = sw.elapsed_ms();
    return e;
}

}  // namespace asianmc::detail
