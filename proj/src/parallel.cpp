#include "otto/parallel.hpp"

#include <atomic>

namespace otto {

namespace {
std::atomic<int> g_threads{0};
}

void set_default_threads(int n) noexcept { g_threads = n; }

int default_threads() noexcept {
    const int n = g_threads.load();
    if (n > 0) return n;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace otto
