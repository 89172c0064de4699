#include "ctgboost/parallel.hpp"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace ctgboost {
namespace {

std::atomic<int> g_override{0};

int env_threads() {
    const char* raw = std::getenv("CTG_BOOST_THREADS");
    if (raw == nullptr) return 0;
    try {
        const int n = std::stoi(raw);
        return n > 0 ? n : 0;
    } catch (...) {
        return 0;
    }
}

}  // namespace

int worker_threads() {
    if (const int n = g_override.load(); n > 0) return n;
    if (const int n = env_threads(); n > 0) return n;
    return omp_get_max_threads();
}

void set_worker_threads(int n) { g_override.store(n > 0 ? n : 0); }

}  // namespace ctgboost
