#include "kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace adder::kern {
namespace {

const Backend* pick_auto() {
    if (const Backend* b = avx2_backend()) return b;
    if (const Backend* b = neon_backend()) return b;
    return scalar_backend();
}

const Backend* initial_choice() {
    if (const char* env = std::getenv("ADDER_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return scalar_backend();
        if (std::strcmp(env, "avx2") == 0 && avx2_backend()) return avx2_backend();
        if (std::strcmp(env, "neon") == 0 && neon_backend()) return neon_backend();
    }
    return pick_auto();
}

const Backend*& current() {
    static const Backend* b = initial_choice();
    return b;
}

} // namespace

const Backend& active() { return *current(); }

bool select(const char* name) {
    if (name == nullptr) {
        current() = pick_auto();
        return true;
    }
    const Backend* b = nullptr;
    if (std::strcmp(name, "scalar") == 0) b = scalar_backend();
    else if (std::strcmp(name, "avx2") == 0) b = avx2_backend();
    else if (std::strcmp(name, "neon") == 0) b = neon_backend();
    if (!b) return false;
    current() = b;
    return true;
}

} // namespace adder::kern
