#include <atomic>
#include <stdexcept>
#include <string>

#include "esnoise/kernels.hpp"

namespace esnoise::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table_impl() noexcept;  // kernels_avx2.cpp
#endif
#if defined(__aarch64__)
const KernelTable& neon_table_impl() noexcept;  // kernels_neon.cpp
#endif

const KernelTable* avx2_table() noexcept {
#if defined(__x86_64__) || defined(_M_X64)
    static const bool supported =
        __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
    return supported ? &avx2_table_impl() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable* neon_table() noexcept {
#if defined(__aarch64__)
    return &neon_table_impl();  // baseline on aarch64
#else
    return nullptr;
#endif
}

std::vector<const KernelTable*> available_tables() {
    std::vector<const KernelTable*> tables{&scalar_table()};
    if (const KernelTable* t = avx2_table()) tables.push_back(t);
    if (const KernelTable* t = neon_table()) tables.push_back(t);
    return tables;
}

namespace {

const KernelTable* widest_available() noexcept {
    if (const KernelTable* t = avx2_table()) return t;
    if (const KernelTable* t = neon_table()) return t;
    return &scalar_table();
}

std::atomic<const KernelTable*>& active_slot() noexcept {
    static std::atomic<const KernelTable*> slot{widest_available()};
    return slot;
}

}  // namespace

const KernelTable& active_table() noexcept {
    return *active_slot().load(std::memory_order_relaxed);
}

void set_active_table(std::string_view name) {
    const KernelTable* pick = nullptr;
    if (name == "auto") {
        pick = widest_available();
    } else if (name == "scalar") {
        pick = &scalar_table();
    } else if (name == "avx2") {
        pick = avx2_table();
    } else if (name == "neon") {
        pick = neon_table();
    } else {
        throw std::invalid_argument("unknown kernel variant: " +
                                    std::string(name));
    }
    if (!pick)
        throw std::invalid_argument("kernel variant unavailable on this cpu: " +
                                    std::string(name));
    active_slot().store(pick, std::memory_order_relaxed);
}

}  // namespace esnoise::kernels
