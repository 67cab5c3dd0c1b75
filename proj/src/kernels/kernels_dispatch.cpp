#include "greenforge/kernels.hpp"

#include <cstdlib>
#include <string>

#include "greenforge/error.hpp"

namespace greenforge::kernels {

#ifdef GREENFORGE_HAVE_AVX2
const KernelTable* avx2_table_or_null(); // kernels_avx2.cpp
#else
static const KernelTable* avx2_table_or_null() { return nullptr; }
#endif

const KernelTable* avx2() {
    return avx2_table_or_null();
}

namespace {

const KernelTable& resolve() {
    const char* env = std::getenv("GREENFORGE_KERNELS");
    const std::string choice = env ? env : "";
    if (choice.empty()) {
        const KernelTable* v = avx2();
        return v ? *v : scalar();
    }
    if (choice == "scalar") {
        return scalar();
    }
    if (choice == "avx2") {
        const KernelTable* v = avx2();
        if (!v) {
            throw DomainError("GREENFORGE_KERNELS=avx2 requested but AVX2/FMA is unavailable");
        }
        return *v;
    }
    throw DomainError("unknown GREENFORGE_KERNELS value: " + choice);
}

} // namespace

const KernelTable& active() {
    static const KernelTable& table = resolve();
    return table;
}

} // namespace greenforge::kernels
