#pragma once

// Bit-row primitives used by the homomorphism search to filter candidate
// images. Each routine has a portable scalar version and, on x86-64, an AVX2
// version; the exported entry points pick one at first use.

#include <cstddef>
#include <cstdint>

namespace cqc::kernels {

using Word = std::uint64_t;

constexpr std::size_t words_for(std::size_t bits) { return (bits + 63) / 64; }

namespace scalar {
    void and_into(Word* dst, const Word* src, std::size_t words);
    std::size_t popcount(const Word* a, std::size_t words);
    std::size_t and_popcount(const Word* a, const Word* b, std::size_t words);
}

#if defined(__x86_64__) || defined(_M_X64)
#define CQC_HAVE_AVX2_KERNELS 1
namespace avx2 {
    void and_into(Word* dst, const Word* src, std::size_t words);
    std::size_t popcount(const Word* a, std::size_t words);
    std::size_t and_popcount(const Word* a, const Word* b, std::size_t words);
}
#else
#define CQC_HAVE_AVX2_KERNELS 0
#endif

enum class Backend { scalar, avx2 };

// True when the AVX2 variants are compiled in and the CPU supports them.
bool avx2_available();
Backend active_backend();
const char* backend_name(Backend b);

void and_into(Word* dst, const Word* src, std::size_t words);
std::size_t popcount(const Word* a, std::size_t words);
std::size_t and_popcount(const Word* a, const Word* b, std::size_t words);

}  // namespace cqc::kernels
