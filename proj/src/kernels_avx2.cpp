#include <cqc/kernels.hpp>

#if CQC_HAVE_AVX2_KERNELS

#include <immintrin.h>

#include <bit>

namespace cqc::kernels::avx2 {

namespace {
    // Nibble-table popcount (Mula et al.), summed per 64-bit lane.
    __attribute__((target("avx2"))) inline __m256i popcount_lanes(__m256i v)
    {
        const __m256i table = _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4,
            0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
        const __m256i low = _mm256_set1_epi8(0x0f);
        __m256i lo = _mm256_and_si256(v, low);
        __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low);
        __m256i cnt = _mm256_add_epi8(_mm256_shuffle_epi8(table, lo), _mm256_shuffle_epi8(table, hi));
        return _mm256_sad_epu8(cnt, _mm256_setzero_si256());
    }

    __attribute__((target("avx2"))) inline std::size_t hsum(__m256i acc)
    {
        alignas(32) std::uint64_t lanes[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), acc);
        return lanes[0] + lanes[1] + lanes[2] + lanes[3];
    }
}

__attribute__((target("avx2"))) void and_into(Word* dst, const Word* src, std::size_t words)
{
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        __m256i a = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(dst + i));
        __m256i b = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(src + i));
        _mm256_storeu_si256(reinterpret_cast<__m256i*>(dst + i), _mm256_and_si256(a, b));
    }
    for (; i < words; ++i)
        dst[i] &= src[i];
}

__attribute__((target("avx2"))) std::size_t popcount(const Word* a, std::size_t words)
{
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4)
        acc = _mm256_add_epi64(acc, popcount_lanes(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i))));
    std::size_t c = hsum(acc);
    for (; i < words; ++i)
        c += std::popcount(a[i]);
    return c;
}

__attribute__((target("avx2"))) std::size_t and_popcount(const Word* a, const Word* b, std::size_t words)
{
    __m256i acc = _mm256_setzero_si256();
    std::size_t i = 0;
    for (; i + 4 <= words; i += 4) {
        __m256i x = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        __m256i y = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        acc = _mm256_add_epi64(acc, popcount_lanes(_mm256_and_si256(x, y)));
    }
    std::size_t c = hsum(acc);
    for (; i < words; ++i)
        c += std::popcount(a[i] & b[i]);
    return c;
}

}  // namespace cqc::kernels::avx2

#endif
