#include <cqc/kernels.hpp>

#include <bit>

namespace cqc::kernels::scalar {

void and_into(Word* dst, const Word* src, std::size_t words)
{
    for (std::size_t i = 0; i < words; ++i)
        dst[i] &= src[i];
}

std::size_t popcount(const Word* a, std::size_t words)
{
    std::size_t c = 0;
    for (std::size_t i = 0; i < words; ++i)
        c += std::popcount(a[i]);
    return c;
}

std::size_t and_popcount(const Word* a, const Word* b, std::size_t words)
{
    std::size_t c = 0;
    for (std::size_t i = 0; i < words; ++i)
        c += std::popcount(a[i] & b[i]);
    return c;
}

}  // namespace cqc::kernels::scalar
