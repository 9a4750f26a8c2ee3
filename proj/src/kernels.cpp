#include <cqc/kernels.hpp>

namespace cqc::kernels {

namespace {
    struct Table {
        Backend backend;
        void (*and_into)(Word*, const Word*, std::size_t);
        std::size_t (*popcount)(const Word*, std::size_t);
        std::size_t (*and_popcount)(const Word*, const Word*, std::size_t);
    };

    Table select()
    {
#if CQC_HAVE_AVX2_KERNELS
        if (avx2_available())
            return {Backend::avx2, avx2::and_into, avx2::popcount, avx2::and_popcount};
#endif
        return {Backend::scalar, scalar::and_into, scalar::popcount, scalar::and_popcount};
    }

    const Table& table()
    {
        static const Table t = select();
        return t;
    }
}

bool avx2_available()
{
#if CQC_HAVE_AVX2_KERNELS
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend active_backend() { return table().backend; }

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

void and_into(Word* dst, const Word* src, std::size_t words) { table().and_into(dst, src, words); }

std::size_t popcount(const Word* a, std::size_t words) { return table().popcount(a, words); }

std::size_t and_popcount(const Word* a, const Word* b, std::size_t words)
{
    return table().and_popcount(a, b, words);
}

}  // namespace cqc::kernels
