#include <cqc/kernels.hpp>

#include <gtest/gtest.h>

#include <bit>
#include <random>
#include <vector>

using namespace cqc::kernels;

namespace {
std::vector<Word> random_words(std::mt19937_64& rng, std::size_t n)
{
    std::vector<Word> v(n);
    for (auto& w : v)
        w = rng();
    return v;
}

std::size_t reference_popcount(const std::vector<Word>& v, std::size_t n)
{
    std::size_t c = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (int b = 0; b < 64; ++b)
            c += (v[i] >> b) & 1;
    return c;
}
}

TEST(Kernels, ScalarMatchesBitLoop)
{
    std::mt19937_64 rng(7);
    for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 17u, 64u}) {
        auto a = random_words(rng, n), b = random_words(rng, n);
        EXPECT_EQ(scalar::popcount(a.data(), n), reference_popcount(a, n));
        auto c = a;
        scalar::and_into(c.data(), b.data(), n);
        for (std::size_t i = 0; i < n; ++i)
            EXPECT_EQ(c[i], a[i] & b[i]);
        EXPECT_EQ(scalar::and_popcount(a.data(), b.data(), n), reference_popcount(c, n));
    }
}

#if CQC_HAVE_AVX2_KERNELS
TEST(Kernels, Avx2MatchesScalar)
{
    if (! avx2_available())
        GTEST_SKIP() << "no AVX2 on this CPU";
    std::mt19937_64 rng(11);
    for (std::size_t n = 0; n < 70; ++n) {
        auto a = random_words(rng, n), b = random_words(rng, n);
        if (n % 5 == 0)
            for (auto& w : a)
                w = ~Word(0);
        EXPECT_EQ(avx2::popcount(a.data(), n), scalar::popcount(a.data(), n));
        EXPECT_EQ(avx2::and_popcount(a.data(), b.data(), n), scalar::and_popcount(a.data(), b.data(), n));
        auto c1 = a, c2 = a;
        avx2::and_into(c1.data(), b.data(), n);
        scalar::and_into(c2.data(), b.data(), n);
        EXPECT_EQ(c1, c2);
    }
}
#endif

TEST(Kernels, DispatchReportsBackend)
{
    auto b = active_backend();
    EXPECT_EQ(b == Backend::avx2, avx2_available());
    EXPECT_NE(std::string(backend_name(b)), "");
    std::vector<Word> a{3, 5}, c{1, 4};
    EXPECT_EQ(and_popcount(a.data(), c.data(), 2), 2u);
}
