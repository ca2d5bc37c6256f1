#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <random>
#include <set>

#include "erspar/kwise.hpp"

using namespace erspar;

namespace {

// Polynomial gcd over GF(2), bit-encoded.
uint64_t poly_gcd(uint64_t a, uint64_t b) {
    while (b) {
        while (a && 64 - __builtin_clzll(a) >= 64 - __builtin_clzll(b))
            a ^= b << ((64 - __builtin_clzll(a)) - (64 - __builtin_clzll(b)));
        std::swap(a, b);
    }
    return a;
}

uint64_t gf_pow_x(const GF2Field& f, uint64_t exponent_log2) {
    // x^(2^exponent_log2) by repeated squaring of x
    uint64_t v = 2;
    for (uint64_t i = 0; i < exponent_log2; ++i) v = f.mul(v, v);
    return v;
}

bool irreducible(int d) {
    if (d == 1) return true; // x + 1
    GF2Field f(d);
    if (gf_pow_x(f, d) != 2) return false; // x^(2^d) must equal x
    int n = d;
    for (int p = 2; p <= n; ++p) {
        if (n % p != 0) continue;
        while (n % p == 0) n /= p;
        const uint64_t g = gf_pow_x(f, d / p) ^ 2ULL; // x^(2^(d/p)) - x
        if (poly_gcd(g, f.poly) != 1) return false;
    }
    return true;
}

} // namespace

TEST_CASE("field moduli are irreducible") {
    for (int d = 1; d <= 32; ++d) CHECK(irreducible(d));
    CHECK_THROWS_AS(GF2Field(33), OutOfRange);

    // spot-check field axioms in GF(2^4): no zero divisors, x^15 = 1
    GF2Field f(4);
    for (uint64_t a = 1; a < 16; ++a)
        for (uint64_t b = 1; b < 16; ++b) CHECK(f.mul(a, b) != 0);
    uint64_t p = 1;
    for (int i = 0; i < 15; ++i) p = f.mul(p, 2);
    CHECK(p == 1);
}

TEST_CASE("truncate_marginals") {
    CHECK(truncate_marginals({0.3}, 3)[0] == 0.25);
    CHECK(truncate_marginals({1.0}, 5)[0] == 1.0);
    CHECK(truncate_marginals({0.5}, 4)[0] == 0.5);
    CHECK_THROWS_AS(truncate_marginals({1.5}, 3), OutOfRange);
    CHECK_THROWS_AS(truncate_marginals({-0.1}, 3), OutOfRange);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double p = u(rng);
        const int t = 1 + static_cast<int>(rng() % 10);
        const double pt = truncate_marginals({p}, t)[0];
        CHECK(p - pt >= 0.0);
        CHECK(p - pt <= std::ldexp(1.0, -t));
    }
}

TEST_CASE("space construction") {
    KWiseSpace s1({0.5, 0.5}, 2, 1);
    CHECK(s1.field_log() == 1);
    CHECK(s1.seed_count() == 4);

    KWiseSpace s2(std::vector<double>(5, 0.25), 3, 4);
    CHECK(s2.field_log() == 4);
    CHECK(s2.seed_count() == 1ULL << 12);

    KWiseSpace zero(std::vector<double>(4, 0.0), 2, 3);
    SeedStream stream(zero);
    Seed s;
    while (stream.next(s))
        for (uint8_t b : zero.sample_at(s)) CHECK(b == 0);
}

TEST_CASE("sample_at basics") {
    // seed 0 is the zero polynomial: bit i = 1 iff the marginal is positive
    KWiseSpace sp({0.5, 0.0, 1.0, 0.25}, 2, 2);
    auto bits = sp.sample_at(sp.seed_from_index(0));
    CHECK(bits == std::vector<uint8_t>{1, 0, 1, 1});

    // all-one marginals: every seed yields the all-ones vector
    KWiseSpace ones(std::vector<double>(3, 1.0), 2, 2);
    SeedStream stream(ones);
    Seed s;
    while (stream.next(s))
        for (uint8_t b : ones.sample_at(s)) CHECK(b == 1);

    // m=2, k=2, t=1, p=(1/2,1/2): the 4 seeds hit each outcome exactly once
    KWiseSpace half({0.5, 0.5}, 2, 1);
    std::map<std::vector<uint8_t>, int> tally;
    for (uint64_t i = 0; i < half.seed_count(); ++i)
        ++tally[half.sample_at(half.seed_from_index(i))];
    CHECK(tally.size() == 4);
    for (const auto& [outcome, count] : tally) {
        (void)outcome;
        CHECK(count == 1);
    }

    CHECK_THROWS_AS(half.seed_from_index(4), SeedOutOfRange);
    Seed bad;
    bad.coeffs = {7, 0};
    CHECK_THROWS_AS(half.sample_at(bad), SeedOutOfRange);
}

TEST_CASE("seed enumeration") {
    KWiseSpace sp(std::vector<double>(8, 0.5), 2, 3);
    CHECK(sp.log2_seed_count() == 6);
    CHECK(sp.seed_count() == 64);

    SeedStream stream(sp);
    Seed s;
    uint64_t expect = 0;
    while (stream.next(s)) CHECK(sp.seed_index(s) == expect++);
    CHECK(expect == 64);

    KWiseSpace tiny(std::vector<double>(2, 0.5), 1, 1);
    CHECK(tiny.seed_count() == 2);

    // partial range
    SeedStream part(sp, 10, 5);
    expect = 10;
    while (part.next(s)) CHECK(sp.seed_index(s) == expect++);
    CHECK(expect == 15);

    KWiseSpace wide(std::vector<double>(4, 0.5), 32, 2);
    CHECK(wide.log2_seed_count() == 64);
    CHECK_THROWS_AS(wide.seed_count(), Overflow);
}

TEST_CASE("determinism") {
    KWiseSpace sp(std::vector<double>{0.125, 0.875, 0.5, 0.25, 1.0}, 3, 3);
    Seed s = sp.seed_from_index(12345 % sp.seed_count());
    CHECK(sp.sample_at(s) == sp.sample_at(s));
}

TEST_CASE("exact marginals over the full space") {
    std::mt19937_64 rng(77);
    KWiseSpace sp({0.3, 0.6, 0.1, 0.95, 0.5}, 2, 3);
    std::vector<uint64_t> count(5, 0);
    SeedStream stream(sp);
    Seed s;
    while (stream.next(s)) {
        auto bits = sp.sample_at(s);
        for (int i = 0; i < 5; ++i) count[i] += bits[i];
    }
    for (int i = 0; i < 5; ++i) {
        // coordinate i is 1 in exactly marginal * 2^(k t') samples
        const uint64_t expect = static_cast<uint64_t>(sp.marginal_numerator(i))
                                << (sp.log2_seed_count() - sp.t());
        CHECK(count[i] == expect);
    }
}

TEST_CASE("check_kwise_bruteforce") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    // any space is 1-wise exact by construction
    KWiseSpace one({0.3, 0.8}, 1, 2);
    CHECK(check_kwise_bruteforce(one, 1));

    // m=6, k=3, t=2, random marginals: exact at k_check = 3
    for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> p(6);
        for (auto& x : p) x = u(rng);
        KWiseSpace sp(p, 3, 2);
        CHECK(check_kwise_bruteforce(sp, 3));
    }

    // a pairwise space must be exact at 2; 3-wise may fail
    KWiseSpace pair(std::vector<double>(4, 0.5), 2, 2);
    CHECK(check_kwise_bruteforce(pair, 2));

    KWiseSpace big(std::vector<double>(70, 0.5), 2, 2);
    CHECK_THROWS_AS(check_kwise_bruteforce(big, 2), TooLarge);
}
