#ifndef ERSPAR_KWISE_HPP
#define ERSPAR_KWISE_HPP

#include <cstdint>
#include <vector>

#include "erspar/errors.hpp"

namespace erspar {

// Arithmetic in GF(2^deg), elements encoded as bit patterns of integers below
// 2^deg, reduced modulo a fixed irreducible polynomial per degree (1..32).
struct GF2Field {
    int deg;
    uint64_t poly; // includes the leading x^deg bit

    explicit GF2Field(int degree);
    uint64_t mul(uint64_t a, uint64_t b) const;

    static uint64_t modulus_for(int degree); // throws OutOfRange beyond 32
};

// Floor each probability to a multiple of 2^-t. Throws OutOfRange when some
// p_i is outside [0,1].
std::vector<double> truncate_marginals(const std::vector<double>& p, int t);

// One point of a k-wise independent sample space: the k coefficients of a
// polynomial of degree < k over GF(2^field_log), constant coefficient first
// (= lowest field_log bits of the seed index).
struct Seed {
    std::vector<uint32_t> coeffs;
};

// k-wise independent sample space over m-coordinate bitvectors with t-bit
// truncated marginals. Coordinate i is 1 iff the seed polynomial evaluated at
// the i-th field element falls below the scaled marginal threshold; any k
// evaluations of a uniform polynomial are jointly uniform, which gives exact
// k-wise independence with the truncated marginals.
class KWiseSpace {
public:
    // Truncates p to t bits and fixes field_log = max{t, ceil(log2 m)}.
    KWiseSpace(const std::vector<double>& p, int k, int t);

    int m() const { return static_cast<int>(marg_num_.size()); }
    int k() const { return k_; }
    int t() const { return t_; }
    int field_log() const { return field_log_; }
    // Truncated marginal as a dyadic numerator: marginal(i) = numerator / 2^t.
    uint32_t marginal_numerator(int i) const { return marg_num_[i]; }
    double marginal(int i) const;

    int log2_seed_count() const { return k_ * field_log_; }
    // 2^(k * field_log); throws Overflow when that exceeds 2^63.
    uint64_t seed_count() const;

    Seed seed_from_index(uint64_t index) const; // throws SeedOutOfRange
    uint64_t seed_index(const Seed& s) const;   // throws Overflow when > 63 bits

    std::vector<uint8_t> sample_at(const Seed& s) const;

private:
    int k_;
    int t_;
    int field_log_;
    std::vector<uint32_t> marg_num_;
    GF2Field field_;

    friend class SeedStream;
};

// Ascending enumeration cursor over [first, first + count) seed indices.
// Multiple streams over disjoint ranges may run concurrently.
class SeedStream {
public:
    explicit SeedStream(const KWiseSpace& space);
    SeedStream(const KWiseSpace& space, uint64_t first, uint64_t count);
    // Fills `out` with the next seed; false when the range is exhausted.
    bool next(Seed& out);

private:
    const KWiseSpace* space_;
    Seed current_;
    uint64_t remaining_;
    bool fresh_;

    void advance();
};

// Exhaustively enumerates the seed space (must be <= 2^24 seeds, m <= 64) and
// checks the exact product law for every coordinate subset of size <=
// k_check. Counts are integers; equality is exact.
bool check_kwise_bruteforce(const KWiseSpace& space, int k_check);

} // namespace erspar

#endif
