#include "erspar/kwise.hpp"

#include <algorithm>
#include <cmath>

namespace erspar {

namespace {

// Lexicographically smallest irreducible polynomial over GF(2) per degree,
// leading bit included (degree 8 is the familiar 0x11b).
constexpr uint64_t kIrreducible[33] = {
    0,          0x3ULL,        0x7ULL,        0xbULL,        0x13ULL,      0x25ULL,
    0x43ULL,    0x83ULL,       0x11bULL,      0x203ULL,      0x409ULL,     0x805ULL,
    0x1009ULL,  0x201bULL,     0x4021ULL,     0x8003ULL,     0x1002bULL,   0x20009ULL,
    0x40009ULL, 0x80027ULL,    0x100009ULL,   0x200005ULL,   0x400003ULL,  0x800021ULL,
    0x100001bULL, 0x2000009ULL, 0x400001bULL, 0x8000027ULL,  0x10000003ULL,
    0x20000005ULL, 0x40000003ULL, 0x80000009ULL, 0x10000008dULL};

int ceil_log2(uint64_t x) {
    int r = 0;
    while ((1ULL << r) < x) ++r;
    return r;
}

} // namespace

uint64_t GF2Field::modulus_for(int degree) {
    if (degree < 1 || degree > 32)
        throw OutOfRange("GF2Field: degree must be in [1,32], got " + std::to_string(degree));
    return kIrreducible[degree];
}

GF2Field::GF2Field(int degree) : deg(degree), poly(modulus_for(degree)) {}

uint64_t GF2Field::mul(uint64_t a, uint64_t b) const {
    uint64_t r = 0;
    while (b) {
        if (b & 1) r ^= a;
        b >>= 1;
        a <<= 1;
        if ((a >> deg) & 1) a ^= poly;
    }
    return r;
}

std::vector<double> truncate_marginals(const std::vector<double>& p, int t) {
    if (t < 1) throw OutOfRange("truncate_marginals: t must be >= 1");
    std::vector<double> out;
    out.reserve(p.size());
    const double scale = std::ldexp(1.0, t);
    for (double pi : p) {
        if (!(pi >= 0.0 && pi <= 1.0))
            throw OutOfRange("truncate_marginals: probability outside [0,1]");
        out.push_back(std::floor(scale * pi) / scale);
    }
    return out;
}

KWiseSpace::KWiseSpace(const std::vector<double>& p, int k, int t)
    : k_(k), t_(t), field_log_(0), field_(1) {
    if (k < 1) throw OutOfRange("KWiseSpace: k must be >= 1");
    if (t < 1 || t > 32) throw OutOfRange("KWiseSpace: t must be in [1,32]");
    if (p.empty()) throw OutOfRange("KWiseSpace: need at least one coordinate");
    field_log_ = std::max(t, ceil_log2(p.size()));
    if (field_log_ > 32) throw OutOfRange("KWiseSpace: field degree above 32");
    field_ = GF2Field(field_log_);
    const double scale = std::ldexp(1.0, t);
    marg_num_.reserve(p.size());
    for (double pi : p) {
        if (!(pi >= 0.0 && pi <= 1.0))
            throw OutOfRange("KWiseSpace: probability outside [0,1]");
        marg_num_.push_back(static_cast<uint32_t>(std::floor(scale * pi)));
    }
}

double KWiseSpace::marginal(int i) const {
    return static_cast<double>(marg_num_[i]) / std::ldexp(1.0, t_);
}

uint64_t KWiseSpace::seed_count() const {
    const int bits = log2_seed_count();
    if (bits > 63)
        throw Overflow("seed_count: space has 2^" + std::to_string(bits) + " seeds");
    return 1ULL << bits;
}

Seed KWiseSpace::seed_from_index(uint64_t index) const {
    const int bits = log2_seed_count();
    if (bits <= 63 && index >= (1ULL << bits))
        throw SeedOutOfRange("seed_from_index: index " + std::to_string(index) +
                             " >= 2^" + std::to_string(bits));
    Seed s;
    s.coeffs.resize(k_);
    const uint64_t mask = (field_log_ == 64) ? ~0ULL : ((1ULL << field_log_) - 1);
    for (int j = 0; j < k_; ++j) {
        s.coeffs[j] = static_cast<uint32_t>(index & mask);
        index >>= field_log_;
    }
    return s;
}

uint64_t KWiseSpace::seed_index(const Seed& s) const {
    const int bits = log2_seed_count();
    if (bits > 63) throw Overflow("seed_index: space has more than 2^63 seeds");
    uint64_t idx = 0;
    for (int j = k_ - 1; j >= 0; --j) idx = (idx << field_log_) | s.coeffs[j];
    return idx;
}

std::vector<uint8_t> KWiseSpace::sample_at(const Seed& s) const {
    if (static_cast<int>(s.coeffs.size()) != k_)
        throw SeedOutOfRange("sample_at: seed has wrong coefficient count");
    const uint64_t limit = 1ULL << field_log_;
    for (uint32_t c : s.coeffs)
        if (c >= limit) throw SeedOutOfRange("sample_at: coefficient outside the field");

    std::vector<uint8_t> bits(marg_num_.size());
    const int shift = field_log_ - t_;
    for (size_t i = 0; i < marg_num_.size(); ++i) {
        const uint64_t point = i; // i-th field element in the fixed enumeration
        uint64_t val = s.coeffs[k_ - 1];
        for (int j = k_ - 2; j >= 0; --j) val = field_.mul(val, point) ^ s.coeffs[j];
        const uint64_t threshold = static_cast<uint64_t>(marg_num_[i]) << shift;
        bits[i] = val < threshold ? 1 : 0;
    }
    return bits;
}

SeedStream::SeedStream(const KWiseSpace& space) : space_(&space), fresh_(true) {
    current_.coeffs.assign(space.k(), 0);
    const int bits = space.log2_seed_count();
    remaining_ = bits > 63 ? ~0ULL : (1ULL << bits);
}

SeedStream::SeedStream(const KWiseSpace& space, uint64_t first, uint64_t count)
    : space_(&space), remaining_(count), fresh_(true) {
    const int bits = space.log2_seed_count();
    current_.coeffs.assign(space.k(), 0);
    if (bits <= 63) {
        const uint64_t total = 1ULL << bits;
        if (first > total || count > total - first)
            throw SeedOutOfRange("SeedStream: range beyond the seed space");
        if (count > 0) current_ = space.seed_from_index(first);
    } else {
        // Wide spaces are only enumerated from the front.
        if (first != 0) throw Overflow("SeedStream: offset enumeration needs <= 63 index bits");
    }
}

void SeedStream::advance() {
    const uint32_t mask = static_cast<uint32_t>((1ULL << space_->field_log()) - 1);
    for (auto& c : current_.coeffs) {
        c = (c + 1) & mask;
        if (c != 0) return;
    }
}

bool SeedStream::next(Seed& out) {
    if (remaining_ == 0) return false;
    if (!fresh_) advance();
    fresh_ = false;
    --remaining_;
    out = current_;
    return true;
}

bool check_kwise_bruteforce(const KWiseSpace& space, int k_check) {
    const int bits = space.log2_seed_count();
    if (bits > 24) throw TooLarge("check_kwise_bruteforce: more than 2^24 seeds");
    const int m = space.m();
    if (m > 64) throw TooLarge("check_kwise_bruteforce: more than 64 coordinates");
    if (k_check < 1) throw OutOfRange("check_kwise_bruteforce: k_check must be >= 1");
    k_check = std::min(k_check, m);
    if (static_cast<long>(k_check) * space.t() > 100)
        throw TooLarge("check_kwise_bruteforce: subset size times precision too large");

    const uint64_t total = 1ULL << bits;
    std::vector<uint64_t> samples(total);
    Seed s;
    SeedStream stream(space);
    uint64_t idx = 0;
    while (stream.next(s)) {
        const auto bitsv = space.sample_at(s);
        uint64_t mask = 0;
        for (int i = 0; i < m; ++i)
            if (bitsv[i]) mask |= 1ULL << i;
        samples[idx++] = mask;
    }

    // Iterate subsets of each size j <= k_check in combination order.
    std::vector<int> comb;
    std::vector<uint64_t> counts;
    for (int j = 1; j <= k_check; ++j) {
        comb.resize(j);
        for (int i = 0; i < j; ++i) comb[i] = i;
        while (true) {
            counts.assign(1ULL << j, 0);
            for (uint64_t mask : samples) {
                uint32_t pattern = 0;
                for (int b = 0; b < j; ++b) pattern |= ((mask >> comb[b]) & 1) << b;
                ++counts[pattern];
            }
            for (uint32_t pattern = 0; pattern < (1u << j); ++pattern) {
                // Exact comparison: count * 2^(j t) == prod(factors) * 2^(k t').
                unsigned __int128 lhs = counts[pattern];
                lhs <<= static_cast<unsigned>(j) * space.t();
                unsigned __int128 rhs = 1;
                for (int b = 0; b < j; ++b) {
                    const uint32_t c = space.marginal_numerator(comb[b]);
                    rhs *= (pattern >> b) & 1 ? c : (1u << space.t()) - c;
                }
                rhs <<= bits;
                if (lhs != rhs) return false;
            }
            int i = j - 1;
            while (i >= 0 && comb[i] == m - j + i) --i;
            if (i < 0) break;
            ++comb[i];
            for (int b = i + 1; b < j; ++b) comb[b] = comb[b - 1] + 1;
        }
    }
    return true;
}

} // namespace erspar
