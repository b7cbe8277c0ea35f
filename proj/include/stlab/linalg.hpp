#pragma once

#include "stlab/errors.hpp"
#include "stlab/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace stlab {

// Rows hold (column, value) pairs with strictly increasing columns.
struct SparseRationalMatrix {
    std::size_t cols = 0;
    std::vector<std::vector<std::pair<std::uint32_t, Rational>>> rows;
};

namespace linalg_detail {

struct IntRows {
    std::size_t cols = 0;
    std::vector<std::vector<std::pair<std::uint32_t, BigInt>>> rows;
};

// Scale each row to a primitive integer vector; rank is unchanged.
inline IntRows clear_denominators(const SparseRationalMatrix& m) {
    IntRows out;
    out.cols = m.cols;
    out.rows.reserve(m.rows.size());
    for (const auto& row : m.rows) {
        BigInt l = 1;
        for (const auto& [c, v] : row) l = boost::multiprecision::lcm(l, den(v));
        std::vector<std::pair<std::uint32_t, BigInt>> irow;
        BigInt g = 0;
        for (const auto& [c, v] : row) {
            BigInt e = num(v) * (l / den(v));
            if (e != 0) {
                g = boost::multiprecision::gcd(g, abs(e));
                irow.emplace_back(c, std::move(e));
            }
        }
        if (g > 1)
            for (auto& [c, e] : irow) e /= g;
        out.rows.push_back(std::move(irow));
    }
    return out;
}

// Fraction-free elimination (Bareiss) with column pivoting; exact over Z.
inline std::size_t bareiss_rank(const IntRows& m) {
    const std::size_t R = m.rows.size(), C = m.cols;
    if (R == 0 || C == 0) return 0;
    std::vector<std::vector<BigInt>> a(R, std::vector<BigInt>(C, 0));
    for (std::size_t i = 0; i < R; ++i)
        for (const auto& [c, v] : m.rows[i]) a[i][c] = v;

    BigInt prev = 1;
    std::size_t row = 0;
    for (std::size_t col = 0; col < C && row < R; ++col) {
        std::size_t sel = row;
        while (sel < R && a[sel][col] == 0) ++sel;
        if (sel == R) continue;
        if (sel != row) std::swap(a[sel], a[row]);
        const BigInt piv = a[row][col];
        for (std::size_t i = row + 1; i < R; ++i) {
            const BigInt f = a[i][col];
            for (std::size_t j = col + 1; j < C; ++j) {
                a[i][j] = (a[i][j] * piv - f * a[row][j]) / prev;
            }
            a[i][col] = 0;
        }
        prev = piv;
        ++row;
    }
    return row;
}

struct Barrett {
    std::uint64_t p;
    std::uint64_t magic;  // floor(2^64 / p)
    explicit Barrett(std::uint64_t p) : p(p), magic(~0ULL / p) {}
    std::uint64_t reduce(std::uint64_t x) const {
        std::uint64_t q = static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(x) * magic) >> 64);
        std::uint64_t r = x - q * p;
        while (r >= p) r -= p;
        return r;
    }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const { return reduce(a * b); }
};

inline std::uint64_t mod_pow(std::uint64_t b, std::uint64_t e, const Barrett& bar) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = bar.mul(r, b);
        b = bar.mul(b, b);
        e >>= 1;
    }
    return r;
}

inline std::uint64_t mod_inverse(std::uint64_t a, const Barrett& bar) {
    return mod_pow(a, bar.p - 2, bar);  // p prime
}

struct ModResult {
    std::uint64_t p = 0;
    std::size_t rank = 0;
    std::vector<std::uint32_t> pivot_cols;
    std::vector<std::uint32_t> free_cols;
    // kernel[f][i] = value at pivot column i of the kernel vector that has a 1
    // at free column free_cols[f] and 0 at every other free column.
    std::vector<std::vector<std::uint64_t>> kernel;
};

// Dense Gaussian elimination mod p with normalized pivot rows, then one
// back-substitution per free column. Primes are < 2^30 so q*b + carry fits u64.
inline ModResult eliminate_mod(const IntRows& m, std::uint64_t p) {
    const std::size_t R = m.rows.size(), C = m.cols;
    const Barrett bar(p);
    std::vector<std::vector<std::uint64_t>> a(R, std::vector<std::uint64_t>(C, 0));
    const BigInt bp = p;
    for (std::size_t i = 0; i < R; ++i)
        for (const auto& [c, v] : m.rows[i]) {
            BigInt r = v % bp;
            if (r < 0) r += bp;
            a[i][c] = r.template convert_to<std::uint64_t>();
        }

    ModResult res;
    res.p = p;
    std::size_t row = 0;
    for (std::uint32_t col = 0; col < C && row < R; ++col) {
        std::size_t sel = row;
        while (sel < R && a[sel][col] == 0) ++sel;
        if (sel == R) continue;
        if (sel != row) std::swap(a[sel], a[row]);
        const std::uint64_t inv = mod_inverse(a[row][col], bar);
        if (inv != 1) {
            auto& pr = a[row];
            for (std::size_t j = col; j < C; ++j)
                if (pr[j]) pr[j] = bar.mul(pr[j], inv);
        }
        const auto& pr = a[row];
        for (std::size_t i = row + 1; i < R; ++i) {
            const std::uint64_t f = a[i][col];
            if (!f) continue;
            const std::uint64_t nf = p - f;
            auto& ri = a[i];
            for (std::size_t j = col; j < C; ++j)
                ri[j] = bar.reduce(ri[j] + nf * pr[j]);
        }
        res.pivot_cols.push_back(col);
        ++row;
    }
    res.rank = row;

    std::vector<char> is_pivot(C, 0);
    for (auto c : res.pivot_cols) is_pivot[c] = 1;
    for (std::uint32_t c = 0; c < C; ++c)
        if (!is_pivot[c]) res.free_cols.push_back(c);

    const std::size_t r = res.rank;
    res.kernel.reserve(res.free_cols.size());
    for (std::uint32_t f : res.free_cols) {
        std::vector<std::uint64_t> x(r, 0);
        for (std::size_t i = r; i-- > 0;) {
            unsigned __int128 acc = a[i][f];
            for (std::size_t j = i + 1; j < r; ++j)
                acc += static_cast<unsigned __int128>(a[i][res.pivot_cols[j]]) * x[j];
            const std::uint64_t s = static_cast<std::uint64_t>(acc % p);
            x[i] = s == 0 ? 0 : p - s;  // pivot entry is 1 after normalization
        }
        res.kernel.push_back(std::move(x));
    }
    return res;
}

// Balanced rational reconstruction of a residue mod M: finds n/d with
// |n|, d <= sqrt(M/2), if one exists.
inline std::optional<Rational> rational_reconstruct(BigInt a, const BigInt& M) {
    a %= M;
    if (a < 0) a += M;
    const BigInt bound = boost::multiprecision::sqrt((M - 1) / 2);
    BigInt r0 = M, r1 = a, t0 = 0, t1 = 1;
    while (r1 > bound) {
        const BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        r0 = r1; r1 = r2;
        BigInt t2 = t0 - q * t1;
        t0 = t1; t1 = t2;
    }
    if (t1 == 0 || abs(t1) > bound) return std::nullopt;
    if (boost::multiprecision::gcd(abs(r1), abs(t1)) != 1) return std::nullopt;
    if (t1 < 0) return Rational(-r1, -t1);
    return Rational(r1, t1);
}

inline bool verify_kernel_vector(const IntRows& m, const std::vector<Rational>& v) {
    BigInt l = 1;
    for (const auto& x : v) l = boost::multiprecision::lcm(l, den(x));
    std::vector<BigInt> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = num(v[i]) * (l / den(v[i]));
    for (const auto& row : m.rows) {
        BigInt acc = 0;
        for (const auto& [c, e] : row) acc += e * w[c];
        if (acc != 0) return false;
    }
    return true;
}

inline constexpr std::uint64_t rank_primes[] = {
    1073741789ULL, 1073741783ULL, 1073741741ULL, 1073741723ULL, 1073741719ULL,
    1073741717ULL, 1073741689ULL, 1073741671ULL, 1073741663ULL, 1073741651ULL,
    1073741621ULL, 1073741567ULL, 1073741561ULL, 1073741527ULL, 1073741503ULL,
    1073741477ULL, 1073741467ULL, 1073741441ULL, 1073741419ULL, 1073741399ULL,
    1073741387ULL, 1073741381ULL, 1073741371ULL, 1073741329ULL};

struct CrtState {
    BigInt modulus = 1;
    std::vector<std::vector<BigInt>> kernel;  // residues matching ModResult layout
    std::size_t primes_used = 0;
};

inline void crt_merge(CrtState& st, const ModResult& res) {
    const BigInt p = res.p;
    if (st.primes_used == 0) {
        st.modulus = p;
        st.kernel.assign(res.kernel.size(), {});
        for (std::size_t f = 0; f < res.kernel.size(); ++f) {
            st.kernel[f].reserve(res.kernel[f].size());
            for (auto x : res.kernel[f]) st.kernel[f].emplace_back(x);
        }
        st.primes_used = 1;
        return;
    }
    const BigInt M = st.modulus;
    const BigInt Mmodp = M % p;
    // inverse of M mod p
    const Barrett bar(res.p);
    const std::uint64_t minv =
        mod_inverse(Mmodp.template convert_to<std::uint64_t>() % res.p, bar);
    for (std::size_t f = 0; f < st.kernel.size(); ++f)
        for (std::size_t i = 0; i < st.kernel[f].size(); ++i) {
            const BigInt& r1 = st.kernel[f][i];
            const std::uint64_t r1p = (r1 % p).template convert_to<std::uint64_t>();
            const std::uint64_t r2 = res.kernel[f][i];
            const std::uint64_t dlt = r2 >= r1p ? r2 - r1p : r2 + res.p - r1p;
            const std::uint64_t mult = bar.mul(dlt, minv);
            st.kernel[f][i] = r1 + M * mult;
        }
    st.modulus = M * p;
    ++st.primes_used;
}

}  // namespace linalg_detail

// Exact rank over the rationals (equal to the rank over C for rational data).
//
// Small matrices go through fraction-free Bareiss elimination. Larger ones use
// modular elimination as an accelerator whose answer is then confirmed exactly:
// a nonzero r x r minor mod p proves rank >= r over Q, and cols - r exactly
// verified kernel vectors (reconstructed from the modular solves, checked with
// integer arithmetic against the original rows) prove rank <= r. A prime that
// collapses the rank only costs a retry; it cannot produce a wrong answer.
inline std::size_t exact_rank(const SparseRationalMatrix& m) {
    using namespace linalg_detail;
    const std::size_t R = m.rows.size(), C = m.cols;
    if (R == 0 || C == 0) return 0;
    const IntRows im = clear_denominators(m);
    if (std::min(R, C) <= 64) return bareiss_rank(im);

    using Key = std::pair<std::size_t, std::vector<std::uint32_t>>;
    std::map<Key, CrtState> states;
    std::map<Key, ModResult> shapes;

    for (std::uint64_t p : rank_primes) {
        const ModResult res = eliminate_mod(im, p);
        if (res.rank == std::min(R, C)) return res.rank;  // full rank: certified by the minor alone
        const Key key{res.rank, res.pivot_cols};
        crt_merge(states[key], res);
        if (!shapes.count(key)) shapes.emplace(key, res);

        // try to certify the best (largest-rank) candidate seen so far
        const auto best = std::max_element(states.begin(), states.end(),
                                           [](const auto& a, const auto& b) {
                                               if (a.first.first != b.first.first)
                                                   return a.first.first < b.first.first;
                                               return a.second.primes_used < b.second.primes_used;
                                           });
        const Key& bkey = best->first;
        const CrtState& st = best->second;
        const ModResult& shape = shapes.at(bkey);
        const std::size_t r = bkey.first;

        bool ok = true;
        std::vector<std::vector<Rational>> vectors;
        vectors.reserve(shape.free_cols.size());
        for (std::size_t f = 0; f < shape.free_cols.size() && ok; ++f) {
            std::vector<Rational> v(C, Rational(0));
            v[shape.free_cols[f]] = 1;
            for (std::size_t i = 0; i < r && ok; ++i) {
                auto rec = rational_reconstruct(st.kernel[f][i], st.modulus);
                if (!rec) ok = false;
                else v[shape.pivot_cols[i]] = *rec;
            }
            if (ok) vectors.push_back(std::move(v));
        }
        if (ok)
            for (const auto& v : vectors)
                if (!verify_kernel_vector(im, v)) { ok = false; break; }
        if (ok) return r;  // rank >= r from the mod-p minor, rank <= r from the kernel
    }
    throw RankUncertified("exact_rank: could not certify the rank within the prime budget");
}

}  // namespace stlab
