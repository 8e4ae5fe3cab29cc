#pragma once

// Generator matrix families.

#include "asbpir/matrix.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace asbpir {

// Splits a prime power q into (p, e) and returns the matching field.
inline const Field& field_for_order(int q) {
    if (q < 2) throw std::invalid_argument("field_for_order: q must be at least 2");
    int p = 2;
    while (q % p != 0) {
        ++p;
        if (p * p > q) { p = q; break; }
    }
    int e = 0, rest = q;
    while (rest % p == 0) {
        rest /= p;
        ++e;
    }
    if (rest != 1) throw std::invalid_argument("field_for_order: q is not a prime power");
    return Field::get(p, e);
}

inline GeneratorMatrix identity(const Field& f, int k) {
    return GeneratorMatrix(Matrix::identity(f, k));
}

// (I_k | c) with c the all-(-1) column, so every row sums to zero.
inline GeneratorMatrix identity_parity(const Field& f, int k) {
    if (k < 1) throw std::invalid_argument("identity_parity: k must be >= 1");
    Matrix m(f, k, k + 1);
    for (int i = 0; i < k; ++i) {
        m.set(i, i, 1);
        m.set(i, k, f.minus_one());
    }
    return GeneratorMatrix(std::move(m));
}

// ceil(t/2) copies of each unit vector plus floor(t/2) copies of the all-ones
// column; length k*ceil(t/2) + floor(t/2).
inline GeneratorMatrix lbub_upper(const Field& f, int k, int t) {
    if (k < 1 || t < 1) throw std::invalid_argument("lbub_upper: k and t must be >= 1");
    const int unit_copies = (t + 1) / 2, ones_copies = t / 2;
    Matrix m(f, k, k * unit_copies + ones_copies);
    int col = 0;
    for (int i = 0; i < k; ++i)
        for (int c = 0; c < unit_copies; ++c) m.set(i, col++, 1);
    for (int c = 0; c < ones_copies; ++c, ++col)
        for (int i = 0; i < k; ++i) m.set(i, col, 1);
    return GeneratorMatrix(std::move(m));
}

inline int r_for_k(int k) {
    if (k < 1) throw std::invalid_argument("r_for_k: k must be >= 1");
    int r = 2;
    while (r * (r - 1) / 2 < k) ++r;
    return r;
}

namespace detail {

// The k x r block whose rows are k distinct weight-2 vectors of length r.
// Supports are drawn from the pairs crossing a near-equal split of the r
// positions into three consecutive blocks, in lexicographic order, then the
// within-block pairs. Keeping the within-block pairs for last lets the r
// columns fall into three groups with disjoint supports for as long as
// possible, which is what gives the parity column of G' its four recovery
// sets. For r <= 4 the order coincides with plain lexicographic.
inline Matrix weight2_block(const Field& f, int k, uint8_t entry) {
    const int r = r_for_k(k);
    const int s1 = r / 3, s2 = (r + 1) / 3;
    auto block = [&](int x) { return x < s1 ? 0 : x < s1 + s2 ? 1 : 2; };
    Matrix a(f, k, r);
    int row = 0;
    for (int pass = 0; pass < 2; ++pass)
        for (int p = 0; p < r && row < k; ++p)
            for (int s = p + 1; s < r && row < k; ++s) {
                if ((block(p) == block(s)) != (pass == 1)) continue;
                a.set(row, p, entry);
                a.set(row, s, entry);
                ++row;
            }
    return a;
}

inline Matrix ones_column(const Field& f, int k) {
    Matrix c(f, k, 1);
    for (int i = 0; i < k; ++i) c.set(i, 0, 1);
    return c;
}

}  // namespace detail

// (I_k | A), rows of A the first k weight-2 vectors of length r, where r is
// the least integer with C(r,2) >= k. Length k + r; optimal for t = 3.
inline GeneratorMatrix t3_construction(const Field& f, int k) {
    return GeneratorMatrix(Matrix::hcat(Matrix::identity(f, k), detail::weight2_block(f, k, 1)));
}

// G' = (I_k | A' | 1) with A' the t3 block negated, so all column sums vanish.
inline GeneratorMatrix t4_gprime(const Field& f, int k) {
    Matrix m = Matrix::hcat(Matrix::identity(f, k), detail::weight2_block(f, k, f.minus_one()));
    return GeneratorMatrix(Matrix::hcat(std::move(m), detail::ones_column(f, k)));
}

// G'' = G' with a second all-ones column appended.
inline GeneratorMatrix t4_gdoubleprime(const Field& f, int k) {
    Matrix m = Matrix::hcat(Matrix::identity(f, k), detail::weight2_block(f, k, f.minus_one()));
    m = Matrix::hcat(std::move(m), detail::ones_column(f, k));
    return GeneratorMatrix(Matrix::hcat(std::move(m), detail::ones_column(f, k)));
}

// Vandermonde generator on the first n field elements in encoding order.
// Any k columns are independent (distinct evaluation points); spot-verified
// for n <= 12 by inverting every k-subset.
inline GeneratorMatrix mds_rs(const Field& f, int n, int k) {
    if (k < 1 || n < k) throw std::invalid_argument("mds_rs: need 1 <= k <= n");
    if (n > f.q()) throw std::invalid_argument("mds_rs: n must not exceed q");
    Matrix m(f, k, n);
    for (int j = 0; j < n; ++j) {
        uint8_t pw = 1;
        for (int i = 0; i < k; ++i) {
            m.set(i, j, pw);
            pw = f.mul(pw, static_cast<uint8_t>(j));
        }
    }
    GeneratorMatrix g{std::move(m)};
    if (n <= 12) {
        std::vector<int> comb(k);
        for (int i = 0; i < k; ++i) comb[i] = i;
        while (true) {
            if (rank_of(g.mat().submatrix_columns(comb)) != k)
                throw std::logic_error("mds_rs: dependent column subset");
            int i = k - 1;
            while (i >= 0 && comb[i] == n - k + i) --i;
            if (i < 0) break;
            ++comb[i];
            for (int j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
        }
    }
    return g;
}

// Binary simplex generator: columns are all nonzero vectors of F_2^k in
// increasing integer encoding. Capped at k = 5; request families beyond that
// are out of checker scale.
inline GeneratorMatrix simplex(int k) {
    if (k < 1 || k > 5) throw std::invalid_argument("simplex: k must be in [1, 5]");
    const Field& f = Field::get(2, 1);
    const int n = (1 << k) - 1;
    Matrix m(f, k, n);
    for (int enc = 1; enc <= n; ++enc)
        for (int i = 0; i < k; ++i)
            if (enc >> i & 1) m.set(i, enc - 1, 1);
    return GeneratorMatrix(std::move(m));
}

inline GeneratorMatrix block_diagonal(const GeneratorMatrix& g1, const GeneratorMatrix& g2) {
    if (&g1.field() != &g2.field())
        throw std::invalid_argument("block_diagonal: fields differ");
    const Field& f = g1.field();
    Matrix m(f, g1.k() + g2.k(), g1.n() + g2.n());
    for (int i = 0; i < g1.k(); ++i)
        for (int j = 0; j < g1.n(); ++j) m.set(i, j, g1.mat().at(i, j));
    for (int i = 0; i < g2.k(); ++i)
        for (int j = 0; j < g2.n(); ++j) m.set(g1.k() + i, g1.n() + j, g2.mat().at(i, j));
    return GeneratorMatrix(std::move(m));
}

inline GeneratorMatrix replicate(const GeneratorMatrix& g, int lambda) {
    if (lambda < 1) throw std::invalid_argument("replicate: lambda must be >= 1");
    Matrix m = g.mat();
    for (int c = 1; c < lambda; ++c) m = Matrix::hcat(std::move(m), g.mat());
    return GeneratorMatrix(std::move(m));
}

// The two computer-search matrices shipped verbatim.
inline GeneratorMatrix paper_example(const std::string& tag) {
    if (tag == "gf2_4x8") {
        const Field& f = Field::get(2, 1);
        return GeneratorMatrix(Matrix::from_rows(f, {
            {1, 0, 0, 0, 0, 1, 1, 1},
            {0, 1, 0, 0, 1, 1, 1, 1},
            {0, 0, 1, 0, 0, 0, 1, 1},
            {0, 0, 0, 1, 1, 0, 1, 1},
        }));
    }
    if (tag == "gf3_5x10") {
        const Field& f = Field::get(3, 1);
        return GeneratorMatrix(Matrix::from_rows(f, {
            {1, 0, 0, 0, 0, 0, 2, 1, 0, 1},
            {0, 1, 0, 0, 0, 1, 0, 0, 1, 2},
            {0, 0, 1, 0, 0, 1, 0, 2, 0, 2},
            {0, 0, 0, 1, 0, 2, 1, 0, 2, 0},
            {0, 0, 0, 0, 1, 0, 2, 1, 1, 0},
        }));
    }
    throw std::invalid_argument("paper_example: unknown tag " + tag);
}

// CLI-facing family description.
struct FamilySpec {
    std::string family;
    int k = 0;
    int t = 0;
    int q = 0;
    int n = 0;       // mds_rs only
    int lambda = 0;  // replicate only
    std::string tag;  // paper_example only
};

// Builds the matrix a spec describes. replicate and block_diagonal need
// explicit base matrices and are not buildable from a bare spec.
inline GeneratorMatrix build_family(const FamilySpec& s) {
    auto need = [&](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument("build_family: " + s.family + " needs " + what);
    };
    if (s.family == "identity") {
        need(s.k >= 1 && s.q >= 2, "k and q");
        return identity(field_for_order(s.q), s.k);
    }
    if (s.family == "identity_parity") {
        need(s.k >= 1 && s.q >= 2, "k and q");
        return identity_parity(field_for_order(s.q), s.k);
    }
    if (s.family == "lbub_upper") {
        need(s.k >= 1 && s.t >= 1 && s.q >= 2, "k, t and q");
        return lbub_upper(field_for_order(s.q), s.k, s.t);
    }
    if (s.family == "t3") {
        need(s.k >= 1 && s.q >= 2, "k and q");
        return t3_construction(field_for_order(s.q), s.k);
    }
    if (s.family == "t4_gprime") {
        need(s.k >= 1 && s.q >= 2, "k and q");
        return t4_gprime(field_for_order(s.q), s.k);
    }
    if (s.family == "t4_gdoubleprime") {
        need(s.k >= 1 && s.q >= 2, "k and q");
        return t4_gdoubleprime(field_for_order(s.q), s.k);
    }
    if (s.family == "mds_rs") {
        need(s.k >= 1 && s.n >= 1 && s.q >= 2, "k, n and q");
        return mds_rs(field_for_order(s.q), s.n, s.k);
    }
    if (s.family == "simplex") {
        need(s.k >= 1, "k");
        return simplex(s.k);
    }
    if (s.family == "replicate") {
        need(false, "a base matrix (use the library call)");
    }
    if (s.family == "block_diagonal") {
        need(false, "two base matrices (use the library call)");
    }
    if (s.family == "paper_example") {
        need(!s.tag.empty(), "a tag");
        return paper_example(s.tag);
    }
    throw std::invalid_argument("build_family: unknown family " + s.family);
}

}  // namespace asbpir
