#pragma once

// Exact linear algebra over GF(q): matrices, reduced row echelon form,
// systematic form, dual bases, minimum distance by message enumeration,
// shortening and puncturing, and minimal dual codewords. Everything is
// deterministic; elimination always picks the leftmost pivot column and the
// topmost usable row.

#include "asbpir/field.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace asbpir {

// Coordinate vector over a Field, entries are element encodings.
using Vec = std::vector<uint8_t>;

constexpr uint64_t kDefaultEnumerationCap = uint64_t{1} << 24;

class Matrix {
  public:
    Matrix(const Field& f, int rows, int cols)
        : f_(&f), rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, 0) {
        if (rows < 0 || cols < 0) throw std::invalid_argument("Matrix: negative shape");
    }

    static Matrix from_rows(const Field& f, const std::vector<Vec>& rows) {
        const int r = static_cast<int>(rows.size());
        const int c = r == 0 ? 0 : static_cast<int>(rows[0].size());
        Matrix m(f, r, c);
        for (int i = 0; i < r; ++i) {
            if (static_cast<int>(rows[i].size()) != c)
                throw std::invalid_argument("Matrix::from_rows: ragged rows");
            for (int j = 0; j < c; ++j) m.set(i, j, rows[i][j]);
        }
        return m;
    }

    static Matrix identity(const Field& f, int k) {
        Matrix m(f, k, k);
        for (int i = 0; i < k; ++i) m.set(i, i, 1);
        return m;
    }

    const Field& field() const { return *f_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }

    uint8_t at(int r, int c) const { return a_[static_cast<size_t>(r) * cols_ + c]; }
    void set(int r, int c, uint8_t v) {
        if (v >= f_->q()) throw std::invalid_argument("Matrix::set: entry out of range");
        a_[static_cast<size_t>(r) * cols_ + c] = v;
    }

    Vec row(int r) const {
        Vec out(cols_);
        for (int j = 0; j < cols_; ++j) out[j] = at(r, j);
        return out;
    }
    Vec column(int c) const {
        Vec out(rows_);
        for (int i = 0; i < rows_; ++i) out[i] = at(i, c);
        return out;
    }

    // Horizontal concatenation; fields must match.
    static Matrix hcat(const Matrix& a, const Matrix& b) {
        if (&a.field() != &b.field()) throw std::invalid_argument("Matrix::hcat: field mismatch");
        if (a.rows() != b.rows()) throw std::invalid_argument("Matrix::hcat: row mismatch");
        Matrix m(a.field(), a.rows(), a.cols() + b.cols());
        for (int i = 0; i < a.rows(); ++i) {
            for (int j = 0; j < a.cols(); ++j) m.set(i, j, a.at(i, j));
            for (int j = 0; j < b.cols(); ++j) m.set(i, a.cols() + j, b.at(i, j));
        }
        return m;
    }

    Matrix submatrix_columns(const std::vector<int>& cols) const {
        Matrix m(*f_, rows_, static_cast<int>(cols.size()));
        for (size_t j = 0; j < cols.size(); ++j) {
            if (cols[j] < 0 || cols[j] >= cols_)
                throw std::invalid_argument("Matrix::submatrix_columns: index out of range");
            for (int i = 0; i < rows_; ++i) m.set(i, static_cast<int>(j), at(i, cols[j]));
        }
        return m;
    }

    Matrix transpose() const {
        Matrix m(*f_, cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) m.set(j, i, at(i, j));
        return m;
    }

    friend bool operator==(const Matrix& a, const Matrix& b) {
        return a.f_ == b.f_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
    }

  private:
    const Field* f_;
    int rows_, cols_;
    std::vector<uint8_t> a_;
};

inline Matrix mat_mul(const Matrix& a, const Matrix& b) {
    if (&a.field() != &b.field()) throw std::invalid_argument("mat_mul: field mismatch");
    if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: shape mismatch");
    const Field& f = a.field();
    Matrix c(f, a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int l = 0; l < a.cols(); ++l) {
            const uint8_t v = a.at(i, l);
            if (v == 0) continue;
            for (int j = 0; j < b.cols(); ++j)
                c.set(i, j, f.add(c.at(i, j), f.mul(v, b.at(l, j))));
        }
    return c;
}

struct RrefResult {
    Matrix m;
    int rank = 0;
    std::vector<int> pivot_cols;
};

// Reduced row echelon form. `pivot_limit` restricts pivot search to the
// first so-many columns (used for augmented systems); elimination is still
// applied across the full width.
inline RrefResult rref(Matrix m, int pivot_limit = -1) {
    const Field& f = m.field();
    const int rows = m.rows(), cols = m.cols();
    const int limit = pivot_limit < 0 ? cols : pivot_limit;
    RrefResult res{std::move(m)};
    Matrix& a = res.m;
    int r = 0;
    for (int c = 0; c < limit && r < rows; ++c) {
        int pivot = -1;
        for (int i = r; i < rows; ++i)
            if (a.at(i, c) != 0) { pivot = i; break; }
        if (pivot < 0) continue;
        if (pivot != r)
            for (int j = 0; j < cols; ++j) {
                const uint8_t t = a.at(r, j);
                a.set(r, j, a.at(pivot, j));
                a.set(pivot, j, t);
            }
        const uint8_t s = f.inv(a.at(r, c));
        if (s != 1)
            for (int j = 0; j < cols; ++j) a.set(r, j, f.mul(s, a.at(r, j)));
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            const uint8_t v = a.at(i, c);
            if (v == 0) continue;
            for (int j = 0; j < cols; ++j)
                a.set(i, j, f.sub(a.at(i, j), f.mul(v, a.at(r, j))));
        }
        res.pivot_cols.push_back(c);
        ++r;
    }
    res.rank = r;
    return res;
}

inline int rank_of(const Matrix& m) { return rref(m).rank; }

// Generator matrix: k x n over GF(q) with full row rank k >= 1.
class GeneratorMatrix {
  public:
    explicit GeneratorMatrix(Matrix m) : m_(std::move(m)) {
        if (m_.rows() < 1) throw std::invalid_argument("GeneratorMatrix: k must be >= 1");
        if (m_.cols() < m_.rows())
            throw std::invalid_argument("GeneratorMatrix: n must be >= k");
        if (rank_of(m_) != m_.rows())
            throw std::invalid_argument("GeneratorMatrix: rows are not independent");
    }

    const Matrix& mat() const { return m_; }
    const Field& field() const { return m_.field(); }
    int k() const { return m_.rows(); }
    int n() const { return m_.cols(); }
    Vec column(int j) const { return m_.column(j); }

    friend bool operator==(const GeneratorMatrix& a, const GeneratorMatrix& b) {
        return a.m_ == b.m_;
    }

  private:
    Matrix m_;
};

struct SystematicForm {
    GeneratorMatrix systematic;        // equal to change_of_basis * G with columns permuted
    std::vector<int> column_permutation;  // systematic column j came from G column perm[j]
    Matrix change_of_basis;            // invertible k x k
};

// Bring G to the form (I_k | A) by row reduction plus a column permutation
// that moves the pivot columns to the front (non-pivot columns keep their
// relative order).
inline SystematicForm systematic_form(const GeneratorMatrix& g) {
    const Matrix& m = g.mat();
    const int k = g.k(), n = g.n();
    Matrix aug = Matrix::hcat(m, Matrix::identity(g.field(), k));
    RrefResult rr = rref(std::move(aug), n);
    Matrix change(g.field(), k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) change.set(i, j, rr.m.at(i, n + j));
    std::vector<int> perm = rr.pivot_cols;
    std::vector<bool> is_pivot(n, false);
    for (int c : rr.pivot_cols) is_pivot[c] = true;
    for (int c = 0; c < n; ++c)
        if (!is_pivot[c]) perm.push_back(c);
    Matrix sys(g.field(), k, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < k; ++i) sys.set(i, j, rr.m.at(i, perm[j]));
    return SystematicForm{GeneratorMatrix(std::move(sys)), std::move(perm), std::move(change)};
}

// Basis of the dual code as an (n-k) x n matrix H with G * H^T = 0.
// Zero-row matrix when n == k.
inline Matrix dual_basis(const GeneratorMatrix& g) {
    const int k = g.k(), n = g.n();
    const Field& f = g.field();
    SystematicForm sf = systematic_form(g);
    Matrix h_perm(f, n - k, n);
    // against (I_k | A) the dual is (-A^T | I_{n-k}); undo the permutation
    for (int i = 0; i < n - k; ++i) {
        for (int j = 0; j < k; ++j)
            h_perm.set(i, j, f.neg(sf.systematic.mat().at(j, k + i)));
        h_perm.set(i, k + i, 1);
    }
    Matrix h(f, n - k, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n - k; ++i) h.set(i, sf.column_permutation[j], h_perm.at(i, j));
    return h;
}

namespace detail {

// Visit every nonzero vector of the row space of `basis`. The odometer walk
// adds one generating row per step (a rollover adds it p times in total,
// which is zero in characteristic p), so each step costs O(n). Unit steps
// only generate prime-subfield multiples, so each row is spread into the
// prime-basis family {x^s row : 0 <= s < e} first.
template <typename Fn>
void for_each_in_rowspace(const Matrix& basis, uint64_t cap, Fn&& fn) {
    const Field& f = basis.field();
    const int d = basis.rows(), n = basis.cols();
    uint64_t total = 1;
    for (int i = 0; i < d; ++i) {
        total *= f.q();
        if (total > cap)
            throw std::length_error("rowspace enumeration exceeds cap");
    }
    std::vector<Vec> rows;
    for (int i = 0; i < d; ++i) {
        Vec b(n);
        for (int j = 0; j < n; ++j) b[j] = basis.at(i, j);
        rows.push_back(b);
        for (int s = 1; s < f.e(); ++s) {
            for (int j = 0; j < n; ++j) b[j] = f.mul(static_cast<uint8_t>(f.p()), b[j]);
            rows.push_back(b);
        }
    }
    Vec cur(n, 0);
    std::vector<int> digits(rows.size(), 0);
    for (uint64_t step = 1; step < total; ++step) {
        int i = 0;
        for (;; ++i) {
            for (int j = 0; j < n; ++j) cur[j] = f.add(cur[j], rows[i][j]);
            if (++digits[i] < f.p()) break;
            digits[i] = 0;
        }
        fn(const_cast<const Vec&>(cur));
    }
}

}  // namespace detail

// Minimum Hamming weight of a nonzero vector in the row space of `basis`.
// Returns nullopt for the zero code (no rows). Enumerates q^rows vectors.
inline std::optional<int> min_distance_rows(const Matrix& basis,
                                            uint64_t cap = kDefaultEnumerationCap) {
    if (basis.rows() == 0) return std::nullopt;
    int best = std::numeric_limits<int>::max();
    detail::for_each_in_rowspace(basis, cap, [&](const Vec& v) {
        int w = 0;
        for (uint8_t x : v) w += x != 0;
        if (w > 0 && w < best) best = w;
    });
    if (best == std::numeric_limits<int>::max()) return std::nullopt;
    return best;
}

inline int min_distance(const GeneratorMatrix& g, uint64_t cap = kDefaultEnumerationCap) {
    return *min_distance_rows(g.mat(), cap);
}

// Basis of the shortening {x in C : supp(x) a subset of `keep`}, returned as
// rows in the ambient length n. `keep` is a set of 0-based coordinates.
inline Matrix shorten_rows(const Matrix& basis, const std::vector<int>& keep) {
    const Field& f = basis.field();
    const int k = basis.rows(), n = basis.cols();
    std::vector<bool> keep_mask(n, false);
    for (int c : keep) {
        if (c < 0 || c >= n) throw std::invalid_argument("shorten: coordinate out of range");
        keep_mask[c] = true;
    }
    std::vector<int> outside;
    for (int c = 0; c < n; ++c)
        if (!keep_mask[c]) outside.push_back(c);
    // messages m with (m * basis) vanishing outside `keep`: left null space of
    // the outside column block, i.e. null space of its transpose
    Matrix bt(f, static_cast<int>(outside.size()), k);
    for (size_t i = 0; i < outside.size(); ++i)
        for (int j = 0; j < k; ++j) bt.set(static_cast<int>(i), j, basis.at(j, outside[i]));
    RrefResult rr = rref(bt);
    std::vector<bool> is_pivot(k, false);
    for (int c : rr.pivot_cols) is_pivot[c] = true;
    std::vector<Vec> messages;
    for (int c = 0; c < k; ++c) {
        if (is_pivot[c]) continue;
        Vec msg(k, 0);
        msg[c] = 1;
        for (size_t pi = 0; pi < rr.pivot_cols.size(); ++pi)
            msg[rr.pivot_cols[pi]] = f.neg(rr.m.at(static_cast<int>(pi), c));
        messages.push_back(std::move(msg));
    }
    Matrix out(f, static_cast<int>(messages.size()), n);
    for (size_t i = 0; i < messages.size(); ++i)
        for (int j = 0; j < n; ++j) {
            uint8_t acc = 0;
            for (int l = 0; l < k; ++l) acc = f.add(acc, f.mul(messages[i][l], basis.at(l, j)));
            out.set(static_cast<int>(i), j, acc);
        }
    return out;
}

inline Matrix shorten(const GeneratorMatrix& g, const std::vector<int>& keep) {
    return shorten_rows(g.mat(), keep);
}

// Basis of the projection of the code onto the coordinates `keep`
// (rows of length |keep|). `keep` must be nonempty.
inline Matrix puncture(const GeneratorMatrix& g, const std::vector<int>& keep) {
    if (keep.empty()) throw std::invalid_argument("puncture: empty coordinate set");
    Matrix proj = g.mat().submatrix_columns(keep);
    RrefResult rr = rref(std::move(proj));
    Matrix out(g.field(), rr.rank, static_cast<int>(keep.size()));
    for (int i = 0; i < rr.rank; ++i)
        for (int j = 0; j < out.cols(); ++j) out.set(i, j, rr.m.at(i, j));
    return out;
}

// Support-minimal dual codewords x with supp(x) inside `within` and
// i in supp(x), one representative per support (minimal codewords with equal
// support are scalar multiples), scaled so the first nonzero entry is 1.
// Sorted by support, lexicographically on the index sequence.
inline std::vector<Vec> minimal_dual_codewords_through(const GeneratorMatrix& g, int i,
                                                       const std::vector<int>& within,
                                                       uint64_t cap = kDefaultEnumerationCap) {
    const Field& f = g.field();
    const int n = g.n();
    if (i < 0 || i >= n) throw std::invalid_argument("minimal_dual_codewords_through: bad index");
    Matrix restricted = shorten_rows(dual_basis(g), within);
    if (restricted.rows() == 0) return {};
    struct Entry { std::vector<int> supp; Vec word; };
    std::vector<Entry> all;
    detail::for_each_in_rowspace(restricted, cap, [&](const Vec& v) {
        Entry ent;
        for (int j = 0; j < n; ++j)
            if (v[j] != 0) ent.supp.push_back(j);
        ent.word = v;
        all.push_back(std::move(ent));
    });
    std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
        if (a.supp.size() != b.supp.size()) return a.supp.size() < b.supp.size();
        return a.supp < b.supp;
    });
    all.erase(std::unique(all.begin(), all.end(),
                          [](const Entry& a, const Entry& b) { return a.supp == b.supp; }),
              all.end());
    std::vector<Entry> minimal;
    for (auto& ent : all) {
        bool dominated = false;
        for (const auto& m : minimal) {
            if (std::includes(ent.supp.begin(), ent.supp.end(), m.supp.begin(), m.supp.end())) {
                dominated = true;
                break;
            }
        }
        if (!dominated) minimal.push_back(std::move(ent));
    }
    std::vector<Vec> out;
    for (auto& ent : minimal) {
        if (!std::binary_search(ent.supp.begin(), ent.supp.end(), i)) continue;
        const uint8_t lead = ent.word[ent.supp.front()];
        if (lead != 1) {
            const uint8_t s = f.inv(lead);
            for (auto& x : ent.word) x = f.mul(s, x);
        }
        out.push_back(std::move(ent.word));
    }
    std::sort(out.begin(), out.end(), [](const Vec& a, const Vec& b) {
        std::vector<int> sa, sb;
        for (size_t j = 0; j < a.size(); ++j) if (a[j] != 0) sa.push_back(static_cast<int>(j));
        for (size_t j = 0; j < b.size(); ++j) if (b[j] != 0) sb.push_back(static_cast<int>(j));
        return sa < sb;
    });
    return out;
}

struct CodeMetrics {
    int n = 0;
    int k = 0;
    int d = 0;
    std::optional<int> d_perp;  // nullopt when the dual is the zero code (n == k)
    int gamma = 0;              // number of distinct column values
};

inline CodeMetrics code_metrics(const GeneratorMatrix& g, uint64_t cap = kDefaultEnumerationCap) {
    CodeMetrics m;
    m.n = g.n();
    m.k = g.k();
    m.d = min_distance(g, cap);
    m.d_perp = min_distance_rows(dual_basis(g), cap);
    std::vector<Vec> cols;
    for (int j = 0; j < g.n(); ++j) cols.push_back(g.column(j));
    std::sort(cols.begin(), cols.end());
    m.gamma = static_cast<int>(std::unique(cols.begin(), cols.end()) - cols.begin());
    return m;
}

}  // namespace asbpir
