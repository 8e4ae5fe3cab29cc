#pragma once

// Closed-form length bounds and distance-based demand bounds. Everything is
// exact: integers, ceilings by integer division, and a small rational type
// for the bounds that need one.

#include "asbpir/constructions.hpp"
#include "asbpir/matrix.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace asbpir {

struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw std::invalid_argument("Rational: zero denominator");
        if (den < 0) { num = -num; den = -den; }
        const long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
    }

    long long floor() const { return num >= 0 ? num / den : -((-num + den - 1) / den); }
    long long ceil() const { return num >= 0 ? (num + den - 1) / den : -(-num / den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num * b.den < b.num * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }

    std::string str() const {
        return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
    }
};

enum class BoundKind { lower, upper, exact, unknown };

inline std::string to_string(BoundKind k) {
    switch (k) {
        case BoundKind::lower: return "lower";
        case BoundKind::upper: return "upper";
        case BoundKind::exact: return "exact";
        case BoundKind::unknown: return "unknown";
    }
    throw std::invalid_argument("to_string: bad BoundKind");
}

struct BoundEntry {
    std::string name;
    BoundKind kind = BoundKind::unknown;
    long long value = 0;  // meaningless for kind == unknown
    std::string note;
};

struct BoundReport {
    int k = 0, t = 0, q = 0;
    std::vector<BoundEntry> entries;

    // every lower <= every exact <= every upper
    bool consistent() const {
        for (const auto& e : entries) {
            if (e.kind == BoundKind::unknown) continue;
            for (const auto& f : entries) {
                if (f.kind == BoundKind::unknown) continue;
                const bool bad =
                    (e.kind == BoundKind::lower && f.kind != BoundKind::lower && f.value < e.value) ||
                    (e.kind == BoundKind::exact && f.kind == BoundKind::upper && f.value < e.value) ||
                    (e.kind == BoundKind::exact && f.kind == BoundKind::exact && f.value != e.value);
                if (bad) return false;
            }
        }
        return true;
    }
};

inline long long ceil_div(long long a, long long b) { return (a + b - 1) / b; }

inline bool is_power_of_two(int q) { return q > 0 && (q & (q - 1)) == 0; }

// Minimal length a matrix with gamma distinct column values can have while
// serving t of each: ceil(2*gamma*t / (gamma+1)).
inline long long distinct_column_bound(int gamma, int t) {
    if (gamma < 1 || t < 1) throw std::invalid_argument("distinct_column_bound: bad arguments");
    return ceil_div(2LL * gamma * t, gamma + 1);
}

// Bounds and known exact values for the optimal all-symbol length at (k,t,q).
inline BoundReport length_bounds(int k, int t, int q) {
    if (k < 1 || t < 1) throw std::invalid_argument("length_bounds: k and t must be >= 1");
    BoundReport rep{k, t, q, {}};
    auto add = [&](std::string name, BoundKind kind, long long value, std::string note = "") {
        rep.entries.push_back(BoundEntry{std::move(name), kind, value, std::move(note)});
    };

    add("size_one_sets", BoundKind::lower, static_cast<long long>(t) + k - 1,
        "t disjoint sets for one value, k-1 columns for the rest");
    if (k >= 2)
        add("counting", BoundKind::lower, ceil_div(2LL * (k + 1) * t, k + 2),
            "two-sided count over recovery set sizes; k >= 2 only");
    // length of the realizing construction; equals ceil((k+1)t/2) for even t
    // and for k <= 2, and is the certified value in the remaining cases
    add("unit_and_ones", BoundKind::upper,
        static_cast<long long>(k) * ((t + 1) / 2) + t / 2,
        "ceil(t/2) copies of each unit vector, floor(t/2) of the all-ones column");

    if (k == 1) add("k1", BoundKind::exact, t, "single row of t ones");
    if (t == 1) add("t1", BoundKind::exact, k, "identity");
    if (t == 2) add("t2", BoundKind::exact, static_cast<long long>(k) + 1, "identity plus parity");
    if (k == 2) add("k2", BoundKind::exact, static_cast<long long>(t) + ceil_div(t, 2));
    const int r = r_for_k(k);
    if (t == 3) add("t3", BoundKind::exact, static_cast<long long>(k) + r, "weight-2 block");
    if (t == 4) {
        add("t4_bracket", BoundKind::lower, static_cast<long long>(k) + 1 + r);
        add("t4_bracket", BoundKind::upper, static_cast<long long>(k) + 2 + r,
            "parity columns on the weight-2 block");
        static const int kSolvedK[] = {1, 2, 3, 4, 5, 7, 8, 11, 12, 16};
        if (is_power_of_two(q) && std::count(std::begin(kSolvedK), std::end(kSolvedK), k))
            add("t4_char2", BoundKind::exact, static_cast<long long>(k) + 1 + r,
                "characteristic-2 weight argument");
        if (k == 6 && q == 2)
            add("t4_search", BoundKind::exact, 12, "exhaustive search value");
    }
    return rep;
}

// Known optimal lengths of the plain and functional variants, used as
// comparison baselines. Combinations outside the covered cases come back as
// unknown entries.
inline BoundReport reference_lengths(int k, int t, int q) {
    if (k < 1 || t < 1) throw std::invalid_argument("reference_lengths: k and t must be >= 1");
    BoundReport rep{k, t, q, {}};
    auto add = [&](std::string name, BoundKind kind, long long value, std::string note = "") {
        rep.entries.push_back(BoundEntry{std::move(name), kind, value, std::move(note)});
    };
    const int r = r_for_k(k);

    bool p_known = false, b_known = false, fp_known = false, fb_known = false;
    if (k == 2 && q == 2) {
        const long long v = static_cast<long long>(t) + ceil_div(t, 2);
        add("P", BoundKind::exact, v);
        add("B", BoundKind::exact, v);
        add("FP", BoundKind::exact, v);
        add("FB", BoundKind::exact, v);
        p_known = b_known = fp_known = fb_known = true;
    }
    if (t == 3 && !p_known) {
        add("P", BoundKind::exact, static_cast<long long>(k) + r);
        add("B", BoundKind::exact, static_cast<long long>(k) + r);
        p_known = b_known = true;
    }
    if (t == 4 && !p_known) {
        add("P", BoundKind::exact, static_cast<long long>(k) + r + 1, "one more than the t=3 value");
        add("B", BoundKind::exact, static_cast<long long>(k) + r + 1, "one more than the t=3 value");
        p_known = b_known = true;
    }
    if (t == 3 && q == 2 && !fp_known && k >= 4) {
        if (k % 2 == 0) {
            add("FP", BoundKind::exact, 3LL * (k / 2) + 2);
            fp_known = true;
        } else {
            add("FP", BoundKind::lower, 3LL * (k / 2) + 3);
            add("FP", BoundKind::upper, 3LL * (k / 2) + 4);
            fp_known = true;
        }
    }
    if (!p_known) add("P", BoundKind::unknown, 0, "no covered value");
    if (!b_known) add("B", BoundKind::unknown, 0, "no covered value");
    if (!fp_known) add("FP", BoundKind::unknown, 0, "no covered value");
    if (!fb_known) add("FB", BoundKind::unknown, 0, "no covered value");
    return rep;
}

// t <= (n-1)/(d_perp - 1) + 1. A dual of minimum distance 1 means a zero
// column, which breaks the argument; a zero dual code constrains t to 1.
inline Rational dual_distance_bound(const GeneratorMatrix& g) {
    const Matrix dual = dual_basis(g);
    const std::optional<int> d = min_distance_rows(dual);
    if (!d) return Rational{1, 1};
    if (*d <= 1) throw std::domain_error("dual_distance_bound: dual distance 1 (zero column)");
    return Rational{static_cast<long long>(g.n()) - 1 + (*d - 1), *d - 1};
}

// t <= (n-s)/(max_S d(dual shortened to S) - 1) + s over all coordinate sets
// S of size n-s+1. A zero shortened code has infinite distance, so any such S
// pins the bound at s.
inline Rational shortened_dual_bound(const GeneratorMatrix& g, int s) {
    const int n = g.n();
    if (n > 12) throw std::invalid_argument("shortened_dual_bound: n must be at most 12");
    if (s < 1 || s > n - 1) throw std::invalid_argument("shortened_dual_bound: s out of range");
    const Matrix dual = dual_basis(g);

    const int size = n - s + 1;
    std::vector<int> comb(size);
    for (int i = 0; i < size; ++i) comb[i] = i;
    int maxd = 0;
    while (true) {
        const Matrix sh = shorten_rows(dual, comb);
        const std::optional<int> d = min_distance_rows(sh);
        if (!d) return Rational{s, 1};
        maxd = std::max(maxd, *d);
        int i = size - 1;
        while (i >= 0 && comb[i] == n - size + i) --i;
        if (i < 0) break;
        ++comb[i];
        for (int j = i + 1; j < size; ++j) comb[j] = comb[j - 1] + 1;
    }
    if (maxd <= 1) throw std::domain_error("shortened_dual_bound: shortened dual distance 1");
    return Rational{static_cast<long long>(n) - s + static_cast<long long>(s) * (maxd - 1),
                    maxd - 1};
}

inline Rational shortened_dual_bound_min(const GeneratorMatrix& g) {
    Rational best{static_cast<long long>(g.n()), 1};
    for (int s = 1; s <= g.n() - 1; ++s) {
        const Rational b = shortened_dual_bound(g, s);
        if (b < best) best = b;
    }
    return best;
}

}  // namespace asbpir
