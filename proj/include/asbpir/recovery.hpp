#pragma once

// Recovery sets and request serving.
//
// A recovery set for a target v in F_q^k against a generator matrix G is a
// coordinate set R with v in span{g_j : j in R}. Serving a request means
// assigning pairwise disjoint recovery sets to every unit of every target.
//
// The solver only ever branches over inclusion-minimal recovery sets. That is
// complete: any recovery set contains a minimal one, and shrinking a set in a
// valid assignment keeps all sets pairwise disjoint. The same argument shows
// that the minimal recovery sets avoiding an occupied coordinate set are
// exactly the minimal recovery sets inside the complement, so the per-target
// lists are computed once per matrix and only filtered during the search.

#include "asbpir/matrix.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

namespace asbpir {

struct RequestItem {
    Vec target;        // element of F_q^k
    int multiplicity = 1;
};
using Request = std::vector<RequestItem>;

struct PlanAssignment {
    Vec target;
    std::vector<int> indices;     // 0-based column indices, ascending; empty only for target 0
    std::vector<uint8_t> coeffs;  // aligned with indices, all nonzero
};

struct RecoveryPlan {
    std::vector<PlanAssignment> assignments;
};

struct RecoverySet {
    uint64_t mask = 0;
    std::vector<int> indices;     // ascending
    std::vector<uint8_t> coeffs;  // aligned with indices; the representation on a
                                  // minimal set is unique, so this is well defined
};

struct ServeOptions {
    int max_set_size = -1;  // bounded mode when >= 0 (only sets of at most this size)
    uint64_t enumeration_cap = kDefaultEnumerationCap;
};

namespace detail {

inline uint64_t encode_vec(const Vec& v, int q) {
    uint64_t enc = 0;
    for (size_t i = v.size(); i-- > 0;) enc = enc * q + v[i];
    return enc;
}

inline bool is_zero_vec(const Vec& v) {
    for (uint8_t x : v)
        if (x != 0) return false;
    return true;
}

// All inclusion-minimal supports among the solutions of B x = v, where B is
// G restricted to `available`. Enumerates the affine solution space (size
// q^free); falls back to a subset scan by increasing size when that space is
// over cap.
inline std::vector<RecoverySet> minimal_sets_impl(const GeneratorMatrix& g, const Vec& v,
                                                  const std::vector<int>& available,
                                                  int max_size, uint64_t cap) {
    const Field& f = g.field();
    const int k = g.k(), n = g.n();
    if (static_cast<int>(v.size()) != k)
        throw std::invalid_argument("minimal_recovery_sets: target has wrong length");
    if (n > 63) throw std::invalid_argument("minimal_recovery_sets: more than 63 columns");
    for (int j : available)
        if (j < 0 || j >= n) throw std::invalid_argument("minimal_recovery_sets: bad column index");
    if (max_size < 0) max_size = n;

    if (is_zero_vec(v)) {
        // the zero target is recovered by the empty combination
        return {RecoverySet{}};
    }

    std::vector<int> avail(available);
    std::sort(avail.begin(), avail.end());
    avail.erase(std::unique(avail.begin(), avail.end()), avail.end());
    const int m = static_cast<int>(avail.size());

    auto solve_on = [&](const std::vector<int>& cols, std::vector<uint8_t>* coeffs_out) {
        // consistency of B x = v on the given columns; optionally the solution
        // coefficients (meaningful when the columns are independent)
        const int w = static_cast<int>(cols.size());
        Matrix a(f, k, w + 1);
        for (int j = 0; j < w; ++j)
            for (int i = 0; i < k; ++i) a.set(i, j, g.mat().at(i, cols[j]));
        for (int i = 0; i < k; ++i) a.set(i, w, v[i]);
        RrefResult r = rref(std::move(a), w);
        for (int i = r.rank; i < k; ++i)
            if (r.m.at(i, w) != 0) return false;
        if (coeffs_out) {
            coeffs_out->assign(w, 0);
            for (size_t pi = 0; pi < r.pivot_cols.size(); ++pi)
                (*coeffs_out)[r.pivot_cols[pi]] = r.m.at(static_cast<int>(pi), w);
        }
        return true;
    };

    // Solve B x = v once over all available columns.
    Matrix aug(f, k, m + 1);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < k; ++i) aug.set(i, j, g.mat().at(i, avail[j]));
    for (int i = 0; i < k; ++i) aug.set(i, m, v[i]);
    RrefResult rr = rref(std::move(aug), m);
    for (int i = rr.rank; i < k; ++i)
        if (rr.m.at(i, m) != 0) return {};  // v not in the span of the available columns
    std::vector<bool> is_pivot(m, false);
    for (int c : rr.pivot_cols) is_pivot[c] = true;
    std::vector<int> free_cols;
    for (int c = 0; c < m; ++c)
        if (!is_pivot[c]) free_cols.push_back(c);
    const int dim = static_cast<int>(free_cols.size());

    uint64_t space = 1;
    bool over_cap = false;
    for (int i = 0; i < dim && !over_cap; ++i) {
        space *= f.q();
        if (space > cap) over_cap = true;
    }

    std::vector<uint64_t> masks;
    if (!over_cap) {
        Vec x0(m, 0);
        for (size_t pi = 0; pi < rr.pivot_cols.size(); ++pi)
            x0[rr.pivot_cols[pi]] = rr.m.at(static_cast<int>(pi), m);
        // The walk below advances by repeated addition, which only generates
        // prime-subfield multiples of each basis vector. Expanding the basis
        // to {x^s b : 0 <= s < e} makes those steps reach every F_q
        // combination.
        std::vector<Vec> kernel;
        for (int fc : free_cols) {
            Vec b(m, 0);
            b[fc] = 1;
            for (size_t pi = 0; pi < rr.pivot_cols.size(); ++pi)
                b[rr.pivot_cols[pi]] = f.neg(rr.m.at(static_cast<int>(pi), fc));
            kernel.push_back(b);
            for (int s = 1; s < f.e(); ++s) {
                for (int j = 0; j < m; ++j) b[j] = f.mul(static_cast<uint8_t>(f.p()), b[j]);
                kernel.push_back(b);
            }
        }
        Vec cur = x0;
        std::vector<int> digits(kernel.size(), 0);
        auto push_mask = [&](const Vec& x) {
            uint64_t mask = 0;
            for (int j = 0; j < m; ++j)
                if (x[j] != 0) mask |= uint64_t{1} << avail[j];
            masks.push_back(mask);
        };
        push_mask(cur);
        for (uint64_t step = 1; step < space; ++step) {
            for (int i = 0;; ++i) {
                for (int j = 0; j < m; ++j) cur[j] = f.add(cur[j], kernel[i][j]);
                if (++digits[i] < f.p()) break;
                digits[i] = 0;
            }
            push_mask(cur);
        }
        std::sort(masks.begin(), masks.end(), [](uint64_t a, uint64_t b) {
            const int pa = std::popcount(a), pb = std::popcount(b);
            return pa != pb ? pa < pb : a < b;
        });
        masks.erase(std::unique(masks.begin(), masks.end()), masks.end());
        std::vector<uint64_t> minimal;
        for (uint64_t mk : masks) {
            bool dominated = false;
            for (uint64_t acc : minimal)
                if ((mk & acc) == acc) { dominated = true; break; }
            if (!dominated) minimal.push_back(mk);
        }
        masks = std::move(minimal);
    } else {
        // subset scan by increasing size; supersets of accepted sets are skipped,
        // so everything accepted is inclusion-minimal
        uint64_t scan_cost = 0, binom = 1;
        const int top = std::min(max_size, m);
        for (int s = 1; s <= top; ++s) {
            binom = binom * static_cast<uint64_t>(m - s + 1) / s;
            scan_cost += binom;
            if (scan_cost > cap)
                throw std::length_error("minimal_recovery_sets: enumeration cap exceeded");
        }
        std::vector<uint64_t> accepted;
        std::vector<int> comb, cols;
        for (int s = 1; s <= top; ++s) {
            comb.resize(s);
            for (int i = 0; i < s; ++i) comb[i] = i;
            while (true) {
                uint64_t mask = 0;
                for (int c : comb) mask |= uint64_t{1} << avail[c];
                bool dominated = false;
                for (uint64_t acc : accepted)
                    if ((mask & acc) == acc) { dominated = true; break; }
                if (!dominated) {
                    cols.resize(s);
                    for (int i = 0; i < s; ++i) cols[i] = avail[comb[i]];
                    if (solve_on(cols, nullptr)) accepted.push_back(mask);
                }
                int i = s - 1;
                while (i >= 0 && comb[i] == m - s + i) --i;
                if (i < 0) break;
                ++comb[i];
                for (int j = i + 1; j < s; ++j) comb[j] = comb[j - 1] + 1;
            }
        }
        masks = std::move(accepted);
    }

    std::vector<RecoverySet> out;
    for (uint64_t mask : masks) {
        if (std::popcount(mask) > max_size) continue;
        RecoverySet rs;
        rs.mask = mask;
        for (int j = 0; j < n; ++j)
            if (mask >> j & 1) rs.indices.push_back(j);
        solve_on(rs.indices, &rs.coeffs);
        out.push_back(std::move(rs));
    }
    std::sort(out.begin(), out.end(),
              [](const RecoverySet& a, const RecoverySet& b) { return a.indices < b.indices; });
    return out;
}

}  // namespace detail

// All inclusion-minimal recovery sets for `v` inside `available`, capped at
// `max_size` elements (max_size < 0 means no cap). The zero target yields
// exactly the empty set.
inline std::vector<RecoverySet> minimal_recovery_sets(const GeneratorMatrix& g, const Vec& v,
                                                      const std::vector<int>& available,
                                                      int max_size = -1,
                                                      uint64_t cap = kDefaultEnumerationCap) {
    return detail::minimal_sets_impl(g, v, available, max_size, cap);
}

inline std::vector<int> all_columns(const GeneratorMatrix& g) {
    std::vector<int> cols(g.n());
    for (int j = 0; j < g.n(); ++j) cols[j] = j;
    return cols;
}

// Per-matrix serving engine. Minimal recovery set lists are computed once per
// distinct target and reused across serve() calls.
class RecoverySolver {
  public:
    explicit RecoverySolver(const GeneratorMatrix& g, ServeOptions opts = {})
        : g_(&g), opts_(opts) {}

    const GeneratorMatrix& generator() const { return *g_; }
    const ServeOptions& options() const { return opts_; }

    const std::vector<RecoverySet>& minimal_sets(const Vec& target) {
        const uint64_t key = detail::encode_vec(target, g_->field().q());
        auto it = cache_.find(key);
        if (it == cache_.end()) {
            auto sets = minimal_recovery_sets(*g_, target, all_columns(*g_), opts_.max_set_size,
                                              opts_.enumeration_cap);
            it = cache_.emplace(key, std::move(sets)).first;
        }
        return it->second;
    }

    std::optional<RecoveryPlan> serve(const Request& request) {
        RecoveryPlan plan;
        std::vector<Unit> units;
        std::map<uint64_t, size_t> unit_of;
        int copies_total = 0;
        for (const auto& item : request) {
            if (item.multiplicity < 1)
                throw std::invalid_argument("serve: multiplicity must be >= 1");
            if (static_cast<int>(item.target.size()) != g_->k())
                throw std::invalid_argument("serve: target has wrong length");
            if (detail::is_zero_vec(item.target)) {
                for (int c = 0; c < item.multiplicity; ++c)
                    plan.assignments.push_back(PlanAssignment{item.target, {}, {}});
                continue;
            }
            const uint64_t key = detail::encode_vec(item.target, g_->field().q());
            auto it = unit_of.find(key);
            if (it != unit_of.end()) {
                units[it->second].remaining += item.multiplicity;
            } else {
                unit_of.emplace(key, units.size());
                units.push_back(Unit{&item.target, &minimal_sets(item.target),
                                     item.multiplicity, 0, {}});
            }
            copies_total += item.multiplicity;
        }
        for (const auto& u : units)
            if (u.sets->empty()) return std::nullopt;
        if (copies_total > g_->n()) return std::nullopt;

        if (!search(units, 0)) return std::nullopt;
        for (const auto& u : units)
            for (int idx : u.chosen) {
                const RecoverySet& rs = (*u.sets)[idx];
                plan.assignments.push_back(PlanAssignment{*u.target, rs.indices, rs.coeffs});
            }
        return plan;
    }

  private:
    struct Unit {
        const Vec* target;
        const std::vector<RecoverySet>* sets;
        int remaining;
        int next_idx;  // copies of one target take set indices in strictly
                       // increasing order (sound: disjoint sets are distinct)
        std::vector<int> chosen;
    };

    bool search(std::vector<Unit>& units, uint64_t used) {
        const int free_cols = g_->n() - std::popcount(used);
        int pick = -1, pick_avail = -1;
        int demand = 0;
        for (size_t ui = 0; ui < units.size(); ++ui) {
            Unit& u = units[ui];
            if (u.remaining == 0) continue;
            int avail = 0, min_size = -1;
            for (size_t si = u.next_idx; si < u.sets->size(); ++si) {
                const RecoverySet& rs = (*u.sets)[si];
                if (rs.mask & used) continue;
                ++avail;
                const int sz = static_cast<int>(rs.indices.size());
                if (min_size < 0 || sz < min_size) min_size = sz;
            }
            if (avail < u.remaining) return false;
            demand += u.remaining * min_size;
            if (pick < 0 || avail < pick_avail) {
                pick = static_cast<int>(ui);
                pick_avail = avail;
            }
        }
        if (pick < 0) return true;
        if (demand > free_cols) return false;

        Unit& u = units[pick];
        for (size_t si = u.next_idx; si < u.sets->size(); ++si) {
            const RecoverySet& rs = (*u.sets)[si];
            if (rs.mask & used) continue;
            u.remaining -= 1;
            const int saved_next = u.next_idx;
            u.next_idx = static_cast<int>(si) + 1;
            u.chosen.push_back(static_cast<int>(si));
            if (search(units, used | rs.mask)) return true;
            u.chosen.pop_back();
            u.next_idx = saved_next;
            u.remaining += 1;
        }
        return false;
    }

    const GeneratorMatrix* g_;
    ServeOptions opts_;
    std::map<uint64_t, std::vector<RecoverySet>> cache_;
};

// One-shot helper.
inline std::optional<RecoveryPlan> serve(const GeneratorMatrix& g, const Request& request,
                                         ServeOptions opts = {}) {
    RecoverySolver solver(g, opts);
    return solver.serve(request);
}

// Checks a plan against a request: the multiset of plan targets must equal the
// request multiset, index sets must be pairwise disjoint and sorted, and every
// combination must evaluate to its target with nonzero coefficients.
inline bool verify_plan(const GeneratorMatrix& g, const Request& request,
                        const RecoveryPlan& plan) {
    const Field& f = g.field();
    std::map<Vec, int> want, got;
    for (const auto& item : request) {
        if (item.multiplicity < 1 || static_cast<int>(item.target.size()) != g.k()) return false;
        want[item.target] += item.multiplicity;
    }
    uint64_t used = 0;
    for (const auto& a : plan.assignments) {
        got[a.target] += 1;
        if (a.indices.size() != a.coeffs.size()) return false;
        if (!std::is_sorted(a.indices.begin(), a.indices.end())) return false;
        if (a.indices.empty() && !detail::is_zero_vec(a.target)) return false;
        Vec acc(g.k(), 0);
        for (size_t j = 0; j < a.indices.size(); ++j) {
            const int col = a.indices[j];
            if (col < 0 || col >= g.n()) return false;
            if (used >> col & 1) return false;
            used |= uint64_t{1} << col;
            if (a.coeffs[j] == 0) return false;
            for (int i = 0; i < g.k(); ++i)
                acc[i] = f.add(acc[i], f.mul(a.coeffs[j], g.mat().at(i, col)));
        }
        if (acc != a.target) return false;
    }
    return want == got;
}

}  // namespace asbpir
