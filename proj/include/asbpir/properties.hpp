#pragma once

// The six service properties, decided exactly.
//
//   pir      every unit vector e_i, requested t times
//   batch    every multiset of t unit vectors
//   fpir     every nonzero vector, requested t times
//   fbatch   every multiset of t nonzero vectors
//   aspir    every stored column value, requested t times
//   asbatch  every multiset of t stored column values
//
// A property holds iff every request in its family can be served with
// pairwise disjoint recovery sets.

#include "asbpir/recovery.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace asbpir {

enum class PropertyKind { pir, batch, fpir, fbatch, aspir, asbatch };

inline std::string to_string(PropertyKind kind) {
    switch (kind) {
        case PropertyKind::pir: return "pir";
        case PropertyKind::batch: return "batch";
        case PropertyKind::fpir: return "fpir";
        case PropertyKind::fbatch: return "fbatch";
        case PropertyKind::aspir: return "aspir";
        case PropertyKind::asbatch: return "asbatch";
    }
    throw std::invalid_argument("to_string: bad PropertyKind");
}

inline PropertyKind property_kind_from_string(const std::string& s) {
    if (s == "pir") return PropertyKind::pir;
    if (s == "batch") return PropertyKind::batch;
    if (s == "fpir") return PropertyKind::fpir;
    if (s == "fbatch") return PropertyKind::fbatch;
    if (s == "aspir") return PropertyKind::aspir;
    if (s == "asbatch") return PropertyKind::asbatch;
    throw std::invalid_argument("unknown property kind: " + s);
}

struct CheckOptions {
    ServeOptions serve;
    uint64_t request_cap = kDefaultEnumerationCap;  // throws when a family is larger
};

struct Verdict {
    bool holds = false;
    Request counterexample;                // first unservable request, empty when holds
    std::optional<RecoveryPlan> witness;   // plan for the last served request
    uint64_t requests_checked = 0;
};

namespace detail {

inline Vec decode_vec(uint64_t enc, int q, int k) {
    Vec v(k);
    for (int i = 0; i < k; ++i) {
        v[i] = static_cast<uint8_t>(enc % q);
        enc /= q;
    }
    return v;
}

}  // namespace detail

// Base targets of a family, in the order request enumeration uses them:
// unit vectors by row, nonzero vectors by value encoding (sum v_i q^i), and
// distinct column values by first occurrence.
inline std::vector<Vec> base_targets(const GeneratorMatrix& g, PropertyKind kind) {
    std::vector<Vec> targets;
    switch (kind) {
        case PropertyKind::pir:
        case PropertyKind::batch:
            for (int i = 0; i < g.k(); ++i) {
                Vec e(g.k(), 0);
                e[i] = 1;
                targets.push_back(std::move(e));
            }
            break;
        case PropertyKind::fpir:
        case PropertyKind::fbatch: {
            uint64_t total = 1;
            for (int i = 0; i < g.k(); ++i) {
                total *= g.field().q();
                if (total > kDefaultEnumerationCap)
                    throw std::length_error("base_targets: q^k too large");
            }
            for (uint64_t enc = 1; enc < total; ++enc)
                targets.push_back(detail::decode_vec(enc, g.field().q(), g.k()));
            break;
        }
        case PropertyKind::aspir:
        case PropertyKind::asbatch:
            for (int j = 0; j < g.n(); ++j) {
                Vec col = g.column(j);
                bool fresh = true;
                for (const Vec& t : targets)
                    if (t == col) { fresh = false; break; }
                if (fresh) targets.push_back(std::move(col));
            }
            break;
    }
    return targets;
}

// Visits every request of the family for the given demand t. Multiset kinds
// run over nondecreasing index tuples in colexicographic order; the single
// target kinds visit each base target with multiplicity t. The visitor
// returns false to stop early; the function reports whether the walk ran to
// completion.
inline bool for_each_request(const GeneratorMatrix& g, PropertyKind kind, int t,
                             const std::function<bool(const Request&)>& fn,
                             uint64_t request_cap = kDefaultEnumerationCap) {
    if (t < 1) throw std::invalid_argument("for_each_request: t must be >= 1");
    const std::vector<Vec> targets = base_targets(g, kind);
    const bool multiset = kind == PropertyKind::batch || kind == PropertyKind::fbatch ||
                          kind == PropertyKind::asbatch;
    uint64_t visited = 0;
    auto emit = [&](const Request& r) {
        if (++visited > request_cap) throw std::length_error("for_each_request: request cap exceeded");
        return fn(r);
    };

    if (!multiset) {
        for (const Vec& v : targets)
            if (!emit({RequestItem{v, t}})) return false;
        return true;
    }

    const int m = static_cast<int>(targets.size());
    std::vector<int> tuple(t);
    Request req;
    // colex on nondecreasing tuples: positions fill from the back, each
    // prefix ranges over values up to the element after it
    std::function<bool(int, int)> walk = [&](int pos, int maxval) -> bool {
        if (pos < 0) {
            req.clear();
            for (int i = 0; i < t; ++i) {
                if (!req.empty() && req.back().target == targets[tuple[i]])
                    req.back().multiplicity += 1;
                else
                    req.push_back(RequestItem{targets[tuple[i]], 1});
            }
            return emit(req);
        }
        for (int val = 0; val <= maxval; ++val) {
            tuple[pos] = val;
            if (!walk(pos - 1, val)) return false;
        }
        return true;
    };
    return walk(t - 1, m - 1);
}

inline uint64_t family_size(const GeneratorMatrix& g, PropertyKind kind, int t) {
    const uint64_t m = base_targets(g, kind).size();
    const bool multiset = kind == PropertyKind::batch || kind == PropertyKind::fbatch ||
                          kind == PropertyKind::asbatch;
    if (!multiset) return m;
    uint64_t count = 1;  // C(m + t - 1, t)
    for (int i = 1; i <= t; ++i) count = count * (m + t - i) / i;
    return count;
}

inline Verdict check(const GeneratorMatrix& g, PropertyKind kind, int t,
                     const CheckOptions& opts = {}) {
    RecoverySolver solver(g, opts.serve);
    Verdict verdict;
    verdict.holds = for_each_request(
        g, kind, t,
        [&](const Request& req) {
            verdict.requests_checked += 1;
            auto plan = solver.serve(req);
            if (!plan) {
                verdict.counterexample = req;
                return false;
            }
            verdict.witness = std::move(plan);
            return true;
        },
        opts.request_cap);
    if (!verdict.holds) verdict.witness.reset();
    return verdict;
}

// Largest t for which the property holds. Serving t+1 copies of each target
// of a served request serves the original, so the properties are downward
// closed in t and the first failure ends the scan. Every recovery set uses a
// column, hence t <= n always; an optional caller-supplied cap (for example
// from a dual distance bound) can cut the scan earlier.
inline int max_t(const GeneratorMatrix& g, PropertyKind kind, const CheckOptions& opts = {},
                 int t_cap = -1) {
    int limit = g.n();
    if (t_cap >= 0 && t_cap < limit) limit = t_cap;
    int best = 0;
    for (int t = 1; t <= limit; ++t) {
        if (!check(g, kind, t, opts).holds) break;
        best = t;
    }
    return best;
}

// Simplex-specific stress check: every request built from a linearly
// independent list of nonzero targets with multiplicities summing to
// 2^(k-1) must be servable. Only binary simplex generators are accepted.
inline bool check_independent_lists(const GeneratorMatrix& g, int list_len,
                                    const CheckOptions& opts = {}) {
    const Field& f = g.field();
    if (f.q() != 2) throw std::invalid_argument("check_independent_lists: binary fields only");
    const int k = g.k();
    if (k > 4) throw std::invalid_argument("check_independent_lists: k must be at most 4");
    const int nz = (1 << k) - 1;
    if (g.n() != nz) throw std::invalid_argument("check_independent_lists: not a simplex generator");
    {
        std::vector<bool> seen(1 << k, false);
        for (int j = 0; j < g.n(); ++j) {
            uint64_t enc = detail::encode_vec(g.column(j), 2);
            if (enc == 0 || seen[enc])
                throw std::invalid_argument("check_independent_lists: not a simplex generator");
            seen[enc] = true;
        }
    }
    if (list_len < 1 || list_len > k)
        throw std::invalid_argument("check_independent_lists: list length out of range");

    std::vector<Vec> vecs;
    for (int enc = 1; enc <= nz; ++enc) vecs.push_back(detail::decode_vec(enc, 2, k));

    RecoverySolver solver(g, opts.serve);
    const int total = 1 << (k - 1);

    std::vector<int> pick(list_len);
    std::function<bool(int, int)> choose = [&](int pos, int start) -> bool {
        if (pos == list_len) {
            std::vector<Vec> rows;
            for (int i : pick) rows.push_back(vecs[i]);
            if (rank_of(Matrix::from_rows(f, rows)) < list_len) return true;
            // compositions of `total` into list_len positive parts
            std::vector<int> mult(list_len, 1);
            std::function<bool(int, int)> comp = [&](int pos2, int left) -> bool {
                if (pos2 == list_len - 1) {
                    mult[pos2] = left;
                    Request req;
                    for (int i = 0; i < list_len; ++i)
                        req.push_back(RequestItem{vecs[pick[i]], mult[i]});
                    return solver.serve(req).has_value();
                }
                for (int a = 1; a <= left - (list_len - 1 - pos2); ++a) {
                    mult[pos2] = a;
                    if (!comp(pos2 + 1, left - a)) return false;
                }
                return true;
            };
            return comp(0, total);
        }
        for (int i = start; i < nz; ++i) {
            pick[pos] = i;
            if (!choose(pos + 1, i + 1)) return false;
        }
        return true;
    };
    return choose(0, 0);
}

}  // namespace asbpir
