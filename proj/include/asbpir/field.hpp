#pragma once

// Exact arithmetic in GF(p^e) for prime powers q = p^e <= 128.
//
// Elements are encoded as integers in [0, q): the polynomial
// c_0 + c_1*x + ... + c_{e-1}*x^{e-1} with 0 <= c_i < p is the integer
// c_0 + c_1*p + ... + c_{e-1}*p^{e-1}. All arithmetic goes through
// precomputed q*q tables, so callers never pay for polynomial reduction.
// Extension fields use a fixed modulus per order (see kModulusTable), which
// pins the encoding of every element once and for all.

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace asbpir {

namespace detail {

inline bool is_prime(int p) {
    if (p < 2) return false;
    for (int d = 2; d * d <= p; ++d)
        if (p % d == 0) return false;
    return true;
}

// Polynomials over GF(p) as coefficient vectors, lowest degree first,
// used only while building the tables.
inline std::vector<int> poly_trim(std::vector<int> a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
    return a;
}

inline std::vector<int> poly_mul(const std::vector<int>& a, const std::vector<int>& b, int p) {
    if (a.empty() || b.empty()) return {};
    std::vector<int> c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    return poly_trim(std::move(c));
}

// Remainder of a modulo the monic polynomial m.
inline std::vector<int> poly_mod(std::vector<int> a, const std::vector<int>& m, int p) {
    a = poly_trim(std::move(a));
    const int dm = static_cast<int>(m.size()) - 1;
    while (static_cast<int>(a.size()) - 1 >= dm) {
        const int shift = static_cast<int>(a.size()) - 1 - dm;
        const int c = a.back();
        for (int i = 0; i <= dm; ++i) {
            int& t = a[shift + i];
            t = ((t - c * m[i]) % p + p) % p;
        }
        a = poly_trim(std::move(a));
    }
    return a;
}

inline bool poly_is_zero(const std::vector<int>& a) { return poly_trim(a).empty(); }

// Irreducibility of the monic modulus m over GF(p): degree <= 3 needs only a
// root check, otherwise trial-divide by every monic polynomial of degree
// 1..deg/2.
inline bool poly_irreducible(const std::vector<int>& m, int p) {
    const int deg = static_cast<int>(m.size()) - 1;
    if (deg <= 1) return deg == 1;
    for (int a = 0; a < p; ++a) {
        long long v = 0, pw = 1;
        for (int i = 0; i <= deg; ++i) {
            v = (v + m[i] * pw) % p;
            pw = (pw * a) % p;
        }
        if (v == 0) return false;
    }
    if (deg <= 3) return true;
    for (int d = 2; d <= deg / 2; ++d) {
        // all monic divisor candidates of degree d, counted in base p
        long long total = 1;
        for (int i = 0; i < d; ++i) total *= p;
        for (long long idx = 0; idx < total; ++idx) {
            std::vector<int> cand(d + 1, 0);
            long long t = idx;
            for (int i = 0; i < d; ++i) { cand[i] = static_cast<int>(t % p); t /= p; }
            cand[d] = 1;
            if (poly_is_zero(poly_mod(m, cand, p))) return false;
        }
    }
    return true;
}

}  // namespace detail

class Field {
  public:
    static constexpr int kMaxOrder = 128;

    // Shared immutable instance per (p, e). Instances live for the whole
    // program, so holding a const Field* is always safe.
    static const Field& get(int p, int e) {
        static std::mutex mu;
        static std::map<std::pair<int, int>, std::unique_ptr<Field>> registry;
        std::lock_guard<std::mutex> lock(mu);
        auto key = std::make_pair(p, e);
        auto it = registry.find(key);
        if (it == registry.end())
            it = registry.emplace(key, std::unique_ptr<Field>(new Field(p, e))).first;
        return *it->second;
    }

    int p() const { return p_; }
    int e() const { return e_; }
    int q() const { return q_; }
    // Modulus coefficients, lowest degree first; empty for prime fields.
    const std::vector<int>& modulus() const { return modulus_; }

    uint8_t add(uint8_t a, uint8_t b) const { return add_[a * q_ + b]; }
    uint8_t sub(uint8_t a, uint8_t b) const { return add_[a * q_ + neg_[b]]; }
    uint8_t mul(uint8_t a, uint8_t b) const { return mul_[a * q_ + b]; }
    uint8_t neg(uint8_t a) const { return neg_[a]; }
    uint8_t minus_one() const { return neg_[1]; }

    uint8_t inv(uint8_t a) const {
        if (a == 0) throw std::domain_error("Field::inv: zero has no inverse");
        return inv_[a];
    }
    uint8_t div(uint8_t a, uint8_t b) const { return mul(a, inv(b)); }

    bool operator==(const Field& o) const { return this == &o; }

    Field(const Field&) = delete;
    Field& operator=(const Field&) = delete;

  private:
    Field(int p, int e) : p_(p), e_(e) {
        if (!detail::is_prime(p)) throw std::invalid_argument("Field: p is not prime");
        if (e < 1) throw std::invalid_argument("Field: e must be >= 1");
        long long q = 1;
        for (int i = 0; i < e; ++i) {
            q *= p;
            if (q > kMaxOrder) throw std::invalid_argument("Field: order exceeds 128");
        }
        q_ = static_cast<int>(q);
        if (e_ > 1) {
            modulus_ = lookup_modulus(p, e);
            if (!detail::poly_irreducible(modulus_, p))
                throw std::logic_error("Field: listed modulus is reducible");
        }
        build_tables();
    }

    static std::vector<int> lookup_modulus(int p, int e) {
        // Fixed table; coefficients lowest degree first, leading 1 included.
        struct Entry { int p, e; std::vector<int> m; };
        static const std::vector<Entry> kModulusTable = {
            {2, 2, {1, 1, 1}},        // x^2 + x + 1
            {2, 3, {1, 1, 0, 1}},     // x^3 + x + 1
            {3, 2, {1, 0, 1}},        // x^2 + 1
            {2, 4, {1, 1, 0, 0, 1}},  // x^4 + x + 1
            {5, 2, {1, 1, 1}},        // x^2 + x + 1
            {3, 3, {1, 2, 0, 1}},     // x^3 + 2x + 1
        };
        for (const auto& ent : kModulusTable)
            if (ent.p == p && ent.e == e) return ent.m;
        throw std::invalid_argument("Field: no modulus listed for GF(" + std::to_string(p) +
                                    "^" + std::to_string(e) + ")");
    }

    std::vector<int> decode(uint8_t a) const {
        std::vector<int> c(e_, 0);
        int t = a;
        for (int i = 0; i < e_; ++i) { c[i] = t % p_; t /= p_; }
        return c;
    }

    uint8_t encode(const std::vector<int>& c) const {
        long long v = 0, pw = 1;
        for (size_t i = 0; i < c.size(); ++i) { v += c[i] * pw; pw *= p_; }
        return static_cast<uint8_t>(v);
    }

    void build_tables() {
        add_.assign(q_ * q_, 0);
        mul_.assign(q_ * q_, 0);
        neg_.assign(q_, 0);
        inv_.assign(q_, 0);
        for (int a = 0; a < q_; ++a) {
            const auto ca = decode(static_cast<uint8_t>(a));
            for (int b = 0; b < q_; ++b) {
                const auto cb = decode(static_cast<uint8_t>(b));
                std::vector<int> s(e_);
                for (int i = 0; i < e_; ++i) s[i] = (ca[i] + cb[i]) % p_;
                add_[a * q_ + b] = encode(s);
                if (e_ == 1) {
                    mul_[a * q_ + b] = static_cast<uint8_t>((a * b) % p_);
                } else {
                    std::vector<int> pa(ca.begin(), ca.end()), pb(cb.begin(), cb.end());
                    auto prod = detail::poly_mod(detail::poly_mul(pa, pb, p_), modulus_, p_);
                    prod.resize(e_, 0);
                    mul_[a * q_ + b] = encode(prod);
                }
            }
            std::vector<int> n(e_);
            for (int i = 0; i < e_; ++i) n[i] = (p_ - ca[i]) % p_;
            neg_[a] = encode(n);
        }
        for (int a = 1; a < q_; ++a)
            for (int b = 1; b < q_; ++b)
                if (mul_[a * q_ + b] == 1) { inv_[a] = static_cast<uint8_t>(b); break; }
    }

    int p_, e_, q_;
    std::vector<int> modulus_;
    std::vector<uint8_t> add_, mul_, neg_, inv_;
};

inline const Field& make_field(int p, int e) { return Field::get(p, e); }

// Checked element wrapper for callers that want operator syntax. Internal
// code works on raw uint8_t encodings plus a Field reference instead.
struct FieldElement {
    uint8_t value = 0;
    const Field* field = nullptr;

    FieldElement() = default;
    FieldElement(uint8_t v, const Field& f) : value(v), field(&f) {
        if (v >= f.q()) throw std::invalid_argument("FieldElement: value out of range");
    }

    friend FieldElement operator+(FieldElement a, FieldElement b) {
        require_same(a, b);
        return {a.field->add(a.value, b.value), *a.field};
    }
    friend FieldElement operator-(FieldElement a, FieldElement b) {
        require_same(a, b);
        return {a.field->sub(a.value, b.value), *a.field};
    }
    friend FieldElement operator*(FieldElement a, FieldElement b) {
        require_same(a, b);
        return {a.field->mul(a.value, b.value), *a.field};
    }
    friend FieldElement operator/(FieldElement a, FieldElement b) {
        require_same(a, b);
        return {a.field->div(a.value, b.value), *a.field};
    }
    FieldElement operator-() const { return {field->neg(value), *field}; }
    friend bool operator==(FieldElement a, FieldElement b) {
        require_same(a, b);
        return a.value == b.value;
    }

  private:
    static void require_same(const FieldElement& a, const FieldElement& b) {
        if (a.field == nullptr || b.field == nullptr)
            throw std::invalid_argument("FieldElement: unbound element");
        if (a.field != b.field) throw std::invalid_argument("FieldElement: field mismatch");
    }
};

inline FieldElement inv(FieldElement a) {
    if (a.field == nullptr) throw std::invalid_argument("inv: unbound element");
    return {a.field->inv(a.value), *a.field};
}

}  // namespace asbpir
