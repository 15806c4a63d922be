#ifndef LECH_FIELD_HPP
#define LECH_FIELD_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "lech/errors.hpp"

namespace lech {

// Arithmetic context for F_{p^k}.  Elements are encoded as uint32 values:
// the base-p digits of the code are the coefficients of the residue
// polynomial in the generator g, so codes 0..p-1 form the prime subfield.
//
// The modulus is monic of degree k and irreducible over F_p; construction
// verifies irreducibility by brute-force trial division, which is feasible
// for the supported range p^k <= 2^20.  When no modulus is given, the
// lexicographically lowest irreducible one is chosen so that every run (and
// every implementation) agrees on the representation.
class Field {
public:
    using Elem = std::uint32_t;

    explicit Field(std::uint32_t p, std::uint32_t k = 1) : Field(p, k, find_modulus(p, k)) {}

    Field(std::uint32_t p, std::uint32_t k, std::vector<std::uint32_t> modulus_tail)
        : p_(p), k_(k), tail_(std::move(modulus_tail)) {
        if (!is_prime(p_)) throw ArgumentError("field characteristic " + std::to_string(p_) + " is not prime");
        if (k_ < 1) throw ArgumentError("extension degree must be >= 1");
        q_ = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            if (q_ > (1u << 20) / p_) throw ArgumentError("field size p^k exceeds 2^20");
            q_ *= p_;
        }
        if (k_ == 1) {
            tail_.clear();
        } else {
            if (tail_.size() != k_) throw ArgumentError("modulus tail must have k coefficients");
            if (!is_irreducible(p_, tail_)) throw ArgumentError("modulus polynomial is reducible");
        }
        if (q_ <= kTableLimit && k_ > 1) build_tables();
    }

    std::uint32_t p() const { return p_; }
    std::uint32_t k() const { return k_; }
    std::uint32_t q() const { return q_; }
    const std::vector<std::uint32_t>& modulus_tail() const { return tail_; }

    bool same(const Field& other) const {
        return p_ == other.p_ && k_ == other.k_ && tail_ == other.tail_;
    }

    Elem zero() const { return 0; }
    Elem one() const { return 1; }
    bool is_zero(Elem a) const { return a == 0; }

    Elem from_int(std::int64_t n) const {
        std::int64_t r = n % static_cast<std::int64_t>(p_);
        if (r < 0) r += p_;
        return static_cast<Elem>(r);
    }

    Elem add(Elem a, Elem b) const {
        if (k_ == 1) return (a + b) % p_;
        Elem out = 0, scale = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            out += ((a % p_ + b % p_) % p_) * scale;
            a /= p_; b /= p_; scale *= p_;
        }
        return out;
    }

    Elem neg(Elem a) const {
        if (k_ == 1) return a == 0 ? 0 : p_ - a;
        Elem out = 0, scale = 1;
        for (std::uint32_t i = 0; i < k_; ++i) {
            std::uint32_t d = a % p_;
            out += (d == 0 ? 0 : p_ - d) * scale;
            a /= p_; scale *= p_;
        }
        return out;
    }

    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    Elem mul(Elem a, Elem b) const {
        if (k_ == 1)
            return static_cast<Elem>(static_cast<std::uint64_t>(a) * b % p_);
        if (!mul_table_.empty()) return mul_table_[static_cast<std::size_t>(a) * q_ + b];
        return mul_slow(a, b);
    }

    Elem inv(Elem a) const {
        if (a == 0) throw ArgumentError("division by zero in F_" + std::to_string(q_));
        if (k_ == 1) return pow(a, p_ - 2);
        if (!inv_table_.empty()) return inv_table_[a];
        return pow(a, q_ - 2);
    }

    Elem pow(Elem a, std::uint64_t n) const {
        Elem out = 1, base = a;
        while (n) {
            if (n & 1) out = mul(out, base);
            base = mul(base, base);
            n >>= 1;
        }
        return out;
    }

    std::vector<std::uint32_t> digits(Elem a) const {
        std::vector<std::uint32_t> d(k_);
        for (std::uint32_t i = 0; i < k_; ++i) { d[i] = a % p_; a /= p_; }
        return d;
    }

    Elem from_digits(const std::vector<std::uint32_t>& d) const {
        Elem out = 0, scale = 1;
        for (std::uint32_t i = 0; i < k_ && i < d.size(); ++i) { out += (d[i] % p_) * scale; scale *= p_; }
        return out;
    }

    // True when the element lies in the prime subfield F_p.
    bool in_prime_subfield(Elem a) const { return a < p_; }

    std::string to_string(Elem a) const {
        if (k_ == 1 || a < p_) return std::to_string(a % p_);
        std::string out;
        auto d = digits(a);
        for (std::uint32_t i = k_; i-- > 0;) {
            if (d[i] == 0) continue;
            if (!out.empty()) out += "+";
            if (i == 0) { out += std::to_string(d[i]); continue; }
            if (d[i] != 1) out += std::to_string(d[i]) + "*";
            out += i == 1 ? "g" : "g^" + std::to_string(i);
        }
        return out.empty() ? "0" : out;
    }

    // Image of every source element under the canonical embedding into
    // `target`, found by sending the source generator to the lowest-coded
    // root of the source modulus.  Requires k | target.k.
    std::vector<Elem> embedding_into(const Field& target) const {
        if (target.p_ != p_) throw ArgumentError("cannot embed across different characteristics");
        if (target.k_ % k_ != 0) throw ArgumentError("no embedding: extension degree mismatch");
        std::vector<Elem> images(q_);
        if (k_ == 1) {
            for (Elem a = 0; a < q_; ++a) images[a] = a;
            return images;
        }
        Elem root = 0;
        bool found = false;
        for (Elem r = 0; r < target.q_ && !found; ++r) {
            // evaluate x^k + tail at r using target arithmetic
            Elem acc = target.pow(r, k_);
            Elem rp = target.one();
            for (std::uint32_t i = 0; i < k_; ++i) {
                acc = target.add(acc, target.mul(target.from_int(tail_[i]), rp));
                rp = target.mul(rp, r);
            }
            if (target.is_zero(acc)) { root = r; found = true; }
        }
        if (!found) throw StructuralError("modulus has no root in target field");
        for (Elem a = 0; a < q_; ++a) {
            auto d = digits(a);
            Elem acc = target.zero(), rp = target.one();
            for (std::uint32_t i = 0; i < k_; ++i) {
                acc = target.add(acc, target.mul(target.from_int(d[i]), rp));
                rp = target.mul(rp, root);
            }
            images[a] = acc;
        }
        return images;
    }

    static bool is_prime(std::uint32_t n) {
        if (n < 2) return false;
        for (std::uint32_t d = 2; d * d <= n; ++d)
            if (n % d == 0) return false;
        return true;
    }

private:
    static constexpr std::uint32_t kTableLimit = 1024;

    // Lexicographically lowest irreducible monic x^k + c_{k-1}x^{k-1}+...+c_0,
    // scanning the tail (c_0,...,c_{k-1}) in base-p code order.
    static std::vector<std::uint32_t> find_modulus(std::uint32_t p, std::uint32_t k) {
        if (k <= 1) return {};
        std::uint64_t total = 1;
        for (std::uint32_t i = 0; i < k; ++i) total *= p;
        for (std::uint64_t code = 0; code < total; ++code) {
            std::vector<std::uint32_t> tail(k);
            std::uint64_t c = code;
            for (std::uint32_t i = 0; i < k; ++i) { tail[i] = static_cast<std::uint32_t>(c % p); c /= p; }
            if (is_irreducible(p, tail)) return tail;
        }
        throw StructuralError("no irreducible polynomial found");  // unreachable for prime p
    }

    // Trial division of x^k + tail by every monic polynomial of degree
    // 1..k/2 over F_p.
    static bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& tail) {
        const std::uint32_t k = static_cast<std::uint32_t>(tail.size());
        std::vector<std::uint32_t> f(tail);
        f.push_back(1);
        for (std::uint32_t deg = 1; deg <= k / 2; ++deg) {
            std::uint64_t count = 1;
            for (std::uint32_t i = 0; i < deg; ++i) count *= p;
            for (std::uint64_t code = 0; code < count; ++code) {
                std::vector<std::uint32_t> g(deg + 1);
                std::uint64_t c = code;
                for (std::uint32_t i = 0; i < deg; ++i) { g[i] = static_cast<std::uint32_t>(c % p); c /= p; }
                g[deg] = 1;
                if (divides_mod_p(p, g, f)) return false;
            }
        }
        return true;
    }

    static bool divides_mod_p(std::uint32_t p, const std::vector<std::uint32_t>& g,
                              std::vector<std::uint32_t> r) {
        const std::size_t dg = g.size() - 1;
        while (r.size() > dg) {
            std::uint32_t lead = r.back();
            if (lead != 0) {
                const std::size_t shift = r.size() - 1 - dg;
                for (std::size_t i = 0; i <= dg; ++i) {
                    std::uint32_t& c = r[shift + i];
                    c = (c + p - (lead * g[i]) % p) % p;
                }
            }
            r.pop_back();
        }
        for (std::uint32_t c : r)
            if (c != 0) return false;
        return true;
    }

    Elem mul_slow(Elem a, Elem b) const {
        auto da = digits(a), db = digits(b);
        std::vector<std::uint32_t> prod(2 * k_ - 1, 0);
        for (std::uint32_t i = 0; i < k_; ++i) {
            if (da[i] == 0) continue;
            for (std::uint32_t j = 0; j < k_; ++j)
                prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
        }
        // reduce by x^k = -tail
        for (std::uint32_t d = 2 * k_ - 2; d >= k_; --d) {
            std::uint32_t c = prod[d];
            if (c) {
                prod[d] = 0;
                for (std::uint32_t i = 0; i < k_; ++i)
                    prod[d - k_ + i] = (prod[d - k_ + i] + p_ - (c * tail_[i]) % p_) % p_;
            }
            if (d == k_) break;
        }
        Elem out = 0, scale = 1;
        for (std::uint32_t i = 0; i < k_; ++i) { out += prod[i] * scale; scale *= p_; }
        return out;
    }

    void build_tables() {
        mul_table_.assign(static_cast<std::size_t>(q_) * q_, 0);
        for (Elem a = 0; a < q_; ++a)
            for (Elem b = a; b < q_; ++b) {
                Elem m = mul_slow(a, b);
                mul_table_[static_cast<std::size_t>(a) * q_ + b] = m;
                mul_table_[static_cast<std::size_t>(b) * q_ + a] = m;
            }
        inv_table_.assign(q_, 0);
        for (Elem a = 1; a < q_; ++a) inv_table_[a] = pow_via_table(a, q_ - 2);
    }

    Elem pow_via_table(Elem a, std::uint64_t n) const {
        Elem out = 1, base = a;
        while (n) {
            if (n & 1) out = mul_table_[static_cast<std::size_t>(out) * q_ + base];
            base = mul_table_[static_cast<std::size_t>(base) * q_ + base];
            n >>= 1;
        }
        return out;
    }

    std::uint32_t p_, k_, q_;
    std::vector<std::uint32_t> tail_;
    std::vector<Elem> mul_table_;
    std::vector<Elem> inv_table_;
};

using FieldPtr = std::shared_ptr<const Field>;

inline FieldPtr make_field(std::uint32_t p, std::uint32_t k = 1) {
    return std::make_shared<const Field>(p, k);
}

} // namespace lech

#endif
