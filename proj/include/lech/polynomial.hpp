#ifndef LECH_POLYNOMIAL_HPP
#define LECH_POLYNOMIAL_HPP

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lech/errors.hpp"
#include "lech/field.hpp"
#include "lech/limits.hpp"
#include "lech/monomial.hpp"

namespace lech {

// Ambient polynomial ring context: coefficient field, variable names and
// the monomial order every polynomial in this ring is sorted by.
struct Ring {
    FieldPtr field;
    std::vector<std::string> vars;
    MonomialOrder order;

    Ring(FieldPtr f, std::vector<std::string> v, MonomialOrder o)
        : field(std::move(f)), vars(std::move(v)), order(std::move(o)) {}

    std::size_t nvars() const { return vars.size(); }

    int var_index(const std::string& name) const {
        for (std::size_t i = 0; i < vars.size(); ++i)
            if (vars[i] == name) return static_cast<int>(i);
        return -1;
    }

    bool same_ambient(const Ring& o) const { return field->same(*o.field) && vars == o.vars; }
    bool same(const Ring& o) const { return same_ambient(o) && order == o.order; }

    std::string monomial_string(const Monomial& m) const {
        if (m.is_one()) return "1";
        std::string out;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            if (m.exps[i] == 0) continue;
            if (!out.empty()) out += "*";
            out += vars[i];
            if (m.exps[i] > 1) out += "^" + std::to_string(m.exps[i]);
        }
        return out;
    }
};

using RingPtr = std::shared_ptr<const Ring>;

inline RingPtr make_ring(FieldPtr field, std::vector<std::string> vars,
                         MonomialOrder order = MonomialOrder::grevlex()) {
    return std::make_shared<const Ring>(std::move(field), std::move(vars), std::move(order));
}

struct Term {
    Monomial mono;
    Field::Elem coeff;
};

// Exact multivariate polynomial.  Terms are kept sorted descending under
// the ring's order and never store a zero coefficient.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}

    static Polynomial zero(RingPtr ring) { return Polynomial(std::move(ring)); }

    static Polynomial constant(RingPtr ring, Field::Elem c) {
        Polynomial out(ring);
        if (!ring->field->is_zero(c)) out.terms_.push_back({Monomial(ring->nvars()), c});
        return out;
    }

    static Polynomial from_int(RingPtr ring, std::int64_t n) {
        return constant(ring, ring->field->from_int(n));
    }

    static Polynomial variable(RingPtr ring, std::size_t index) {
        if (index >= ring->nvars()) throw ArgumentError("variable index out of range");
        Monomial m(ring->nvars());
        m.exps[index] = 1;
        Polynomial out(ring);
        out.terms_.push_back({std::move(m), ring->field->one()});
        return out;
    }

    static Polynomial monomial(RingPtr ring, Monomial m, Field::Elem c) {
        Polynomial out(ring);
        if (!ring->field->is_zero(c)) out.terms_.push_back({std::move(m), c});
        return out;
    }

    const RingPtr& ring() const { return ring_; }
    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    const Term& leading_term() const {
        if (terms_.empty()) throw StructuralError("zero polynomial has no leading term");
        return terms_.front();
    }
    const Monomial& leading_monomial() const { return leading_term().mono; }

    std::uint32_t degree() const {
        std::uint32_t d = 0;
        for (const Term& t : terms_) d = std::max(d, t.mono.degree());
        return d;
    }

    Field::Elem constant_coeff() const {
        for (const Term& t : terms_)
            if (t.mono.is_one()) return t.coeff;
        return 0;
    }

    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }

    // Coefficients of the degree-1 part, one slot per ambient variable.
    std::vector<Field::Elem> linear_part() const {
        std::vector<Field::Elem> out(ring_->nvars(), 0);
        for (const Term& t : terms_) {
            if (t.mono.degree() != 1) continue;
            for (std::size_t i = 0; i < out.size(); ++i)
                if (t.mono.exps[i] == 1) out[i] = t.coeff;
        }
        return out;
    }

    Polynomial operator-() const {
        Polynomial out(*this);
        for (Term& t : out.terms_) t.coeff = ring_->field->neg(t.coeff);
        return out;
    }

    Polynomial operator+(const Polynomial& o) const {
        require_compatible(o);
        Polynomial out(ring_);
        const Field& F = *ring_->field;
        std::size_t i = 0, j = 0;
        while (i < terms_.size() || j < o.terms_.size()) {
            if (j == o.terms_.size()) { out.terms_.push_back(terms_[i++]); continue; }
            if (i == terms_.size()) { out.terms_.push_back(o.terms_[j++]); continue; }
            int cmp = ring_->order.compare(terms_[i].mono, o.terms_[j].mono);
            if (cmp > 0) out.terms_.push_back(terms_[i++]);
            else if (cmp < 0) out.terms_.push_back(o.terms_[j++]);
            else {
                Field::Elem c = F.add(terms_[i].coeff, o.terms_[j].coeff);
                if (!F.is_zero(c)) out.terms_.push_back({terms_[i].mono, c});
                ++i; ++j;
            }
        }
        return out;
    }

    Polynomial operator-(const Polynomial& o) const { return *this + (-o); }

    Polynomial scaled(Field::Elem c) const {
        const Field& F = *ring_->field;
        if (F.is_zero(c)) return Polynomial(ring_);
        Polynomial out(ring_);
        out.terms_.reserve(terms_.size());
        for (const Term& t : terms_) out.terms_.push_back({t.mono, F.mul(t.coeff, c)});
        return out;
    }

    Polynomial times_term(const Monomial& m, Field::Elem c) const {
        const Field& F = *ring_->field;
        if (F.is_zero(c)) return Polynomial(ring_);
        const std::uint32_t cap = Limits::current().degree_cap;
        Polynomial out(ring_);
        out.terms_.reserve(terms_.size());
        for (const Term& t : terms_) {
            Monomial prod = t.mono * m;
            if (prod.degree() > cap)
                throw ResourceError("monomial degree cap " + std::to_string(cap) + " exceeded");
            out.terms_.push_back({std::move(prod), F.mul(t.coeff, c)});
        }
        return out;
    }

    Polynomial operator*(const Polynomial& o) const {
        require_compatible(o);
        const Field& F = *ring_->field;
        const std::uint32_t cap = Limits::current().degree_cap;
        auto cmp = [this](const Monomial& a, const Monomial& b) { return ring_->order.greater(a, b); };
        std::map<Monomial, Field::Elem, decltype(cmp)> acc(cmp);
        for (const Term& a : terms_)
            for (const Term& b : o.terms_) {
                Monomial m = a.mono * b.mono;
                if (m.degree() > cap)
                    throw ResourceError("monomial degree cap " + std::to_string(cap) + " exceeded");
                auto [it, fresh] = acc.try_emplace(std::move(m), 0);
                it->second = F.add(it->second, F.mul(a.coeff, b.coeff));
            }
        Polynomial out(ring_);
        for (auto& [m, c] : acc)
            if (!F.is_zero(c)) out.terms_.push_back({m, c});
        return out;
    }

    Polynomial pow(std::uint32_t n) const {
        Polynomial out = from_int(ring_, 1);
        Polynomial base = *this;
        while (n) {
            if (n & 1) out = out * base;
            n >>= 1;
            if (n) base = base * base;
        }
        return out;
    }

    bool operator==(const Polynomial& o) const {
        if (!ring_->same(*o.ring_)) return false;
        if (terms_.size() != o.terms_.size()) return false;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (terms_[i].coeff != o.terms_[i].coeff || terms_[i].mono != o.terms_[i].mono) return false;
        return true;
    }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial monic() const {
        if (is_zero()) return *this;
        return scaled(ring_->field->inv(leading_term().coeff));
    }

    // Same terms re-sorted in another order on the same ambient ring.
    Polynomial with_ring(const RingPtr& target) const {
        if (!ring_->same_ambient(*target)) throw StructuralError("with_ring requires the same ambient ring");
        Polynomial out(target);
        out.terms_ = terms_;
        std::sort(out.terms_.begin(), out.terms_.end(), [&](const Term& a, const Term& b) {
            return target->order.greater(a.mono, b.mono);
        });
        return out;
    }

    // Image under the ring map sending variable i to images[i]; coefficients
    // are carried over through `coeff_map` when the fields differ.
    Polynomial substitute(const RingPtr& target, const std::vector<Polynomial>& images,
                          const std::vector<Field::Elem>* coeff_map = nullptr) const {
        if (images.size() != ring_->nvars())
            throw ArgumentError("substitution needs one image per variable");
        Polynomial out = Polynomial::zero(target);
        std::vector<std::vector<Polynomial>> powers(images.size());
        auto power_of = [&](std::size_t v, std::uint32_t e) -> const Polynomial& {
            auto& cache = powers[v];
            if (cache.empty()) cache.push_back(Polynomial::from_int(target, 1));
            while (cache.size() <= e) cache.push_back(cache.back() * images[v]);
            return cache[e];
        };
        for (const Term& t : terms_) {
            Field::Elem c = coeff_map ? (*coeff_map)[t.coeff] : t.coeff;
            Polynomial acc = Polynomial::constant(target, c);
            for (std::size_t v = 0; v < images.size(); ++v)
                if (t.mono.exps[v] > 0) acc = acc * power_of(v, t.mono.exps[v]);
            out = out + acc;
        }
        return out;
    }

    std::string to_string() const {
        if (terms_.empty()) return "0";
        const Field& F = *ring_->field;
        std::string out;
        for (const Term& t : terms_) {
            std::string c = F.to_string(t.coeff);
            bool composite = c.find('+') != std::string::npos;
            if (!out.empty()) out += "+";
            if (t.mono.is_one()) {
                out += composite ? "(" + c + ")" : c;
            } else {
                if (c != "1") out += (composite ? "(" + c + ")" : c) + "*";
                out += ring_->monomial_string(t.mono);
            }
        }
        return out;
    }

private:
    void require_compatible(const Polynomial& o) const {
        if (!ring_ || !o.ring_ || !ring_->same(*o.ring_))
            throw StructuralError("polynomials live in different rings");
    }

    RingPtr ring_;
    std::vector<Term> terms_;
};

// Minimal expression parser used by tests and programmatic construction:
// + - * ^, integer literals, variable names and parentheses.  The fixture
// DSL has its own parser with positioned diagnostics; this one just throws.
inline Polynomial parse_polynomial(const RingPtr& ring, const std::string& text) {
    struct Parser {
        const RingPtr& ring;
        const std::string& s;
        std::size_t pos = 0;

        void skip() { while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos; }
        bool eat(char c) {
            skip();
            if (pos < s.size() && s[pos] == c) { ++pos; return true; }
            return false;
        }

        Polynomial expr() {
            skip();
            bool neg = eat('-');
            Polynomial acc = term();
            if (neg) acc = -acc;
            while (true) {
                skip();
                if (eat('+')) acc = acc + term();
                else if (eat('-')) acc = acc - term();
                else break;
            }
            return acc;
        }

        Polynomial term() {
            Polynomial acc = factor();
            while (true) {
                skip();
                if (eat('*')) acc = acc * factor();
                else break;
            }
            return acc;
        }

        Polynomial factor() {
            Polynomial base = atom();
            skip();
            if (eat('^')) {
                skip();
                std::size_t start = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                if (start == pos) throw ArgumentError("expected exponent after '^' in \"" + s + "\"");
                base = base.pow(static_cast<std::uint32_t>(std::stoul(s.substr(start, pos - start))));
            }
            return base;
        }

        Polynomial atom() {
            skip();
            if (pos >= s.size()) throw ArgumentError("unexpected end of polynomial \"" + s + "\"");
            char c = s[pos];
            if (c == '(') {
                ++pos;
                Polynomial inner = expr();
                if (!eat(')')) throw ArgumentError("missing ')' in \"" + s + "\"");
                return inner;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                std::size_t start = pos;
                while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
                return Polynomial::from_int(ring, std::stoll(s.substr(start, pos - start)));
            }
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                std::size_t start = pos;
                while (pos < s.size() &&
                       (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '\''))
                    ++pos;
                std::string name = s.substr(start, pos - start);
                int idx = ring->var_index(name);
                if (idx < 0) throw ArgumentError("unknown variable '" + name + "' in \"" + s + "\"");
                return Polynomial::variable(ring, static_cast<std::size_t>(idx));
            }
            throw ArgumentError(std::string("unexpected character '") + c + "' in \"" + s + "\"");
        }
    };
    Parser parser{ring, text};
    Polynomial out = parser.expr();
    parser.skip();
    if (parser.pos != text.size())
        throw ArgumentError("trailing input in polynomial \"" + text + "\"");
    return out;
}

inline std::vector<Polynomial> parse_polynomials(const RingPtr& ring,
                                                 const std::vector<std::string>& texts) {
    std::vector<Polynomial> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(parse_polynomial(ring, t));
    return out;
}

} // namespace lech

#endif
