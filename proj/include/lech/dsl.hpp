#ifndef LECH_DSL_HPP
#define LECH_DSL_HPP

#include <cctype>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lech/extensions.hpp"

namespace lech::dsl {

struct Pos {
    int line = 1;
    int col = 1;
};

// Position-annotated parse diagnostic with the token set that would have
// been accepted.
struct Diagnostic {
    Pos pos;
    std::string message;
    std::vector<std::string> expected;

    std::string to_string() const {
        std::string out = std::to_string(pos.line) + ":" + std::to_string(pos.col) + ": " + message;
        if (!expected.empty()) {
            out += " (expected";
            for (const auto& e : expected) out += " " + e;
            out += ")";
        }
        return out;
    }
};

// ---------------------------------------------------------------------------
// Expression AST (kept as written, for faithful pretty-printing)

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Int, Var, Add, Sub, Mul, Pow, Neg };
    Kind kind;
    std::int64_t value = 0;       // Int
    std::string name;             // Var
    ExprPtr lhs, rhs;             // Add/Sub/Mul; Pow uses lhs and value
    static ExprPtr integer(std::int64_t v) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Int;
        e->value = v;
        return e;
    }
    static ExprPtr var(std::string n) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Var;
        e->name = std::move(n);
        return e;
    }
    static ExprPtr node(Kind k, ExprPtr a, ExprPtr b) {
        auto e = std::make_shared<Expr>();
        e->kind = k;
        e->lhs = std::move(a);
        e->rhs = std::move(b);
        return e;
    }
    static ExprPtr pow(ExprPtr base, std::int64_t n) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Pow;
        e->lhs = std::move(base);
        e->value = n;
        return e;
    }
    static ExprPtr neg(ExprPtr inner) {
        auto e = std::make_shared<Expr>();
        e->kind = Kind::Neg;
        e->lhs = std::move(inner);
        return e;
    }
};

inline int precedence(Expr::Kind k) {
    switch (k) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Neg: return 1;
    case Expr::Kind::Mul: return 2;
    case Expr::Kind::Pow: return 3;
    default: return 4;
    }
}

inline std::string print_expr(const ExprPtr& e, int parent_prec = 0) {
    std::string out;
    int prec = precedence(e->kind);
    switch (e->kind) {
    case Expr::Kind::Int: out = std::to_string(e->value); break;
    case Expr::Kind::Var: out = e->name; break;
    case Expr::Kind::Add: out = print_expr(e->lhs, prec) + "+" + print_expr(e->rhs, prec + 1); break;
    case Expr::Kind::Sub: out = print_expr(e->lhs, prec) + "-" + print_expr(e->rhs, prec + 1); break;
    case Expr::Kind::Mul: out = print_expr(e->lhs, prec) + "*" + print_expr(e->rhs, prec + 1); break;
    case Expr::Kind::Pow: out = print_expr(e->lhs, prec + 1) + "^" + std::to_string(e->value); break;
    case Expr::Kind::Neg: out = "-" + print_expr(e->lhs, prec + 1); break;
    }
    if (prec < parent_prec) out = "(" + out + ")";
    return out;
}

// ---------------------------------------------------------------------------
// Statements

struct FieldDecl {
    std::string name;
    std::uint32_t p = 0, k = 1;
};
struct RingDecl {
    std::string name, field;
    std::vector<std::string> vars;
    std::vector<ExprPtr> relations;
};
struct IdealDecl {
    std::string name, ring;
    std::vector<ExprPtr> gens;
};
struct MapDecl {
    std::string name, source, target;
    std::vector<std::pair<std::string, ExprPtr>> sends;
};
struct CheckDecl {
    std::string kind, target;
    std::vector<ExprPtr> sop;
    std::string ideal;
    std::optional<std::uint32_t> emax;
    std::optional<std::uint32_t> vars_n;
};

using Statement = std::variant<FieldDecl, RingDecl, IdealDecl, MapDecl, CheckDecl>;

struct Document {
    std::vector<Statement> statements;
};

inline const std::vector<std::string>& known_checks() {
    static const std::vector<std::string> kinds = {
        "lech", "edim", "hk_chain", "hk_sandwich", "adjunction",
        "mingen_bound", "mingen_growth", "interchange", "chi1", "embdim", "probe"};
    return kinds;
}

// ---------------------------------------------------------------------------
// Lexer

namespace detail {

struct Token {
    enum class Kind { Ident, Int, Symbol, End } kind;
    std::string text;
    std::int64_t value = 0;
    Pos pos;
};

class Lexer {
public:
    explicit Lexer(const std::string& text) : text_(text) {}

    Token next() {
        skip_ws();
        Token tok;
        tok.pos = pos_;
        if (i_ >= text_.size()) {
            tok.kind = Token::Kind::End;
            return tok;
        }
        char c = text_[i_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = i_;
            while (i_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i_])) ||
                                         text_[i_] == '_' || text_[i_] == '\''))
                advance();
            tok.kind = Token::Kind::Ident;
            tok.text = text_.substr(start, i_ - start);
            return tok;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = i_;
            while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) advance();
            tok.kind = Token::Kind::Int;
            tok.text = text_.substr(start, i_ - start);
            try {
                tok.value = std::stoll(tok.text);
            } catch (...) {
                tok.value = 0;
            }
            return tok;
        }
        if (c == '-' && i_ + 1 < text_.size() && text_[i_ + 1] == '>') {
            advance();
            advance();
            tok.kind = Token::Kind::Symbol;
            tok.text = "->";
            return tok;
        }
        advance();
        tok.kind = Token::Kind::Symbol;
        tok.text = std::string(1, c);
        return tok;
    }

private:
    void skip_ws() {
        while (i_ < text_.size()) {
            char c = text_[i_];
            if (c == '#') {
                while (i_ < text_.size() && text_[i_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }
    void advance() {
        if (text_[i_] == '\n') {
            ++pos_.line;
            pos_.col = 1;
        } else {
            ++pos_.col;
        }
        ++i_;
    }

    const std::string& text_;
    std::size_t i_ = 0;
    Pos pos_;
};

} // namespace detail

// ---------------------------------------------------------------------------
// Parser: total — every input yields a Document or a Diagnostic.

class Parser {
public:
    explicit Parser(const std::string& text) : lexer_(text) { bump(); }

    std::variant<Document, Diagnostic> parse() {
        Document doc;
        while (cur_.kind != detail::Token::Kind::End) {
            if (!at_ident()) return fail("statement keyword", {"field", "ring", "ideal", "map", "check"});
            std::string kw = cur_.text;
            if (kw == "field") {
                if (auto d = parse_field(doc); d) return *d;
            } else if (kw == "ring") {
                if (auto d = parse_ring(doc); d) return *d;
            } else if (kw == "ideal") {
                if (auto d = parse_ideal(doc); d) return *d;
            } else if (kw == "map") {
                if (auto d = parse_map(doc); d) return *d;
            } else if (kw == "check") {
                if (auto d = parse_check(doc); d) return *d;
            } else {
                return fail("unknown statement '" + kw + "'",
                            {"field", "ring", "ideal", "map", "check"});
            }
        }
        return doc;
    }

private:
    using MaybeDiag = std::optional<Diagnostic>;

    void bump() { cur_ = lexer_.next(); }
    bool at_ident() const { return cur_.kind == detail::Token::Kind::Ident; }
    bool at_symbol(const std::string& s) const {
        return cur_.kind == detail::Token::Kind::Symbol && cur_.text == s;
    }

    Diagnostic fail(const std::string& msg, std::vector<std::string> expected = {}) const {
        std::string found = cur_.kind == detail::Token::Kind::End ? "end of input"
                                                                  : "'" + cur_.text + "'";
        return Diagnostic{cur_.pos, msg + ", found " + found, std::move(expected)};
    }

    MaybeDiag expect_symbol(const std::string& s) {
        if (!at_symbol(s)) return fail("expected '" + s + "'", {s});
        bump();
        return std::nullopt;
    }

    MaybeDiag expect_ident(std::string& out, const char* what) {
        if (!at_ident()) return fail(std::string("expected ") + what, {"identifier"});
        out = cur_.text;
        bump();
        return std::nullopt;
    }

    MaybeDiag expect_int(std::int64_t& out) {
        if (cur_.kind != detail::Token::Kind::Int) return fail("expected integer", {"integer"});
        out = cur_.value;
        bump();
        return std::nullopt;
    }

    // field F(p[,k]);
    MaybeDiag parse_field(Document& doc) {
        bump();
        FieldDecl decl;
        if (auto d = expect_ident(decl.name, "field name")) return d;
        if (auto d = expect_symbol("(")) return d;
        std::int64_t p = 0, k = 1;
        if (auto d = expect_int(p)) return d;
        if (at_symbol(",")) {
            bump();
            if (auto d = expect_int(k)) return d;
        }
        if (auto d = expect_symbol(")")) return d;
        if (auto d = expect_symbol(";")) return d;
        decl.p = static_cast<std::uint32_t>(p);
        decl.k = static_cast<std::uint32_t>(k);
        doc.statements.emplace_back(std::move(decl));
        return std::nullopt;
    }

    // ring R = F[x,y] / (g1, g2);
    MaybeDiag parse_ring(Document& doc) {
        bump();
        RingDecl decl;
        if (auto d = expect_ident(decl.name, "ring name")) return d;
        if (auto d = expect_symbol("=")) return d;
        if (auto d = expect_ident(decl.field, "field name")) return d;
        if (auto d = expect_symbol("[")) return d;
        while (true) {
            std::string v;
            if (auto d = expect_ident(v, "variable name")) return d;
            decl.vars.push_back(std::move(v));
            if (at_symbol(",")) { bump(); continue; }
            break;
        }
        if (auto d = expect_symbol("]")) return d;
        if (at_symbol("/")) {
            bump();
            if (auto d = expect_symbol("(")) return d;
            if (auto d = parse_expr_list(decl.relations, ")")) return d;
        }
        if (auto d = expect_symbol(";")) return d;
        doc.statements.emplace_back(std::move(decl));
        return std::nullopt;
    }

    // ideal I = (f1, f2) in R;
    MaybeDiag parse_ideal(Document& doc) {
        bump();
        IdealDecl decl;
        if (auto d = expect_ident(decl.name, "ideal name")) return d;
        if (auto d = expect_symbol("=")) return d;
        if (auto d = expect_symbol("(")) return d;
        if (auto d = parse_expr_list(decl.gens, ")")) return d;
        std::string kw;
        if (auto d = expect_ident(kw, "'in'")) return d;
        if (kw != "in") return fail("expected 'in'", {"in"});
        if (auto d = expect_ident(decl.ring, "ring name")) return d;
        if (auto d = expect_symbol(";")) return d;
        doc.statements.emplace_back(std::move(decl));
        return std::nullopt;
    }

    // map f : R -> S sends x -> expr, y -> expr;
    MaybeDiag parse_map(Document& doc) {
        bump();
        MapDecl decl;
        if (auto d = expect_ident(decl.name, "map name")) return d;
        if (auto d = expect_symbol(":")) return d;
        if (auto d = expect_ident(decl.source, "source ring")) return d;
        if (auto d = expect_symbol("->")) return d;
        if (auto d = expect_ident(decl.target, "target ring")) return d;
        std::string kw;
        if (auto d = expect_ident(kw, "'sends'")) return d;
        if (kw != "sends") return fail("expected 'sends'", {"sends"});
        while (true) {
            std::string v;
            if (auto d = expect_ident(v, "source variable")) return d;
            if (auto d = expect_symbol("->")) return d;
            ExprPtr e;
            if (auto d = parse_expr(e)) return d;
            decl.sends.emplace_back(std::move(v), std::move(e));
            if (at_symbol(",")) { bump(); continue; }
            break;
        }
        if (auto d = expect_symbol(";")) return d;
        doc.statements.emplace_back(std::move(decl));
        return std::nullopt;
    }

    // check KIND TARGET [with sop (..)] [with ideal NAME] [with vars N] [emax N];
    MaybeDiag parse_check(Document& doc) {
        bump();
        CheckDecl decl;
        if (auto d = expect_ident(decl.kind, "check kind")) return d;
        bool known = false;
        for (const auto& k : known_checks()) known = known || k == decl.kind;
        if (!known) return fail("unknown check kind '" + decl.kind + "'", known_checks());
        if (auto d = expect_ident(decl.target, "check target")) return d;
        while (at_ident() && (cur_.text == "with" || cur_.text == "emax")) {
            if (cur_.text == "emax") {
                bump();
                std::int64_t n = 0;
                if (auto d = expect_int(n)) return d;
                decl.emax = static_cast<std::uint32_t>(n);
                continue;
            }
            bump();  // 'with'
            std::string what;
            if (auto d = expect_ident(what, "'sop', 'ideal' or 'vars'")) return d;
            if (what == "sop") {
                if (auto d = expect_symbol("(")) return d;
                if (auto d = parse_expr_list(decl.sop, ")")) return d;
            } else if (what == "ideal") {
                if (auto d = expect_ident(decl.ideal, "ideal name")) return d;
            } else if (what == "vars") {
                std::int64_t n = 0;
                if (auto d = expect_int(n)) return d;
                decl.vars_n = static_cast<std::uint32_t>(n);
            } else {
                return fail("unknown clause 'with " + what + "'", {"sop", "ideal", "vars"});
            }
        }
        if (auto d = expect_symbol(";")) return d;
        doc.statements.emplace_back(std::move(decl));
        return std::nullopt;
    }

    MaybeDiag parse_expr_list(std::vector<ExprPtr>& out, const std::string& closer) {
        if (at_symbol(closer)) { bump(); return std::nullopt; }  // empty list
        while (true) {
            ExprPtr e;
            if (auto d = parse_expr(e)) return d;
            out.push_back(std::move(e));
            if (at_symbol(",")) { bump(); continue; }
            break;
        }
        return expect_symbol(closer);
    }

    MaybeDiag parse_expr(ExprPtr& out) {
        bool neg = false;
        if (at_symbol("-")) { neg = true; bump(); }
        ExprPtr acc;
        if (auto d = parse_term(acc)) return d;
        if (neg) acc = Expr::neg(acc);
        while (at_symbol("+") || at_symbol("-")) {
            bool plus = at_symbol("+");
            bump();
            ExprPtr rhs;
            if (auto d = parse_term(rhs)) return d;
            acc = Expr::node(plus ? Expr::Kind::Add : Expr::Kind::Sub, acc, rhs);
        }
        out = acc;
        return std::nullopt;
    }

    MaybeDiag parse_term(ExprPtr& out) {
        ExprPtr acc;
        if (auto d = parse_factor(acc)) return d;
        while (at_symbol("*")) {
            bump();
            ExprPtr rhs;
            if (auto d = parse_factor(rhs)) return d;
            acc = Expr::node(Expr::Kind::Mul, acc, rhs);
        }
        out = acc;
        return std::nullopt;
    }

    MaybeDiag parse_factor(ExprPtr& out) {
        ExprPtr base;
        if (at_symbol("(")) {
            bump();
            if (auto d = parse_expr(base)) return d;
            if (auto d = expect_symbol(")")) return d;
        } else if (cur_.kind == detail::Token::Kind::Int) {
            base = Expr::integer(cur_.value);
            bump();
        } else if (at_ident()) {
            base = Expr::var(cur_.text);
            bump();
        } else {
            return fail("expected polynomial factor", {"integer", "variable", "("});
        }
        if (at_symbol("^")) {
            bump();
            std::int64_t n = 0;
            if (auto d = expect_int(n)) return d;
            base = Expr::pow(base, n);
        }
        out = base;
        return std::nullopt;
    }

    detail::Lexer lexer_;
    detail::Token cur_;
};

inline std::variant<Document, Diagnostic> parse_fixture(const std::string& text) {
    return Parser(text).parse();
}

// Canonical statement-per-line form; parsing the output reproduces the AST.
inline std::string pretty_print(const Document& doc) {
    std::string out;
    auto exprs = [](const std::vector<ExprPtr>& es) {
        std::string s;
        for (std::size_t i = 0; i < es.size(); ++i) {
            if (i) s += ", ";
            s += print_expr(es[i]);
        }
        return s;
    };
    for (const Statement& st : doc.statements) {
        if (const auto* f = std::get_if<FieldDecl>(&st)) {
            out += "field " + f->name + "(" + std::to_string(f->p);
            if (f->k != 1) out += ", " + std::to_string(f->k);
            out += ");\n";
        } else if (const auto* r = std::get_if<RingDecl>(&st)) {
            out += "ring " + r->name + " = " + r->field + "[";
            for (std::size_t i = 0; i < r->vars.size(); ++i) {
                if (i) out += ", ";
                out += r->vars[i];
            }
            out += "]";
            if (!r->relations.empty()) out += " / (" + exprs(r->relations) + ")";
            out += ";\n";
        } else if (const auto* i = std::get_if<IdealDecl>(&st)) {
            out += "ideal " + i->name + " = (" + exprs(i->gens) + ") in " + i->ring + ";\n";
        } else if (const auto* m = std::get_if<MapDecl>(&st)) {
            out += "map " + m->name + " : " + m->source + " -> " + m->target + " sends ";
            for (std::size_t j = 0; j < m->sends.size(); ++j) {
                if (j) out += ", ";
                out += m->sends[j].first + " -> " + print_expr(m->sends[j].second);
            }
            out += ";\n";
        } else if (const auto* c = std::get_if<CheckDecl>(&st)) {
            out += "check " + c->kind + " " + c->target;
            if (!c->sop.empty()) out += " with sop (" + exprs(c->sop) + ")";
            if (!c->ideal.empty()) out += " with ideal " + c->ideal;
            if (c->vars_n) out += " with vars " + std::to_string(*c->vars_n);
            if (c->emax) out += " emax " + std::to_string(*c->emax);
            out += ";\n";
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Elaboration: named semantic objects out of a parsed document

struct Fixture {
    std::string id;
    std::map<std::string, FieldPtr> fields;
    std::map<std::string, QuotientRing> rings;
    std::map<std::string, Ideal> ideals;
    std::map<std::string, std::string> ideal_ring;  // ideal name -> ring name
    std::map<std::string, LocalMap> maps;
    std::vector<CheckDecl> checks;

    const QuotientRing& ring(const std::string& name) const {
        auto it = rings.find(name);
        if (it == rings.end()) throw ArgumentError("unknown ring '" + name + "'");
        return it->second;
    }
    const LocalMap& map(const std::string& name) const {
        auto it = maps.find(name);
        if (it == maps.end()) throw ArgumentError("unknown map '" + name + "'");
        return it->second;
    }
    // "m" falls back to the maximal ideal of the given ring
    Ideal ideal_in(const std::string& name, const QuotientRing& q) const {
        auto it = ideals.find(name);
        if (it != ideals.end()) return it->second;
        if (name == "m" || name.empty()) return maximal_ideal(q.ring());
        throw ArgumentError("unknown ideal '" + name + "'");
    }
};

inline Polynomial eval_expr(const ExprPtr& e, const RingPtr& ring) {
    switch (e->kind) {
    case Expr::Kind::Int: return Polynomial::from_int(ring, e->value);
    case Expr::Kind::Var: {
        int idx = ring->var_index(e->name);
        if (idx < 0) throw ArgumentError("unknown variable '" + e->name + "'");
        return Polynomial::variable(ring, static_cast<std::size_t>(idx));
    }
    case Expr::Kind::Add: return eval_expr(e->lhs, ring) + eval_expr(e->rhs, ring);
    case Expr::Kind::Sub: return eval_expr(e->lhs, ring) - eval_expr(e->rhs, ring);
    case Expr::Kind::Mul: return eval_expr(e->lhs, ring) * eval_expr(e->rhs, ring);
    case Expr::Kind::Pow: return eval_expr(e->lhs, ring).pow(static_cast<std::uint32_t>(e->value));
    case Expr::Kind::Neg: return -eval_expr(e->lhs, ring);
    }
    throw ArgumentError("malformed expression");
}

inline Fixture elaborate(const Document& doc, const std::string& fixture_id) {
    Fixture fx;
    fx.id = fixture_id;
    auto fresh = [](bool inserted, const char* what, const std::string& name) {
        if (!inserted) throw ArgumentError(std::string(what) + " '" + name + "' declared twice");
    };
    for (const Statement& st : doc.statements) {
        if (const auto* f = std::get_if<FieldDecl>(&st)) {
            fresh(fx.fields.emplace(f->name, make_field(f->p, f->k)).second, "field", f->name);
        } else if (const auto* r = std::get_if<RingDecl>(&st)) {
            auto fit = fx.fields.find(r->field);
            if (fit == fx.fields.end())
                throw ArgumentError("ring '" + r->name + "' uses unknown field '" + r->field + "'");
            RingPtr ambient = make_ring(fit->second, r->vars);
            std::vector<Polynomial> rels;
            for (const auto& e : r->relations) rels.push_back(eval_expr(e, ambient));
            fresh(fx.rings.emplace(r->name, QuotientRing(ambient, std::move(rels))).second, "ring",
                  r->name);
        } else if (const auto* i = std::get_if<IdealDecl>(&st)) {
            const QuotientRing& q = fx.ring(i->ring);
            std::vector<Polynomial> gens;
            for (const auto& e : i->gens) gens.push_back(eval_expr(e, q.ring()));
            fresh(fx.ideals.emplace(i->name, Ideal(q.ring(), std::move(gens))).second, "ideal",
                  i->name);
            fx.ideal_ring[i->name] = i->ring;
        } else if (const auto* m = std::get_if<MapDecl>(&st)) {
            const QuotientRing& src = fx.ring(m->source);
            const QuotientRing& dst = fx.ring(m->target);
            std::vector<Polynomial> images(src.ring()->nvars(), Polynomial::zero(dst.ring()));
            std::vector<bool> assigned(src.ring()->nvars(), false);
            for (const auto& [var, expr] : m->sends) {
                int idx = src.ring()->var_index(var);
                if (idx < 0)
                    throw ArgumentError("map '" + m->name + "' sends unknown variable '" + var + "'");
                images[static_cast<std::size_t>(idx)] = eval_expr(expr, dst.ring());
                assigned[static_cast<std::size_t>(idx)] = true;
            }
            for (std::size_t v = 0; v < assigned.size(); ++v)
                if (!assigned[v])
                    throw ArgumentError("map '" + m->name + "' never sends variable '" +
                                        src.ring()->vars[v] + "'");
            fresh(fx.maps.emplace(m->name, make_local_map(src, dst, std::move(images))).second,
                  "map", m->name);
        } else if (const auto* c = std::get_if<CheckDecl>(&st)) {
            fx.checks.push_back(*c);
        }
    }
    return fx;
}

} // namespace lech::dsl

#endif
