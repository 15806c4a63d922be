#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "lech/field.hpp"
#include "lech/groebner.hpp"
#include "lech/polynomial.hpp"
#include "oracles.hpp"

using namespace lech;

namespace {

RingPtr ring_f5_xy() { return make_ring(make_field(5), {"x", "y"}); }

Polynomial P(const RingPtr& r, const std::string& s) { return parse_polynomial(r, s); }

GroebnerBasis gb_of(const RingPtr& r, const std::vector<std::string>& gens) {
    return groebner_basis(parse_polynomials(r, gens), r);
}

} // namespace

TEST_CASE("prime field arithmetic") {
    Field f5(5);
    REQUIRE(f5.add(3, 4) == 2);
    REQUIRE(f5.mul(3, 4) == 2);
    REQUIRE(f5.neg(2) == 3);
    REQUIRE(f5.inv(3) == 2);
    REQUIRE(f5.from_int(-1) == 4);
    REQUIRE_THROWS_AS(Field(6), ArgumentError);
    REQUIRE_THROWS_AS(f5.inv(0), ArgumentError);

    // a large prime near the size bound: products exceed 32 bits
    Field big(1048573);
    Field::Elem a = 1048572, b = 1048571;
    REQUIRE(big.mul(a, b) == 2);  // (-1)(-2) mod p
    REQUIRE(big.mul(big.inv(a), a) == 1);
}

TEST_CASE("extension field arithmetic and modulus search") {
    Field f4(2, 2);
    // lowest irreducible tail over F_2 is x^2+x+1
    REQUIRE(f4.modulus_tail() == std::vector<std::uint32_t>{1, 1});
    // g * (g+1) = g^2+g = 1 in F_4
    Field::Elem g = 2, g1 = 3;
    REQUIRE(f4.mul(g, g1) == 1);
    REQUIRE(f4.inv(g) == g1);
    // every nonzero element has multiplicative order dividing q-1
    Field f9(3, 2);
    for (Field::Elem a = 1; a < f9.q(); ++a) REQUIRE(f9.pow(a, f9.q() - 1) == 1);
    Field f16(2, 4);
    for (Field::Elem a = 1; a < f16.q(); ++a) REQUIRE(f16.mul(a, f16.inv(a)) == 1);
}

TEST_CASE("field embedding is a ring homomorphism") {
    Field f4(2, 2);
    Field f16(2, 4);
    auto phi = f4.embedding_into(f16);
    REQUIRE(phi[0] == 0);
    REQUIRE(phi[1] == 1);
    for (Field::Elem a = 0; a < 4; ++a)
        for (Field::Elem b = 0; b < 4; ++b) {
            REQUIRE(phi[f4.add(a, b)] == f16.add(phi[a], phi[b]));
            REQUIRE(phi[f4.mul(a, b)] == f16.mul(phi[a], phi[b]));
        }
    REQUIRE_THROWS_AS(f4.embedding_into(Field(2, 3)), ArgumentError);
}

TEST_CASE("monomial order comparisons") {
    MonomialOrder grevlex = MonomialOrder::grevlex();
    Monomial x3({3, 0}), y2({0, 2}), xy({1, 1});
    REQUIRE(grevlex.greater(x3, y2));  // higher degree wins
    REQUIRE(grevlex.greater(Monomial({2, 0}), xy));
    MonomialOrder lex = MonomialOrder::lex();
    REQUIRE(lex.greater(Monomial({1, 0}), y2));  // x > y^2 under lex

    // block order eliminating variable 0 puts any x-power above all y-powers
    MonomialOrder block = MonomialOrder::block({0});
    REQUIRE(block.greater(Monomial({1, 0}), Monomial({0, 9})));
}

TEST_CASE("polynomial parse, arithmetic, printing") {
    auto r = ring_f5_xy();
    Polynomial f = P(r, "y^2 - x^3");
    REQUIRE(f.terms().size() == 2);
    REQUIRE(f.leading_monomial() == Monomial({3, 0}));  // grevlex: degree first
    REQUIRE(f.to_string() == "4*x^3+y^2");
    REQUIRE(P(r, "(x+y)^2") == P(r, "x^2+2*x*y+y^2"));
    REQUIRE((f - f).is_zero());
    REQUIRE(P(r, "x*y - 1").constant_coeff() == 4);
    REQUIRE_THROWS_AS(P(r, "x + z"), ArgumentError);

    auto linear = P(r, "2*x + 3*y + x*y").linear_part();
    REQUIRE(linear == std::vector<Field::Elem>{2, 3});
}

TEST_CASE("groebner basis examples") {
    auto r = ring_f5_xy();

    SECTION("already a basis") {
        auto G = gb_of(r, {"x"});
        REQUIRE(G.gens.size() == 1);
        REQUIRE(G.gens[0] == P(r, "x"));
    }
    SECTION("cusp plus axis collapses to monomials") {
        auto G = gb_of(r, {"y^2 - x^3", "x"});
        REQUIRE(G.gens.size() == 2);
        // reduced basis is {x, y^2} (sorted descending by leading monomial)
        REQUIRE(G.gens[0] == P(r, "y^2"));
        REQUIRE(G.gens[1] == P(r, "x"));
    }
    SECTION("invertible and nilpotent forces the unit ideal") {
        auto G = gb_of(r, {"x*y - 1", "x^2"});
        REQUIRE(G.is_unit_ideal());
    }
    SECTION("zero ideal") {
        auto G = groebner_basis({}, r);
        REQUIRE(G.is_zero_ideal());
        REQUIRE(normal_form(P(r, "x+y"), G) == P(r, "x+y"));
    }
}

TEST_CASE("normal form examples and properties") {
    auto r = ring_f5_xy();
    auto G = gb_of(r, {"y^2 - x^3"});
    // leading monomial of y^2-x^3 under grevlex is x^3, so x^3 reduces to y^2
    REQUIRE(normal_form(P(r, "x^3"), G) == P(r, "y^2"));
    REQUIRE(normal_form(Polynomial::zero(r), G).is_zero());
    auto Gx = gb_of(r, {"x"});
    REQUIRE(normal_form(P(r, "y"), Gx) == P(r, "y"));

    SECTION("idempotent and K-linear") {
        std::mt19937 rng(11);
        auto draw = [&](std::uint32_t n) { return static_cast<std::uint32_t>(rng() % n); };
        auto random_poly = [&] {
            Polynomial acc = Polynomial::zero(r);
            for (int t = 0; t < 6; ++t) {
                Monomial m({draw(4), draw(4)});
                acc = acc + Polynomial::monomial(r, m, r->field->from_int(draw(5)));
            }
            return acc;
        };
        auto G2 = gb_of(r, {"y^2 - x^3", "x^4"});
        for (int i = 0; i < 25; ++i) {
            Polynomial f = random_poly(), g = random_poly();
            Field::Elem a = r->field->from_int(rng() % 5), b = r->field->from_int(rng() % 5);
            Polynomial nf = normal_form(f, G2);
            REQUIRE(normal_form(nf, G2) == nf);
            Polynomial lin = f.scaled(a) + g.scaled(b);
            REQUIRE(normal_form(lin, G2) == normal_form(f, G2).scaled(a) + normal_form(g, G2).scaled(b));
        }
    }
}

TEST_CASE("buchberger criterion holds on computed bases") {
    auto r = ring_f5_xy();
    auto r3 = make_ring(make_field(3), {"x", "y", "z"});
    for (const auto& gens : std::vector<std::vector<std::string>>{
             {"y^2 - x^3", "x^4"},
             {"x*y - 1", "y^2 - x"},
             {"x^2 + y^2 - 1", "x*y - 2"}}) {
        auto G = gb_of(r, gens);
        REQUIRE(buchberger_criterion_holds(G));
    }
    auto G3 = groebner_basis(parse_polynomials(r3, {"x*y - z^2", "x^3 - y*z"}), r3);
    REQUIRE(buchberger_criterion_holds(G3));
}

TEST_CASE("reduced basis is unique under generator permutation") {
    auto r = make_ring(make_field(7), {"x", "y", "z"});
    std::vector<std::string> gens = {"x*y - z^2", "y^2 - x*z", "x^2*z - y*z^2 + x"};
    auto polys = parse_polynomials(r, gens);
    auto G0 = groebner_basis(polys, r);
    std::vector<int> perm = {2, 0, 1};
    std::vector<Polynomial> shuffled;
    for (int i : perm) shuffled.push_back(polys[static_cast<std::size_t>(i)]);
    auto G1 = groebner_basis(shuffled, r);
    REQUIRE(G0.gens.size() == G1.gens.size());
    for (std::size_t i = 0; i < G0.gens.size(); ++i) REQUIRE(G0.gens[i] == G1.gens[i]);
}

TEST_CASE("standard monomials") {
    auto r = ring_f5_xy();
    SECTION("monomial ideal staircase") {
        auto G = gb_of(r, {"x^2", "x*y", "y^2"});
        auto count = count_standard_monomials(G);
        REQUIRE(count.finite);
        REQUIRE(count.count == 3);
        auto mons = standard_monomials(G);
        REQUIRE(mons.has_value());
        REQUIRE(mons->size() == 3);  // {1, x, y}
    }
    SECTION("positive-dimensional ideal is flagged infinite") {
        auto G = gb_of(r, {"x"});
        REQUIRE(!count_standard_monomials(G).finite);
        REQUIRE(!standard_monomials(G).has_value());
    }
    SECTION("cusp modulo x^4 has colength 8") {
        auto G = gb_of(r, {"y^2 - x^3", "x^4"});
        auto count = count_standard_monomials(G);
        REQUIRE(count.finite);
        REQUIRE(count.count == 8);
    }
    SECTION("unit ideal has no standard monomials") {
        auto G = gb_of(r, {"x*y - 1", "x^2"});
        auto count = count_standard_monomials(G);
        REQUIRE(count.finite);
        REQUIRE(count.count == 0);
    }
}

TEST_CASE("staircase counting agrees with the brute-force oracle") {
    auto r3 = make_ring(make_field(3), {"x", "y", "z"});
    std::mt19937 rng(202);
    auto draw = [&](std::uint32_t n) { return static_cast<std::uint32_t>(rng() % n); };
    for (int trial = 0; trial < 40; ++trial) {
        // random monomial ideal with generators of degree <= 4
        std::size_t ngens = 2 + draw(4);
        std::vector<oracle::Expv> exps;
        std::vector<Polynomial> gens;
        for (std::size_t i = 0; i < ngens; ++i) {
            oracle::Expv e = {draw(5), draw(5), draw(5)};
            if (e[0] + e[1] + e[2] == 0) e[0] = 1;
            exps.push_back(e);
            gens.push_back(Polynomial::monomial(r3, Monomial({e[0], e[1], e[2]}), 1));
        }
        auto G = groebner_basis(gens, r3);
        auto mine = count_standard_monomials(G);
        long long expected = oracle::monomial_colength(exps, 3);
        if (expected < 0)
            REQUIRE(!mine.finite);
        else {
            REQUIRE(mine.finite);
            REQUIRE(static_cast<long long>(mine.count) == expected);
        }
    }
}

TEST_CASE("colength matches the linear-algebra oracle on binomial ideals") {
    auto r = make_ring(make_field(3), {"x", "y"});
    struct Case {
        std::vector<std::string> gens;
        std::vector<oracle::Poly> oracle_gens;
    };
    auto mono = [](std::uint32_t a, std::uint32_t b, std::int64_t c) {
        return std::pair<oracle::Expv, std::int64_t>{{a, b}, c};
    };
    std::vector<Case> cases = {
        {{"y^2 - x^3", "x^4"}, {{{mono(0, 2, 1), mono(3, 0, -1)}}, {{mono(4, 0, 1)}}}},
        {{"x^2 - y", "y^3"}, {{{mono(2, 0, 1), mono(0, 1, -1)}}, {{mono(0, 3, 1)}}}},
        {{"x^2 - x*y", "y^2 - x*y", "x^3"},
         {{{mono(2, 0, 1), mono(1, 1, -1)}}, {{mono(0, 2, 1), mono(1, 1, -1)}}, {{mono(3, 0, 1)}}}},
    };
    for (const auto& c : cases) {
        auto G = gb_of(r, c.gens);
        auto mine = count_standard_monomials(G);
        long long expected = oracle::linear_algebra_colength(3, 2, c.oracle_gens);
        REQUIRE(expected >= 0);
        REQUIRE(mine.finite);
        REQUIRE(static_cast<long long>(mine.count) == expected);
    }
}

TEST_CASE("colength of random dense ideals matches the linear-algebra oracle") {
    // general (non-monomial, non-binomial) generators: exercises the pair
    // criteria and reduction paths that structured inputs miss
    auto r = make_ring(make_field(3), {"x", "y"});
    std::mt19937 rng(515);
    auto draw = [&](std::uint32_t n) { return static_cast<std::uint32_t>(rng() % n); };
    for (int trial = 0; trial < 15; ++trial) {
        std::vector<Polynomial> gens;
        std::vector<oracle::Poly> ogens;
        // two dense-ish quadratic/cubic polynomials
        for (int g = 0; g < 2; ++g) {
            Polynomial f = Polynomial::zero(r);
            oracle::Poly of;
            for (int t = 0; t < 4; ++t) {
                std::uint32_t a = draw(3), b = draw(3);
                std::int64_t c = 1 + draw(2);
                f = f + Polynomial::monomial(r, Monomial({a, b}), r->field->from_int(c));
                of.terms.push_back({{a, b}, c});
            }
            if (f.is_zero()) continue;
            gens.push_back(f);
            ogens.push_back(of);
        }
        // pure powers force a finite quotient regardless of the above
        std::uint32_t pa = 3 + draw(2), pb = 3 + draw(2);
        gens.push_back(Polynomial::monomial(r, Monomial({pa, 0}), 1));
        gens.push_back(Polynomial::monomial(r, Monomial({0, pb}), 1));
        ogens.push_back({{{{pa, 0}, 1}}});
        ogens.push_back({{{{0, pb}, 1}}});

        auto G = groebner_basis(gens, r);
        REQUIRE(buchberger_criterion_holds(G));
        auto mine = count_standard_monomials(G);
        long long expected = oracle::linear_algebra_colength(3, 2, ogens);
        REQUIRE(expected >= 0);
        REQUIRE(mine.finite);
        REQUIRE(static_cast<long long>(mine.count) == expected);
    }
}

TEST_CASE("krull dimension") {
    auto r3 = make_ring(make_field(5), {"x", "y", "z"});
    REQUIRE(krull_dimension(groebner_basis({}, r3)) == 3);
    REQUIRE(krull_dimension(groebner_basis(parse_polynomials(r3, {"x*y - z^2"}), r3)) == 2);
    auto r2 = ring_f5_xy();
    REQUIRE(krull_dimension(gb_of(r2, {"x^2", "x*y", "y^2"})) == 0);
    REQUIRE(krull_dimension(gb_of(r2, {"x*y - 1", "x^2"})) == -1);
    REQUIRE(krull_dimension(gb_of(r2, {"y^2 - x^3"})) == 1);
}

TEST_CASE("krull dimension equals that of the initial ideal") {
    auto r3 = make_ring(make_field(3), {"x", "y", "z"});
    for (const auto& gens : std::vector<std::vector<std::string>>{
             {"x*y - z^2"}, {"x*y - z^2", "x^3 - y*z"}, {"x + y + z", "x*y*z"}}) {
        auto G = groebner_basis(parse_polynomials(r3, gens), r3);
        std::vector<Polynomial> lts;
        for (const auto& g : G.gens)
            lts.push_back(Polynomial::monomial(r3, g.leading_monomial(), 1));
        auto Glt = groebner_basis(lts, r3);
        REQUIRE(krull_dimension(G) == krull_dimension(Glt));
    }
}

TEST_CASE("mixed rings are rejected") {
    auto r = ring_f5_xy();
    auto other = make_ring(make_field(7), {"x", "y"});
    REQUIRE_THROWS_AS(P(r, "x") + P(other, "x"), StructuralError);
    REQUIRE_THROWS_AS(groebner_basis({P(other, "x")}, r), StructuralError);
}

TEST_CASE("degree cap aborts runaway products") {
    auto r = ring_f5_xy();
    Polynomial big = P(r, "x").pow(60);
    REQUIRE_THROWS_AS(big * big, ResourceError);
}
