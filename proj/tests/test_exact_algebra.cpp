#include <cmath>

#include "doctest.h"
#include "test_helpers.hpp"
#include "torwalk/errors.hpp"
#include "torwalk/rng.hpp"
#include "torwalk/walk.hpp"

using namespace torwalk;
using namespace torwalk::testing;

TEST_SUITE_BEGIN("exact_algebra");

namespace {

GroupElement zero_translation(IntMatrix m, const BasisPtr& basis) {
    std::vector<SymbolicScalar> b(2, SymbolicScalar::rational_value(Rat(0), basis->size()));
    return GroupElement::exact(std::move(m), std::move(b), basis);
}

GroupElement golden_atom_Ab(const BasisPtr& basis) {
    std::vector<SymbolicScalar> b = {SymbolicScalar::generator(0, basis->size()),
                                     SymbolicScalar::rational_value(Rat(0), basis->size())};
    return GroupElement::exact(mat_A(), std::move(b), basis);
}

std::vector<GroupElement> random_words_alphabet(const BasisPtr& basis) {
    std::vector<GroupElement> alphabet;
    alphabet.push_back(golden_atom_Ab(basis));
    alphabet.push_back(zero_translation(mat_BA(), basis));
    std::vector<SymbolicScalar> b = {sym_rat("1/3", basis), sym_gamma(-1, basis)};
    alphabet.push_back(GroupElement::exact(mat_B() * mat_B() * mat_B(), std::move(b), basis));
    return alphabet;
}

}  // namespace

TEST_CASE("compose: matrix products and translations") {
    auto basis = golden_basis();
    GroupElement gA = zero_translation(mat_A(), basis);
    GroupElement gB = zero_translation(mat_B(), basis);

    GroupElement ba = compose(gB, gA);
    CHECK(ba.linear() == mat_BA());

    GroupElement id = GroupElement::identity(2, basis);
    GroupElement same = compose(id, gA);
    CHECK(same.encode() == gA.encode());

    // (A,b) o (A,b) with b = (gamma, 0): A^2 = [[5,3],[3,2]], translation
    // A b + b = (3 gamma, gamma)
    GroupElement g = golden_atom_Ab(basis);
    GroupElement g2 = compose(g, g);
    CHECK(g2.linear() == mat2(5, 3, 3, 2));
    CHECK(g2.translation_exact()[0].coeffs()[0] == 3);
    CHECK(g2.translation_exact()[1].coeffs()[0] == 1);
    CHECK(g2.translation_exact()[0].rational() == 0);
    CHECK(g2.translation_exact()[1].rational() == 0);
}

TEST_CASE("compose rejects mode and basis mismatches") {
    auto basis = golden_basis();
    GroupElement exact = zero_translation(mat_A(), basis);
    GroupElement flt = GroupElement::floating(mat_A(), {0.0, 0.0});
    CHECK_THROWS_AS((void)compose(exact, flt), std::invalid_argument);
    auto other = golden_basis();  // distinct object, same content
    GroupElement exact2 = zero_translation(mat_A(), other);
    CHECK_THROWS_AS((void)compose(exact, exact2), std::invalid_argument);
}

TEST_CASE("act: affine action with rational-only reduction") {
    auto basis = golden_basis();
    GroupElement g = golden_atom_Ab(basis);

    // linear part kills the origin
    TorusPoint zero = TorusPoint::exact_zero(2, basis);
    TorusPoint img = act(g, zero);
    CHECK(img.exact_coords()[0] == g.translation_exact()[0]);
    CHECK(img.exact_coords()[1] == g.translation_exact()[1]);

    // A (1/2, 1/2) = (3/2, 1) = (1/2, 0) mod 1
    GroupElement ga = zero_translation(mat_A(), basis);
    TorusPoint half = TorusPoint::exact({sym_rat("1/2", basis), sym_rat("1/2", basis)}, basis);
    TorusPoint out = act(ga, half);
    CHECK(out.exact_coords()[0] == sym_rat("1/2", basis));
    CHECK(out.exact_coords()[1] == sym_rat("0", basis));

    // (I, (gamma,0)) on (gamma, 0): coefficient 2, value 2 gamma mod 1
    std::vector<SymbolicScalar> bt = {sym_gamma(1, basis), sym_rat("0", basis)};
    GroupElement tr = GroupElement::exact(IntMatrix::identity(2), std::move(bt), basis);
    TorusPoint x = TorusPoint::exact({sym_gamma(1, basis), sym_rat("0", basis)}, basis);
    TorusPoint y = act(tr, x);
    CHECK(y.exact_coords()[0].coeffs()[0] == 2);
    CHECK(y.numeric_coords()[0] == doctest::Approx(2 * kGolden - 1).epsilon(1e-12));
}

TEST_CASE("invert: exact adjugate and group axiom") {
    auto basis = golden_basis();
    GroupElement id = GroupElement::identity(2, basis);
    CHECK(invert(id).encode() == id.encode());

    GroupElement ga = zero_translation(mat_A(), basis);
    GroupElement inv = invert(ga);
    CHECK(inv.linear() == mat2(1, -1, -1, 2));

    // compose(invert(g), g) = identity on random words of length <= 10
    auto alphabet = random_words_alphabet(basis);
    RngStream rng(2024, 7);
    for (int trial = 0; trial < 100; ++trial) {
        GroupElement w = GroupElement::identity(2, basis);
        const int len = 1 + static_cast<int>(rng.next_u64() % 10);
        for (int k = 0; k < len; ++k)
            w = compose(alphabet[rng.next_u64() % alphabet.size()], w);
        CHECK(compose(invert(w), w).encode() == id.encode());
    }
}

TEST_CASE("numeric_eval: values and precision-loss error") {
    auto basis = golden_basis();
    CHECK(sym_rat("1/3", basis).eval_double_mod1(*basis) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-15));
    CHECK(sym_gamma(1, basis).eval_double_mod1(*basis) ==
          doctest::Approx(0.6180339887).epsilon(1e-10));
    SymbolicScalar s = sym_rat("1/2", basis);
    s += sym_gamma(1, basis);
    CHECK(s.eval_double_mod1(*basis) == doctest::Approx(0.1180339887).epsilon(1e-10));

    // a decimal generator certifies only as far as its digits go
    auto short_basis = std::make_shared<const GeneratorBasis>(std::vector<Generator>{
        {"g", GeneratorKind::Decimal, "0.123456789012345678901234567890"}});
    SymbolicScalar big = SymbolicScalar::generator(0, 1);
    Int huge(1);
    huge <<= 90;
    CHECK_THROWS_AS((void)big.times(huge).eval(*short_basis, 64, true), PrecisionLossError);
    CHECK_NOTHROW((void)SymbolicScalar::generator(0, 1).eval(*short_basis, 64, true));
}

TEST_CASE("associativity on random exact words") {
    auto basis = golden_basis();
    auto alphabet = random_words_alphabet(basis);
    RngStream rng(11, 0);
    for (int trial = 0; trial < 60; ++trial) {
        const GroupElement& g1 = alphabet[rng.next_u64() % alphabet.size()];
        const GroupElement& g2 = alphabet[rng.next_u64() % alphabet.size()];
        const GroupElement& g3 = alphabet[rng.next_u64() % alphabet.size()];
        CHECK(compose(compose(g3, g2), g1).encode() == compose(g3, compose(g2, g1)).encode());
    }
}

TEST_CASE("action compatibility: exact equality, float within 1e-12") {
    auto basis = golden_basis();
    auto alphabet = random_words_alphabet(basis);
    RngStream rng(5, 1);

    TorusPoint x = TorusPoint::exact({sym_rat("1/7", basis), sym_gamma(1, basis)}, basis);
    for (int trial = 0; trial < 40; ++trial) {
        const GroupElement& g1 = alphabet[rng.next_u64() % alphabet.size()];
        const GroupElement& g2 = alphabet[rng.next_u64() % alphabet.size()];
        TorusPoint lhs = act(compose(g2, g1), x);
        TorusPoint rhs = act(g2, act(g1, x));
        CHECK(lhs == rhs);
    }

    // float mode along words of length <= 30
    FiniteSupportMeasure mu = golden_measure().to_float();
    FloatWalker walker(mu);
    RngStream rng2(6, 2);
    std::vector<double> p1 = {0.2, 0.7};
    GroupElement w = GroupElement::floating(IntMatrix::identity(2), {0.0, 0.0});
    std::vector<double> p0 = p1;
    for (int k = 0; k < 30; ++k) {
        std::size_t i = rng2.next_u64() % mu.support_size();
        w = compose(mu.atoms()[i].g, w);
        std::vector<double> tmp;
        walker.apply_atom(i, p1, tmp);
        p1 = tmp;
    }
    TorusPoint direct = act(w, TorusPoint::floating(p0));
    for (int i = 0; i < 2; ++i)
        CHECK(circle_dist(direct.float_coords()[static_cast<std::size_t>(i)],
                          p1[static_cast<std::size_t>(i)]) < 1e-12);
}

TEST_CASE("exact and float orbits agree within 1e-9 for words of length 20") {
    FiniteSupportMeasure mu = golden_measure();
    FiniteSupportMeasure muf = mu.to_float();
    TorusPoint xe = TorusPoint::exact_zero(2, mu.basis());
    TorusPoint xf = TorusPoint::floating({0.0, 0.0});
    Trajectory te = simulate_walk(mu, xe, 20, RngStream(99, 3));
    Trajectory tf = simulate_walk(muf, xf, 20, RngStream(99, 3));
    REQUIRE(te.word == tf.word);
    for (std::size_t k = 0; k < te.points.size(); ++k) {
        auto ev = te.points[k].numeric_coords();
        auto fv = tf.points[k].float_coords();
        for (int i = 0; i < 2; ++i)
            CHECK(circle_dist(ev[static_cast<std::size_t>(i)],
                              fv[static_cast<std::size_t>(i)]) < 1e-9);
    }
}

TEST_CASE("canonical form: reduction is idempotent") {
    auto basis = golden_basis();
    SymbolicScalar s = sym_rat("17/5", basis);
    s += sym_gamma(-4, basis);
    SymbolicScalar once = s.reduced_mod1();
    SymbolicScalar twice = once.reduced_mod1();
    CHECK(once == twice);
    CHECK(once.rational() >= 0);
    CHECK(once.rational() < 1);
    CHECK(once.coeffs()[0] == -4);  // generator coefficients never fold
}

TEST_CASE("encoding is injective on canonical forms") {
    auto basis = golden_basis();
    CHECK(sym_rat("1/2", basis).encode() != sym_rat("1/3", basis).encode());
    CHECK(sym_gamma(1, basis).encode() != sym_gamma(-1, basis).encode());
    CHECK(sym_rat("0", basis).encode() != sym_gamma(1, basis).encode());
    GroupElement a = golden_atom_Ab(basis);
    GroupElement b = zero_translation(mat_A(), basis);
    CHECK(a.encode() != b.encode());
}

TEST_CASE("dimension three: determinant, exact inverse, action") {
    auto basis = golden_basis();
    IntMatrix m(3);
    // unimodular 3x3 with mixed signs
    long e[9] = {1, 2, 3, 0, 1, 4, 0, 0, 1};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m.at(i, j) = e[i * 3 + j];
    IntMatrix shear(3);
    long s[9] = {1, 0, 0, 2, 1, 0, 5, -3, 1};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) shear.at(i, j) = s[i * 3 + j];
    IntMatrix prod = m * shear;
    CHECK(prod.det() == 1);
    CHECK((prod * prod.inverse_unimodular()).is_identity());

    std::vector<SymbolicScalar> b(3, SymbolicScalar::rational_value(Rat(0), basis->size()));
    b[2] = sym_gamma(1, basis);
    GroupElement g = GroupElement::exact(prod, std::move(b), basis);
    TorusPoint x = TorusPoint::exact(
        {sym_rat("1/2", basis), sym_rat("1/3", basis), sym_rat("0", basis)}, basis);
    TorusPoint roundtrip = act(invert(g), act(g, x));
    CHECK(roundtrip == x);

    IntMatrix singular(3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) singular.at(i, j) = i + j;
    CHECK(singular.det() == 0);
}

TEST_CASE("det != 1 is rejected at construction") {
    auto basis = golden_basis();
    CHECK_THROWS_AS((void)zero_translation(mat2(1, 0, 0, -1), basis), std::invalid_argument);
    CHECK_THROWS_AS((void)zero_translation(mat2(2, 0, 0, 2), basis), std::invalid_argument);
}

TEST_CASE("float wrap snaps the 1.0 seam") {
    CHECK(wrap01(0.9999999999999999) == 0.0);
    CHECK(wrap01(1.0) == 0.0);
    CHECK(wrap01(-0.25) == doctest::Approx(0.75));
    CHECK(wrap01(2.25) == doctest::Approx(0.25));
}

TEST_SUITE_END();
