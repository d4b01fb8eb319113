#include <cmath>

#include "doctest.h"
#include "test_helpers.hpp"
#include "torwalk/diophantine.hpp"
#include "torwalk/errors.hpp"

using namespace torwalk;
using namespace torwalk::testing;

TEST_SUITE_BEGIN("diophantine_shadowing");

namespace {

CoefficientSet singleton_set(SymbolicScalar v, BasisPtr basis) {
    CoefficientSet F;
    F.basis = std::move(basis);
    F.values.push_back(std::move(v));
    return F;
}

std::vector<Int> grid_of(std::initializer_list<long> qs) {
    std::vector<Int> g;
    for (long q : qs) g.emplace_back(q);
    return g;
}

}  // namespace

TEST_CASE("golden margins: convergent fast path against brute-force scan") {
    auto basis = golden_basis();
    CoefficientSet F = singleton_set(sym_gamma(1, basis), basis);
    DiophantineReport rep = diophantine_margin(F, grid_of({10, 100, 1000, 10000, 100000}));
    CHECK(rep.used_fast_path);
    REQUIRE(rep.q_grid.size() == 5);

    // brute-force oracle at Q = 10^4: min over q <= Q of d(q gamma, 0)
    const double g = kGolden;
    double best = 1.0;
    for (long q = 1; q <= 10000; ++q) {
        double v = std::fmod(static_cast<double>(q) * g, 1.0);
        best = std::min(best, std::min(v, 1.0 - v));
    }
    CHECK(rep.neg_log_margin[3] == doctest::Approx(-std::log(best)).epsilon(1e-6));

    // golden ratio margins scale like 1/Q: fitted exponent near 1
    CHECK(rep.L_hat == doctest::Approx(1.0).epsilon(0.12));
    CHECK(rep.r2 > 0.98);
}

TEST_CASE("min q*d(q gamma, 0): minimum sits at q=1 with value 1-gamma") {
    auto basis = golden_basis();
    const double v = min_q_dist(sym_gamma(1, basis), *basis, Int(100000));
    CHECK(v == doctest::Approx(1.0 - kGolden).epsilon(1e-9));
    CHECK(v >= 0.38);

    // brute-force cross-check on a smaller window
    double best = 10.0;
    for (long q = 1; q <= 20000; ++q) {
        double t = std::fmod(static_cast<double>(q) * kGolden, 1.0);
        best = std::min(best, static_cast<double>(q) * std::min(t, 1.0 - t));
    }
    CHECK(v == doctest::Approx(best).epsilon(1e-9));
}

TEST_CASE("rational coefficient set {1/3}: constant margin, flat exponent") {
    auto basis = empty_basis();
    CoefficientSet F = singleton_set(sym_rat("1/3", basis), basis);
    DiophantineReport rep = diophantine_margin(F, grid_of({2, 10, 100, 1000}));
    for (double nl : rep.neg_log_margin)
        CHECK(nl == doctest::Approx(std::log(3.0)).epsilon(1e-9));
    CHECK(std::abs(rep.L_hat) < 1e-6);
    CHECK(rep.all_certified_nonzero);
}

TEST_CASE("brute force on a two-element set agrees with the [1,1] reduction") {
    // {gamma, 1/2}: combinations L1 gamma + L2/2; exact zeros only at L1 = 0,
    // L2 even, which the symbolic filter removes
    auto basis = golden_basis();
    CoefficientSet F;
    F.basis = basis;
    F.values.push_back(sym_gamma(1, basis));
    F.values.push_back(sym_rat("1/2", basis));
    DiophantineReport rep = diophantine_margin(F, grid_of({2, 4, 8, 16}));
    CHECK_FALSE(rep.used_fast_path);
    REQUIRE(rep.q_grid.size() == 4);
    for (std::size_t i = 1; i < rep.neg_log_margin.size(); ++i)
        CHECK(rep.neg_log_margin[i] >= rep.neg_log_margin[i - 1] - 1e-12);
    // oracle at Q=4 by direct scan
    double best = 1.0;
    for (long l1 = -4; l1 <= 4; ++l1)
        for (long l2 = -4; l2 <= 4; ++l2) {
            if (l1 == 0 && l2 % 2 == 0) continue;
            double v = std::fmod(l1 * kGolden + l2 * 0.5 + 100.0, 1.0);
            best = std::min(best, std::min(v, 1.0 - v));
        }
    CHECK(rep.neg_log_margin[1] == doctest::Approx(-std::log(best)).epsilon(1e-6));
}

TEST_CASE("brute-force cost cap: explicit error with the feasible bound") {
    auto basis = golden_basis();
    CoefficientSet F;
    F.basis = basis;
    F.values.push_back(sym_gamma(1, basis));
    F.values.push_back(sym_rat("1/2", basis));
    F.values.push_back(sym_rat("1/5", basis));
    try {
        (void)diophantine_margin(F, grid_of({100000}), 1000);
        FAIL("expected CapacityError");
    } catch (const CapacityError& e) {
        CHECK(e.reached_n() > 0);
        CHECK(std::string(e.what()).find("feasible") != std::string::npos);
    }
}

TEST_CASE("truncated Liouville constant: margins collapse super-polynomially") {
    auto basis = std::make_shared<const GeneratorBasis>(
        std::vector<Generator>{{"lam", GeneratorKind::Liouville6, ""}});
    CoefficientSet F = singleton_set(SymbolicScalar::generator(0, 1), basis);

    // decade grid to 10^4: the local log-log slope around the 10^{-6} series
    // term is roughly quadratic-or-steeper while golden's never exceeds ~1
    DiophantineReport dec = diophantine_margin(F, grid_of({1, 10, 100, 1000, 10000}));
    CHECK(dec.used_fast_path);
    double max_local_slope = 0.0;
    for (std::size_t i = 1; i < dec.q_grid.size(); ++i) {
        const double dx = std::log(dec.q_grid[i].get_d()) - std::log(dec.q_grid[i - 1].get_d());
        max_local_slope =
            std::max(max_local_slope, (dec.neg_log_margin[i] - dec.neg_log_margin[i - 1]) / dx);
    }
    CHECK(max_local_slope > 1.9);
    CHECK(std::exp(-dec.neg_log_margin[4]) <= 1.2e-4);  // m(10^4)

    // the deep grid where the 4th series term rules: L_hat far above golden's
    std::vector<Int> deep;
    deep.emplace_back("1000000000000");              // 10^12
    deep.emplace_back("1000000000000000000");        // 10^18
    deep.emplace_back("1000000000000000000000000");  // 10^24
    DiophantineReport rep = diophantine_margin(F, deep);
    REQUIRE(rep.q_grid.size() == 3);
    CHECK(rep.neg_log_margin[2] > rep.neg_log_margin[1]);
    CHECK(rep.L_hat > 6.0);
    CHECK(rep.all_certified_nonzero);
}

TEST_CASE("xq_membership: witnesses from the worked cases") {
    auto basis = golden_basis();
    std::vector<std::vector<SymbolicScalar>> B = {
        {sym_gamma(1, basis), sym_rat("0", basis)}};

    TorusPoint x1 = TorusPoint::exact({sym_gamma(1, basis), sym_rat("0", basis)}, basis);
    XqWitness w1 = xq_membership(x1, B, 1);
    CHECK(w1.member);
    CHECK(w1.q == 1);
    CHECK(w1.M[0].at(0, 0) == 1);
    CHECK(w1.M[0].at(1, 0) == 0);

    TorusPoint x2 = TorusPoint::exact({sym_rat("1/2", basis), sym_rat("0", basis)}, basis);
    XqWitness w2 = xq_membership(x2, B, 2);
    CHECK(w2.member);
    CHECK(w2.q == 2);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(w2.M[0].at(i, j) == 0);
    CHECK(w2.p[0] == 1);
    CHECK(w2.p[1] == 0);

    // gamma + 1/3 needs q = 3
    SymbolicScalar mixed = sym_gamma(1, basis);
    mixed += sym_rat("1/3", basis);
    TorusPoint x3 = TorusPoint::exact({mixed, sym_rat("0", basis)}, basis);
    XqWitness w3 = xq_membership(x3, B, 2);
    CHECK_FALSE(w3.member);
    CHECK(w3.reason.find("q=3") != std::string::npos);
    XqWitness w4 = xq_membership(x3, B, 3);
    CHECK(w4.member);
    CHECK(w4.q == 3);
    CHECK(w4.M[0].at(0, 0) == 3);
    // witness identity: q x = p + sum M_b b, checked symbolically
    for (int i = 0; i < 2; ++i) {
        SymbolicScalar lhs = x3.exact_coords()[static_cast<std::size_t>(i)].times(w4.q);
        SymbolicScalar rhs = SymbolicScalar::rational_value(Rat(w4.p[static_cast<std::size_t>(i)]),
                                                            basis->size());
        for (int j = 0; j < 2; ++j)
            rhs += B[0][static_cast<std::size_t>(j)].times(w4.M[0].at(i, j));
        lhs -= rhs;
        CHECK(lhs.torus_zero());
    }
}

TEST_CASE("gnm proxy: sharp singleton thresholds and the identity case") {
    FiniteSupportMeasure mu = golden_measure();
    FiniteSupportMeasure diracI =
        FiniteSupportMeasure::dirac(GroupElement::identity(2, mu.basis()));
    MatrixAtoms id_atoms = linear_atoms(diracI);
    CHECK(gnm_proxy_fraction(id_atoms, 10, 0.01, 500, RngStream(1, 1)) == 1.0);

    auto basis = empty_basis();
    std::vector<SymbolicScalar> b0(2, SymbolicScalar::rational_value(Rat(0), 0));
    FiniteSupportMeasure da =
        FiniteSupportMeasure::dirac(GroupElement::exact(mat_A(), b0, basis));
    MatrixAtoms a_atoms = linear_atoms(da);
    const double logA = a_atoms.log_norms[0];
    CHECK(gnm_proxy_fraction(a_atoms, 12, logA + 1e-6, 500, RngStream(1, 2)) == 1.0);
    CHECK(gnm_proxy_fraction(a_atoms, 12, logA - 1e-3, 500, RngStream(1, 3)) == 0.0);

    // golden projection: both atoms share ||a|| = rho(A), so the proxy sum is
    // deterministic and M = E ln||a|| + 0.5 always passes
    MatrixAtoms g_atoms = linear_atoms(linear_projection(mu));
    const double mean_log = 0.5 * (g_atoms.log_norms[0] + g_atoms.log_norms[1]);
    for (long n : {5L, 10L, 20L})
        CHECK(gnm_proxy_fraction(g_atoms, n, mean_log + 0.5, 2000,
                                 RngStream(1, static_cast<std::uint64_t>(n))) == 1.0);
}

TEST_CASE("det nondegeneracy rate: enumeration oracle and Monte Carlo") {
    FiniteSupportMeasure proj = linear_projection(golden_measure());

    // d=2, n=1: of the four ordered pairs the two mixed ones give
    // det(BA - A) = det([[-1,0],[-3,-2]]) = 2 != 0
    CHECK((mat_BA() - mat_A()).det() == 2);
    Rat exact = det_nondegeneracy_rate_exact(proj, 1);
    CHECK(exact == Rat(1, 2));

    // deterministic single atom: the difference always vanishes
    auto basis = empty_basis();
    std::vector<SymbolicScalar> b0(2, SymbolicScalar::rational_value(Rat(0), 0));
    FiniteSupportMeasure da =
        FiniteSupportMeasure::dirac(GroupElement::exact(mat_A(), b0, basis));
    CHECK(det_nondegeneracy_rate_exact(da, 3) == 0);
    CHECK(det_nondegeneracy_rate_mc(da, 3, 200, RngStream(2, 2)) == 0.0);

    // exact and Monte Carlo agree at n=2
    Rat e2 = det_nondegeneracy_rate_exact(proj, 2);
    double m2 = det_nondegeneracy_rate_mc(proj, 2, 20000, RngStream(3, 3));
    CHECK(std::abs(e2.get_d() - m2) < 0.02);
}

TEST_CASE("collision_mass: confinement, exact decay, Cauchy-Schwarz bounds") {
    // linear-only measure fixes 0: the stabilizer mass stays 1
    FiniteSupportMeasure lin = linear_only_measure();
    TorusPoint zero = TorusPoint::exact_zero(2, lin.basis());
    CollisionTable t1 = collision_mass(lin, zero, 5);
    for (const auto& m : t1.masses) CHECK(m == 1);
    for (std::size_t c : t1.image_counts) CHECK(c == 1);

    FiniteSupportMeasure mu = golden_measure();
    TorusPoint zero_g = TorusPoint::exact_zero(2, mu.basis());
    CollisionTable t2 = collision_mass(mu, zero_g, 8);
    CHECK(t2.masses[0] == Rat(1, 2));  // two distinct images of weight 1/2
    for (std::size_t i = 1; i < t2.masses.size(); ++i) {
        CHECK(t2.masses[i] < t2.masses[i - 1]);
        CHECK(t2.image_counts[i] >= t2.image_counts[i - 1]);
    }
    for (std::size_t i = 0; i < t2.masses.size(); ++i) {
        CHECK(t2.masses[i] <= 1);
        CHECK(t2.masses[i] >= Rat(1, static_cast<unsigned long>(t2.image_counts[i])));
    }
}

TEST_CASE("lift_rational_part: projection and morphism property") {
    auto basis = golden_basis();
    std::vector<SymbolicScalar> b1 = {sym_rat("1/2", basis), sym_rat("0", basis)};
    GroupElement g1 = GroupElement::exact(mat_A(), std::move(b1), basis);
    GroupElement l1 = g1.lift_rational_part();
    CHECK(l1.translation_exact()[0].is_zero());
    CHECK(l1.translation_exact()[1].is_zero());

    SymbolicScalar mixed = sym_gamma(1, basis);
    mixed += sym_rat("1/3", basis);
    std::vector<SymbolicScalar> b2 = {mixed, sym_rat("0", basis)};
    GroupElement g2 = GroupElement::exact(mat_A(), std::move(b2), basis);
    GroupElement l2 = g2.lift_rational_part();
    CHECK(l2.translation_exact()[0] == sym_gamma(1, basis));

    // morphism: lift(g2 o g1) = lift(g2) o lift(g1) on random word pairs
    FiniteSupportMeasure mu = measure_from_json(preset_measure("golden"));
    std::vector<GroupElement> alphabet;
    for (const auto& atom : mu.atoms()) alphabet.push_back(atom.g);
    std::vector<SymbolicScalar> b3 = {sym_rat("2/7", mu.basis()), sym_gamma(1, mu.basis())};
    alphabet.push_back(GroupElement::exact(mat_BA(), std::move(b3), mu.basis()));
    RngStream rng(10, 10);
    for (int trial = 0; trial < 100; ++trial) {
        GroupElement u = GroupElement::identity(2, mu.basis());
        GroupElement v = GroupElement::identity(2, mu.basis());
        const int lu = 1 + static_cast<int>(rng.next_u64() % 5);
        const int lv = 1 + static_cast<int>(rng.next_u64() % 5);
        for (int k = 0; k < lu; ++k) u = compose(alphabet[rng.next_u64() % alphabet.size()], u);
        for (int k = 0; k < lv; ++k) v = compose(alphabet[rng.next_u64() % alphabet.size()], v);
        CHECK(compose(u, v).lift_rational_part().encode() ==
              compose(u.lift_rational_part(), v.lift_rational_part()).encode());
    }
}

TEST_CASE("stabilizer domination: torus mass never exceeds the lifted mass") {
    FiniteSupportMeasure mu = golden_measure();
    FiniteSupportMeasure lifted = lift_rational_part(mu);
    auto basis = mu.basis();
    std::vector<TorusPoint> points = {
        TorusPoint::exact_zero(2, basis),
        TorusPoint::exact({sym_rat("1/2", basis), sym_rat("1/2", basis)}, basis),
        TorusPoint::exact({sym_rat("1/3", basis), sym_rat("2/5", basis)}, basis),
        TorusPoint::exact({sym_gamma(1, basis), sym_rat("1/2", basis)}, basis),
        TorusPoint::exact({sym_gamma(2, basis), sym_gamma(-1, basis)}, basis)};
    for (const auto& x : points) {
        CollisionTable torus = collision_mass(mu, x, 6);
        CollisionTable lift = collision_mass_lifted(lifted, lift_point(x), 6);
        for (std::size_t i = 0; i < torus.masses.size(); ++i)
            CHECK(torus.masses[i] <= lift.masses[i]);
    }
}

TEST_CASE("near_coincidence_mass: diameter, dirac, exact golden hit") {
    FiniteSupportMeasure mu = golden_measure();
    auto basis = mu.basis();
    TorusPoint zero = TorusPoint::exact_zero(2, basis);
    TorusPoint y = TorusPoint::exact({sym_gamma(1, basis), sym_rat("0", basis)}, basis);

    // sup-metric diameter is 1/2
    NearMass all = near_coincidence_mass(mu, zero, y, 0.5, 3, Method::Exact, RngStream(1, 1), 0);
    CHECK(all.value == doctest::Approx(1.0));

    FiniteSupportMeasure diracI =
        FiniteSupportMeasure::dirac(GroupElement::identity(2, basis));
    NearMass same =
        near_coincidence_mass(diracI, y, y, 1e-9, 4, Method::Exact, RngStream(1, 2), 0);
    CHECK(same.value == doctest::Approx(1.0));
    NearMass far =
        near_coincidence_mass(diracI, zero, y, 1e-3, 4, Method::Exact, RngStream(1, 3), 0);
    CHECK(far.value == doctest::Approx(0.0));

    // one image atom of mu * delta_0 lands exactly on (gamma, 0)
    NearMass hit =
        near_coincidence_mass(mu, zero, y, 1e-6, 1, Method::Exact, RngStream(1, 4), 0);
    CHECK(hit.value == doctest::Approx(0.5));
    CHECK_FALSE(hit.guard_flag);
}

TEST_CASE("near_coincidence guard band flags distances at the radius") {
    FiniteSupportMeasure mu = golden_measure();
    auto basis = mu.basis();
    TorusPoint zero = TorusPoint::exact_zero(2, basis);
    // the image atom (0, -gamma) sits at sup-distance d(1-gamma, 0) from y;
    // choosing r equal to that evaluated distance lands inside the band
    TorusPoint y = TorusPoint::exact({sym_gamma(1, basis), sym_rat("0", basis)}, basis);
    SymbolicScalar mg = sym_gamma(-1, basis);
    const double r = circle_dist(mg.eval_double_mod1(*basis), 0.0);
    NearMass nm = near_coincidence_mass(mu, zero, y, r, 1, Method::Exact, RngStream(1, 9), 0);
    CHECK(nm.guard_flag);
}

TEST_CASE("near_coincidence Monte Carlo path agrees with the exact mass") {
    FiniteSupportMeasure mu = golden_measure();
    auto basis = mu.basis();
    TorusPoint zero = TorusPoint::exact_zero(2, basis);
    TorusPoint y = TorusPoint::exact({sym_gamma(1, basis), sym_rat("0", basis)}, basis);
    NearMass exact = near_coincidence_mass(mu, zero, y, 0.1, 3, Method::Exact,
                                           RngStream(2, 0), 0);
    NearMass mc = near_coincidence_mass(mu, zero, y, 0.1, 3, Method::Mc, RngStream(2, 1),
                                        20000);
    CHECK(std::abs(exact.value - mc.value) <= 4.0 * mc.stderr_ + 1e-9);
}

TEST_CASE("coefficient_set: dedup and sign normalization") {
    FiniteSupportMeasure mu = golden_measure();
    CoefficientSet F = coefficient_set(mu);
    // coefficients of (gamma,0) and (0,-gamma): {gamma, 0} after the +-
    // normalization
    std::size_t nonzero = 0;
    for (const auto& v : F.values)
        if (!v.torus_zero()) ++nonzero;
    CHECK(nonzero == 1);
}

TEST_SUITE_END();
