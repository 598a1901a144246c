#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "starq/starprod.hpp"
#include "testutil.hpp"

using namespace starq;

namespace {

PoissonStructure moyal()
{
    PoissonStructure ps(2);
    ps.set(0, 1, Poly::constant(2, 1));
    return ps;
}

PoissonStructure so3()
{
    PoissonStructure ps(3);
    ps.set(0, 1, parse_poly("x3", 3));
    ps.set(0, 2, parse_poly("-x2", 3));
    ps.set(1, 2, parse_poly("x1", 3));
    return ps;
}

PoissonStructure heisenberg()
{
    PoissonStructure ps(3);
    ps.set(0, 1, parse_poly("x3", 3));
    return ps;
}

// Poisson but with a nonvanishing distinct-index block at order 2,
// unlike the linear standard examples where that block degenerates to zero.
PoissonStructure mixed()
{
    PoissonStructure ps(3);
    ps.set(0, 1, parse_poly("x1", 3));
    ps.set(0, 2, parse_poly("x1", 3));
    return ps;
}

Poly bracket(const PoissonStructure& ps, const Poly& f, const Poly& g)
{
    Poly out = Poly::zero(ps.n);
    for (int i = 0; i < ps.n; ++i)
        for (int j = 0; j < ps.n; ++j) {
            if (i == j) continue;
            out += ps.omega(i, j) * xderiv(f, MultiIndex::unit(ps.n, i)) *
                   xderiv(g, MultiIndex::unit(ps.n, j));
        }
    return out;
}

PoissonStructure random_structure(std::mt19937_64& rng, int n, int max_degree)
{
    PoissonStructure ps(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            ps.set(i, j, testutil::random_poly(rng, n, max_degree));
    return ps;
}

MultiIndex e(int n, int i) { return MultiIndex::unit(n, i); }

} // namespace

TEST_CASE("pi1 holds half the structure coefficients")
{
    Cochain p = pi1(moyal());
    CHECK(p.arity() == 2);
    CHECK(p.tilde());
    CHECK(p.terms().size() == 2);
    CHECK(p.coeff({e(2, 0), e(2, 1)}) == Poly::constant(2, Rational(1, 2)));
    CHECK(p.coeff({e(2, 1), e(2, 0)}) == Poly::constant(2, Rational(-1, 2)));

    Cochain q = pi1(so3());
    CHECK(q.terms().size() == 6);
    CHECK(q.coeff({e(3, 0), e(3, 1)}) == parse_poly("1/2*x3", 3));
    CHECK(q.coeff({e(3, 1), e(3, 0)}) == parse_poly("-1/2*x3", 3));
    CHECK(q.coeff({e(3, 1), e(3, 2)}) == parse_poly("1/2*x1", 3));

    CHECK(pi1(PoissonStructure(3)).is_zero());
}

TEST_CASE("antisymmetrized first order is the Poisson bracket")
{
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        PoissonStructure ps = random_structure(rng, 3, 2);
        Cochain p = pi1(ps);
        Poly f = testutil::random_poly(rng, 3, 3);
        Poly g = testutil::random_poly(rng, 3, 3);
        CHECK(apply(p, {f, g}) - apply(p, {g, f}) == bracket(ps, f, g));
    }
    // on coordinates the raw value is half the coefficient
    PoissonStructure ps = so3();
    Cochain p = pi1(ps);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(apply(p, {Poly::variable(3, i), Poly::variable(3, j)}) ==
                  ps.omega(i, j) * Rational(1, 2));
}

TEST_CASE("jacobi residual equals the nested-bracket oracle")
{
    CHECK(jacobi_residual(so3()).empty());
    CHECK(jacobi_residual(heisenberg()).empty());
    CHECK(jacobi_residual(mixed()).empty());

    PoissonStructure constant(4);
    constant.set(0, 2, Poly::constant(4, 3));
    constant.set(1, 3, Poly::constant(4, Rational(-2, 7)));
    CHECK(jacobi_residual(constant).empty());

    PoissonStructure bad(3);
    bad.set(0, 1, parse_poly("x1", 3));
    bad.set(0, 2, parse_poly("x2", 3));
    auto res = jacobi_residual(bad);
    REQUIRE(res.size() == 1);
    CHECK(res.at({0, 1, 2}) == parse_poly("-x2", 3));

    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 8; ++trial) {
        PoissonStructure ps = random_structure(rng, 3, 2);
        auto residual = jacobi_residual(ps);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                for (int k = j + 1; k < 3; ++k) {
                    Poly xi = Poly::variable(3, i), xj = Poly::variable(3, j),
                         xk = Poly::variable(3, k);
                    Poly oracle = bracket(ps, xi, bracket(ps, xj, xk)) +
                                  bracket(ps, xj, bracket(ps, xk, xi)) +
                                  bracket(ps, xk, bracket(ps, xi, xj));
                    auto it = residual.find({i, j, k});
                    Poly got = it == residual.end() ? Poly::zero(3) : it->second;
                    CHECK(got == oracle);
                }
    }
}

TEST_CASE("insertions implement operator composition")
{
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 2;
        bool tilde = trial % 2 == 0;
        Cochain outer = testutil::random_cochain(rng, 2, n, tilde, 2, 3);
        Cochain inner = testutil::random_cochain(rng, 2, n, true, 2, 3);
        Poly f = testutil::random_poly(rng, n, 2);
        Poly g = testutil::random_poly(rng, n, 2);
        Poly h = testutil::random_poly(rng, n, 2);

        Cochain left = insert_left(outer, inner);
        CHECK(left.arity() == 3);
        CHECK(apply(left, {f, g, h}) == apply(outer, {apply(inner, {f, g}), h}));

        Cochain right = insert_right(outer, inner);
        CHECK(apply(right, {f, g, h}) == apply(outer, {f, apply(inner, {g, h})}));
    }

    Cochain two = pi1(moyal());
    Cochain three(3, 2, true);
    CHECK_THROWS_AS(insert_left(two, three), std::invalid_argument);
    CHECK_THROWS_AS(insert_right(three, two), std::invalid_argument);
    CHECK_THROWS_AS(insert_left(two, pi1(so3())), std::invalid_argument);
}

TEST_CASE("insertion splitting carries composition factors")
{
    Cochain p = pi1(moyal());
    Cochain left = insert_left(p, p);
    // outer (e1,e2) splits its first slot onto inner (e1,e2): the v = e1 leg
    // composes X^{e1} with X^{e1} into 2 X^{(2,0)}, total 1/2*1/2*2 = 1/2
    CHECK(left.coeff({MultiIndex({2, 0}), MultiIndex({0, 1}), MultiIndex({0, 1})}) ==
          Poly::constant(2, Rational(1, 2)));
    CHECK(left.tilde());

    // a non-tilde inner makes the insertion non-tilde
    Cochain mult(2, 2, false);
    mult.add_term({MultiIndex::zero(2), MultiIndex::zero(2)}, Poly::constant(2, 1));
    Cochain mixed_ins = insert_left(p, mult);
    CHECK_FALSE(mixed_ins.tilde());
    // inserting the multiplication cochain reproduces the outer on products
    Poly f = parse_poly("x1^2", 2), g = parse_poly("x2", 2), h = parse_poly("x1*x2", 2);
    CHECK(apply(mixed_ins, {f, g, h}) == apply(p, {f * g, h}));
}

TEST_CASE("omega_k assembles the order-k right-hand side")
{
    CHECK_THROWS_AS(omega_k({}), std::invalid_argument);
    CHECK(omega_k({Cochain(2, 2, true)}).is_zero());

    Cochain om2 = omega_k({pi1(moyal())});
    CHECK(om2.arity() == 3);
    // the insert_right sum cannot reach a second-order first slot
    CHECK(om2.coeff({MultiIndex({2, 0}), MultiIndex({0, 1}), MultiIndex({0, 1})}) ==
          Poly::constant(2, Rational(1, 2)));
}

TEST_CASE("distinct-index block of the order-2 right-hand side")
{
    // closed form: sum over cyclic (i,j,k) of
    //   1/4 (sum_m d_m w_ik w_mj) (X^{e_i} ox X^{e_j} ox X^{e_k} - reverse)
    PoissonStructure ps = mixed();
    int n = ps.n;
    auto A = [&](int i, int k, int j) {
        Poly s = Poly::zero(n);
        for (int m = 0; m < n; ++m)
            s += xderiv(ps.omega(i, k), e(n, m)) * ps.omega(m, j);
        return s;
    };
    Cochain expected(3, n, true);
    for (int c = 0; c < 3; ++c) {
        int i = c, j = (c + 1) % 3, k = (c + 2) % 3;
        Poly coeff = A(i, k, j) * Rational(1, 4);
        expected.add_term({e(n, i), e(n, j), e(n, k)}, coeff);
        expected.add_term({e(n, k), e(n, j), e(n, i)}, -coeff);
    }
    REQUIRE_FALSE(expected.is_zero());

    auto blocks = degree_split(omega_k({pi1(ps)}));
    REQUIRE(blocks.count(MultiIndex({1, 1, 1})) == 1);
    CHECK(blocks.at(MultiIndex({1, 1, 1})) == expected);

    // the standard linear examples degenerate: this block vanishes for them
    auto so3_blocks = degree_split(omega_k({pi1(so3())}));
    CHECK(so3_blocks.count(MultiIndex({1, 1, 1})) == 0);
}

TEST_CASE("every built order satisfies its coboundary equation")
{
    for (const PoissonStructure& ps : {moyal(), heisenberg(), so3(), mixed()}) {
        StarProduct s = build(ps, 3);
        REQUIRE(static_cast<int>(s.pis.size()) == 3);
        for (int k = 2; k <= 3; ++k) {
            std::vector<Cochain> lower(s.pis.begin(), s.pis.begin() + (k - 1));
            CHECK(coboundary(s.pis[k - 1]) == omega_k(lower));
        }
    }
}

TEST_CASE("zero gauge picks the kernel-orthogonal solution")
{
    for (const PoissonStructure& ps : {so3(), moyal()}) {
        StarProduct s = build(ps, 3);
        for (int k = 2; k <= 3; ++k) {
            for (const auto& [l, part] : degree_split(s.pis[k - 1])) {
                auto basis = BlockBasis::make(2, l, true);
                std::vector<Poly> v;
                for (const auto& key : basis->tuples) v.push_back(part.coeff(key));
                for (const auto& comp : apply_matrix(projectors(2, l, true).ker, v))
                    CHECK(comp.is_zero());
            }
        }
    }
}

TEST_CASE("a gauge cochain shifts the solution by a cocycle")
{
    PoissonStructure ps = so3();
    int n = ps.n;
    Cochain gamma(2, n, true);
    gamma.add_term({e(n, 2), MultiIndex({1, 1, 0})}, Poly::constant(n, 1));

    StarProduct plain = build(ps, 2);
    StarProduct gauged = build(ps, 2, {{2, gamma}});
    CHECK(plain.gauge == "zero");
    CHECK(gauged.gauge == "custom");

    // both solve the same equation; the difference is a nonzero cocycle
    Cochain om = omega_k({pi1(ps)});
    CHECK(coboundary(gauged.pis[1]) == om);
    Cochain diff = gauged.pis[1] - plain.pis[1];
    CHECK_FALSE(diff.is_zero());
    CHECK(coboundary(diff).is_zero());

    // the gauged product still associates through its order
    std::mt19937_64 rng(44);
    for (int trial = 0; trial < 4; ++trial) {
        Poly f = testutil::random_poly(rng, n, 2);
        Poly g = testutil::random_poly(rng, n, 2);
        Poly h = testutil::random_poly(rng, n, 2);
        for (const auto& defect : associator(gauged, f, g, h)) CHECK(defect.is_zero());
    }
}

TEST_CASE("gauge cochains are validated")
{
    PoissonStructure ps = so3();
    int n = ps.n;

    Cochain zero_slot(2, n, false);
    zero_slot.add_term({MultiIndex::zero(n), e(n, 0)}, Poly::constant(n, 1));
    CHECK_THROWS_AS(build(ps, 2, {{2, zero_slot}}), std::invalid_argument);

    Cochain wrong_dim(2, 2, true);
    wrong_dim.add_term({e(2, 0), e(2, 1)}, Poly::constant(2, 1));
    CHECK_THROWS_AS(build(ps, 2, {{2, wrong_dim}}), std::invalid_argument);

    Cochain too_high(2, n, true);
    too_high.add_term({MultiIndex({3, 0, 0}), MultiIndex({2, 0, 0})},
                      Poly::constant(n, 1));
    CHECK_THROWS_AS(build(ps, 2, {{2, too_high}}), std::invalid_argument);
}

TEST_CASE("star_eval lists the per-order coefficients")
{
    StarProduct s = build(so3(), 2);
    Poly f = parse_poly("x1*x2", 3), g = parse_poly("x3", 3);
    std::vector<Poly> fg = star_eval(s, f, g);
    REQUIRE(fg.size() == 3);
    CHECK(fg[0] == f * g);
    CHECK(fg[1] == apply(s.pis[0], {f, g}));

    // the unit stays a unit: tilde cochains kill constants on either side
    Poly one = Poly::constant(3, 1);
    std::vector<Poly> right = star_eval(s, f, one);
    std::vector<Poly> left = star_eval(s, one, f);
    CHECK(right[0] == f);
    CHECK(left[0] == f);
    for (int k = 1; k <= 2; ++k) {
        CHECK(right[k].is_zero());
        CHECK(left[k].is_zero());
    }
    CHECK_THROWS_AS(star_eval(s, parse_poly("x1", 2), g), std::invalid_argument);
}

TEST_CASE("associator vanishes through the built order")
{
    std::mt19937_64 rng(45);
    for (const PoissonStructure& ps : {so3(), mixed()}) {
        StarProduct s = build(ps, 3);
        for (int trial = 0; trial < 5; ++trial) {
            Poly f = testutil::random_poly(rng, ps.n, 2);
            Poly g = testutil::random_poly(rng, ps.n, 2);
            Poly h = testutil::random_poly(rng, ps.n, 2);
            std::vector<Poly> defect = associator(s, f, g, h);
            REQUIRE(defect.size() == 4);
            for (const auto& d : defect) CHECK(d.is_zero());
        }
    }
}

TEST_CASE("degree support stays inside the order bounds")
{
    StarProduct s = build(so3(), 3);
    for (int k = 1; k <= 3; ++k)
        for (const auto& [l, part] : degree_split(s.pis[k - 1])) {
            CHECK(l.order() >= 2);
            CHECK(l.order() <= 2 * k);
        }
    for (int k = 2; k <= 3; ++k) {
        std::vector<Cochain> lower(s.pis.begin(), s.pis.begin() + (k - 1));
        for (const auto& [l, part] : degree_split(omega_k(lower))) {
            CHECK(l.order() >= 3);
            CHECK(l.order() <= 2 * k);
        }
    }
}

TEST_CASE("build gates on the Jacobi identity")
{
    PoissonStructure bad(3);
    bad.set(0, 1, parse_poly("x1", 3));
    bad.set(0, 2, parse_poly("x2", 3));
    CHECK_THROWS_AS(build(bad, 2), InvalidPoissonError);
    try {
        build(bad, 2);
    } catch (const InvalidPoissonError& e) {
        CHECK(e.residual() == jacobi_residual(bad));
        std::string msg = e.what();
        CHECK(msg.find("Jacobi") != std::string::npos);
        CHECK(msg.find("(1,2,3)") != std::string::npos);
    }
    CHECK_THROWS_AS(build(so3(), 0), std::invalid_argument);
}

TEST_CASE("solve_order validates its inputs")
{
    StarProduct s = build(so3(), 1);
    CHECK_THROWS_AS(solve_order(s, 1), std::invalid_argument);
    CHECK_THROWS_AS(solve_order(s, 3), std::invalid_argument);
    Cochain p2 = solve_order(s, 2);
    CHECK(p2 == build(so3(), 2).pis[1]);
    CHECK(solve_order(s, 2, nullptr, 4) == p2);
}
