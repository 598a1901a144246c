#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>
#include <random>

#include "starq/starprod.hpp"
#include "starq/verify.hpp"
#include "testutil.hpp"

using namespace starq;

namespace {

PoissonStructure moyal_plane()
{
    PoissonStructure ps(2);
    ps.set(0, 1, Poly::constant(2, 1));
    return ps;
}

PoissonStructure constant3()
{
    PoissonStructure ps(3);
    ps.set(0, 1, Poly::constant(3, 1));
    ps.set(0, 2, Poly::constant(3, 2));
    ps.set(1, 2, Poly::constant(3, -1));
    return ps;
}

// Direct expansion of the k-th exponential-series term with true partials:
// 1/(k! 2^k) sum over index tuples of prod w_{i_s j_s} d_{i...}f d_{j...}g.
Poly series_term(int k, const PoissonStructure& ps, const Poly& f, const Poly& g)
{
    int n = ps.n;
    std::vector<int> iv(k, 0), jv(k, 0);
    Poly out = Poly::zero(n);
    auto advance = [&](std::vector<int>& t) {
        for (int s = 0; s < k; ++s) {
            if (++t[s] < n) return true;
            t[s] = 0;
        }
        return false;
    };
    do {
        std::vector<int> jt(k, 0);
        do {
            Rational w = 1;
            for (int s = 0; s < k; ++s)
                w *= ps.omega(iv[s], jt[s]).coeff(MultiIndex::zero(n));
            if (w == 0) continue;
            Poly df = f, dg = g;
            for (int s = 0; s < k; ++s) {
                df = xderiv(df, MultiIndex::unit(n, iv[s]));
                dg = xderiv(dg, MultiIndex::unit(n, jt[s]));
            }
            out += df * dg * w;
        } while (advance(jt));
    } while (advance(iv));
    Integer denom = factorial(static_cast<unsigned>(k));
    denom <<= k;
    return out * (Rational(1) / Rational(denom));
}

BlockMatrix random_matrix(std::mt19937_64& rng, int rows, int cols)
{
    BlockMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            long v = static_cast<long>(rng() % 5u) - 2;
            if (v != 0 && rng() % 2 == 0) m.set(r, c, Rational(v));
        }
    return m;
}

} // namespace

TEST_CASE("column-recursive pseudoinverse oracle agrees with the solver")
{
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 150; ++trial) {
        int rows = 1 + static_cast<int>(rng() % 8);
        int cols = 1 + static_cast<int>(rng() % 8);
        BlockMatrix m = random_matrix(rng, rows, cols);
        CHECK(pinv_oracle(m) == pinv(m));
    }
}

TEST_CASE("pseudoinverse oracle edge cases")
{
    CHECK(pinv_oracle(BlockMatrix(3, 2)) == BlockMatrix(2, 3));

    BlockMatrix one(1, 1);
    one.set(0, 0, Rational(-1));
    CHECK(pinv_oracle(one) == one);

    // zero first column exercises the initial-step special case
    BlockMatrix zc(2, 2);
    zc.set(0, 1, 1);
    zc.set(1, 1, 1);
    CHECK(pinv_oracle(zc) == pinv(zc));

    // dependent second column exercises the c = 0 fallback
    BlockMatrix dep(2, 2);
    dep.set(0, 0, 1);
    dep.set(1, 0, 1);
    dep.set(0, 1, 1);
    dep.set(1, 1, 1);
    CHECK(pinv_oracle(dep) == pinv(dep));

    BlockMatrix d = coboundary_matrix(2, MultiIndex({1, 1, 1}), true);
    BlockMatrix o = pinv_oracle(d);
    CHECK(o == pinv(d));
    CHECK(o.row_basis == d.col_basis);
    CHECK(o.col_basis == d.row_basis);
}

TEST_CASE("moyal cochain at orders zero and one")
{
    PoissonStructure ps = moyal_plane();
    Cochain m0 = moyal_pi(0, ps);
    CHECK_FALSE(m0.tilde());
    CHECK(m0.terms().size() == 1);
    CHECK(m0.coeff({MultiIndex::zero(2), MultiIndex::zero(2)}) == Poly::constant(2, 1));
    Poly f = parse_poly("x1^2+x2", 2), g = parse_poly("x1*x2", 2);
    CHECK(apply(m0, {f, g}) == f * g);

    CHECK(moyal_pi(1, ps) == pi1(ps));
    CHECK(moyal_pi(1, constant3()) == pi1(constant3()));

    PoissonStructure scaled(2);
    scaled.set(0, 1, Poly::constant(2, Rational(3, 2)));
    CHECK(moyal_pi(1, scaled) == pi1(scaled));
    CHECK(moyal_pi(2, scaled).tilde());
}

TEST_CASE("moyal cochain matches the series expansion")
{
    PoissonStructure ps = moyal_plane();
    Cochain m2 = moyal_pi(2, ps);
    CHECK(m2.coeff({MultiIndex({2, 0}), MultiIndex({0, 2})}) ==
          Poly::constant(2, Rational(1, 2)));
    CHECK(m2.coeff({MultiIndex({0, 2}), MultiIndex({2, 0})}) ==
          Poly::constant(2, Rational(1, 2)));
    CHECK(m2.coeff({MultiIndex({1, 1}), MultiIndex({1, 1})}) ==
          Poly::constant(2, Rational(-1, 4)));

    std::mt19937_64 rng(52);
    for (const PoissonStructure& s : {moyal_plane(), constant3()}) {
        for (int k = 1; k <= 3; ++k) {
            Cochain mk = moyal_pi(k, s);
            for (int trial = 0; trial < 5; ++trial) {
                Poly f = testutil::random_poly(rng, s.n, 3);
                Poly g = testutil::random_poly(rng, s.n, 3);
                CHECK(apply(mk, {f, g}) == series_term(k, s, f, g));
            }
        }
    }
}

TEST_CASE("moyal cochain validates its input")
{
    CHECK_THROWS_AS(moyal_pi(-1, moyal_plane()), std::invalid_argument);
    PoissonStructure linear(3);
    linear.set(0, 1, parse_poly("x3", 3));
    CHECK_THROWS_AS(moyal_pi(2, linear), std::invalid_argument);
}

TEST_CASE("built orders differ from the moyal ones by cocycles")
{
    for (const PoissonStructure& ps : {moyal_plane(), constant3()}) {
        StarProduct z = build(ps, 2);
        Cochain diff2 = moyal_pi(2, ps) - z.pis[1];
        CHECK_FALSE(diff2.is_zero()); // different representatives
        CHECK(coboundary(diff2).is_zero());

        // the order-3 comparison needs the same order-2 representative,
        // because the order-3 right-hand side is built from it; the gauge
        // hook reproduces the moyal choice exactly
        StarProduct a = build(ps, 3, {{2, moyal_pi(2, ps)}});
        CHECK(a.pis[1] == moyal_pi(2, ps));
        Cochain diff3 = moyal_pi(3, ps) - a.pis[2];
        CHECK(coboundary(diff3).is_zero());
        CHECK(diff3.is_zero()); // moyal is the minimal choice at order 3
    }
}

TEST_CASE("u-formula adjudication picks the positive sign")
{
    std::vector<MultiIndex> degrees;
    for (int a = 2; a <= 5; ++a) degrees.push_back(MultiIndex(std::vector<int>{a}));
    OracleReport r1 = check_u_formula(1, degrees);
    CHECK(r1.name == "u_formula");
    CHECK(r1.passed);

    degrees.clear();
    for (int a = 0; a <= 4; ++a)
        for (int b = 0; b <= 4 - a; ++b)
            if (a + b >= 2) degrees.push_back(MultiIndex({a, b}));
    OracleReport r2 = check_u_formula(2, degrees);
    CHECK(r2.passed);
    auto doc = nlohmann::json::parse(r2.details);
    CHECK(doc["name"] == "u_formula");
    CHECK(doc["winner"] == "+1/nu");
    CHECK(doc["consistent"] == true);
    CHECK(doc["adjudicated_blocks"] == static_cast<int>(degrees.size()));
    REQUIRE(doc["degrees"].size() == degrees.size());
    for (const auto& row : doc["degrees"]) {
        CHECK(row["plus_mp"] == true);
        CHECK(row["minus_mp"] == false);
        CHECK(row["plus_matches_pinv"] == true);
    }

    OracleReport r3 = check_u_formula(3, {MultiIndex({1, 1, 1})});
    CHECK(r3.passed);
    CHECK(nlohmann::json::parse(r3.details)["winner"] == "+1/nu");
}

TEST_CASE("u-formula report handles degenerate degrees")
{
    OracleReport deg = check_u_formula(2, {MultiIndex({1, 0})});
    CHECK_FALSE(deg.passed);
    auto doc = nlohmann::json::parse(deg.details);
    CHECK(doc["winner"] == "undecided");
    CHECK(doc["adjudicated_blocks"] == 0);
    CHECK(doc["degrees"][0]["degenerate"] == true);
    CHECK(doc["degrees"][0]["plus_mp"] == true);
    CHECK(doc["degrees"][0]["minus_mp"] == true);

    OracleReport mixed = check_u_formula(2, {MultiIndex({1, 0}), MultiIndex({1, 1})});
    CHECK(mixed.passed);
    CHECK(nlohmann::json::parse(mixed.details)["adjudicated_blocks"] == 1);

    CHECK_THROWS_AS(check_u_formula(2, {MultiIndex({1, 1, 1})}), std::invalid_argument);
}

TEST_CASE("second-order reference block on the standard structures")
{
    PoissonStructure constant(3);
    constant.set(0, 1, Poly::constant(3, 5));
    constant.set(1, 2, Poly::constant(3, -2));
    CHECK(paper_pi2_block(constant).is_zero());

    // the linear standard examples have degenerate distinct-index blocks:
    // the closed form and the built block are both zero
    PoissonStructure so3(3);
    so3.set(0, 1, parse_poly("x3", 3));
    so3.set(0, 2, parse_poly("-x2", 3));
    so3.set(1, 2, parse_poly("x1", 3));
    Cochain ref = paper_pi2_block(so3);
    CHECK(ref.is_zero());
    auto blocks = degree_split(build(so3, 2).pis[1]);
    CHECK(blocks.count(MultiIndex({1, 1, 1})) == 0);

    PoissonStructure heis(3);
    heis.set(0, 1, parse_poly("x3", 3));
    CHECK(paper_pi2_block(heis).is_zero());
    auto hblocks = degree_split(build(heis, 2).pis[1]);
    CHECK(hblocks.count(MultiIndex({1, 1, 1})) == 0);
}

TEST_CASE("second-order reference block carries half the solved block")
{
    // on a structure with a nonzero distinct-index block the solved minimal
    // block equals exactly twice the reference closed form; the relation is
    // pinned here so any drift in either route shows up
    PoissonStructure ps(3);
    ps.set(0, 1, parse_poly("x1", 3));
    ps.set(0, 2, parse_poly("x1", 3));
    REQUIRE(jacobi_residual(ps).empty());

    Cochain ref = paper_pi2_block(ps);
    REQUIRE_FALSE(ref.is_zero());
    for (const auto& [key, c] : ref.terms()) CHECK(c.total_degree() <= 1);

    auto [sym, anti] = flip_split(ref);
    CHECK(anti.is_zero());
    CHECK(sym == ref);

    auto blocks = degree_split(build(ps, 2).pis[1]);
    REQUIRE(blocks.count(MultiIndex({1, 1, 1})) == 1);
    CHECK(blocks.at(MultiIndex({1, 1, 1})) == ref + ref);
}
