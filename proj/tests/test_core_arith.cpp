#include <doctest.h>

#include <random>

#include "adelix/circle.hpp"
#include "adelix/errors.hpp"
#include "adelix/factor.hpp"
#include "adelix/linalg.hpp"
#include "adelix/padic.hpp"
#include "adelix/poly.hpp"
#include "adelix/prime_field.hpp"
#include "adelix/rational.hpp"

using namespace adelix;

TEST_SUITE("core") {

TEST_CASE("primality and integer factoring") {
    CHECK(is_prime(2));
    CHECK(is_prime(97));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(91));  // 7 * 13

    CHECK(prime_factors(Int(360)) == std::vector<long>{2, 3, 5});
    CHECK(prime_factors(Int(1)).empty());
    CHECK(prime_factors(Int(-14)) == std::vector<long>{2, 7});

    CHECK(ord_p(Rational(8), 2) == 3);
    CHECK(ord_p(Rational(5) / 12, 2) == -2);
    CHECK(ord_p(Rational(5) / 12, 3) == -1);
    CHECK_THROWS_AS(ord_p(Rational(0), 5), AdxError);
}

TEST_CASE("principal parts are the fractional p-adic tail") {
    // 1/12 = 3/4 + (-2/3), the remainder 2-integral
    Rational pp = principal_part_at(Rational(1) / 12, 2);
    CHECK(pp == Rational(3) / 4);
    CHECK(ord_p(Rational(1) / 12 - pp, 2) >= 0);

    // same number at 3: 1/12 = 1/3 + (-1/4)
    pp = principal_part_at(Rational(1) / 12, 3);
    CHECK(pp == Rational(1) / 3);
    CHECK(ord_p(Rational(1) / 12 - pp, 3) >= 0);

    CHECK(principal_part_at(Rational(7), 2) == 0);

    CHECK(mod1(Rational(7) / 4) == Rational(3) / 4);
    CHECK(mod1(Rational(-1) / 4) == Rational(3) / 4);
    CHECK(mod1(Rational(3)) == 0);

    CHECK(mod_inverse(Int(3), Int(7)) == 5);
    CHECK_THROWS_AS(mod_inverse(Int(2), Int(4)), AdxError);
}

TEST_CASE("lambda maps satisfy the product formula on 5/6") {
    // hand-computed local characters of x = 5/6
    Rational x = Rational(5) / 6;
    CircleValue l2 = lambda_p_rational(x, 2);
    CircleValue l3 = lambda_p_rational(x, 3);
    CircleValue li = lambda_inf_exact(x);
    REQUIRE(l2.is_exact());
    CHECK(*l2.exact == Rational(1) / 2);
    CHECK(*l3.exact == Rational(1) / 3);
    CHECK(*li.exact == Rational(1) / 6);

    CircleValue sum = l2 + l3 + li;
    CHECK(sum.is_exact());
    CHECK(sum.is_zero(0.0));

    // lambda_p of a p-integral number is exactly zero
    CHECK(lambda_p_rational(Rational(3), 5).is_zero(0.0));
    // circle arithmetic wraps: 3/4 + 1/2 = 1/4
    CircleValue w = CircleValue::from_exact(Rational(3) / 4) + CircleValue::from_exact(Rational(1) / 2);
    CHECK(*w.exact == Rational(1) / 4);
    CHECK(circle_dist(CircleValue::from_exact(Rational(9) / 10), CircleValue::zero()) ==
          doctest::Approx(0.1));
}

TEST_CASE("p-adic arithmetic tracks precision") {
    PAdic m1 = PAdic::from_rational(Rational(-1), 2, 8);
    CHECK(m1.val() == 0);
    REQUIRE((long)m1.digits().size() == 8);
    for (int32_t d : m1.digits()) CHECK(d == 1);  // ...11111111

    PAdic third = PAdic::from_rational(Rational(1) / 3, 5, 6);
    CHECK(third.mul_int(3) == PAdic::from_rational(Rational(1), 5, 6));
    CHECK(third * third.inv() == PAdic::from_rational(Rational(1), 5, 6));

    CHECK(PAdic::from_rational(Rational(50), 5, 8).val() == 2);
    CHECK(PAdic::from_rational(Rational(1) / 2, 2, 8).val() == -1);

    // differences cancel to a zero known only at precision
    PAdic z = third - third;
    CHECK(z.is_zero_at_precision());
    CHECK_FALSE(z.is_exact_zero());

    // equality is equality at the shared precision
    CHECK(PAdic::from_rational(Rational(1), 2, 4) == PAdic::from_rational(Rational(17), 2, 4));
    CHECK_FALSE(PAdic::from_rational(Rational(1), 2, 5) == PAdic::from_rational(Rational(17), 2, 5));

    // fractional tail of 3/2 = 1/2 + 1
    CHECK(PAdic::from_rational(Rational(3) / 2, 2, 8).principal_part() == Rational(1) / 2);
}

TEST_CASE("quotient rings model residue fields") {
    // F_4 = F_2[x]/(x^2+x+1)
    Fp one(2, 1), zero(2, 0);
    auto ctx = std::make_shared<ModCtx<Fp>>();
    ctx->m = make_poly<Fp>({one, one, one});
    ModPoly<Fp> theta = ModPoly<Fp>::gen(ctx);
    ModPoly<Fp> u = ModPoly<Fp>::constant(ctx, one);

    // theta has order 3 and trace 1
    ModPoly<Fp> t3 = theta * theta * theta;
    CHECK((t3 - u).is_exact_zero());
    CHECK(theta.trace() == one);
    CHECK(u.trace() == zero);  // Tr(1) = 2 = 0 in F_2

    ModPoly<Fp> s = theta + u;
    CHECK((s * s.inv() - u).is_exact_zero());
}

TEST_CASE("polynomial division is exact") {
    std::mt19937 rng(11);
    Fp one(5, 1);
    auto rand_poly = [&](long maxdeg) {
        std::vector<Fp> c;
        long d = (long)(rng() % (maxdeg + 1));
        for (long i = 0; i <= d; ++i) c.emplace_back(5, (long)(rng() % 5));
        return poly_trim(make_poly<Fp>(c));
    };
    for (int it = 0; it < 20; ++it) {
        Poly<Fp> f = rand_poly(6), g = rand_poly(3);
        if (g.is_zero()) continue;
        auto [q, r] = divmod(f, g);
        Poly<Fp> back = q * g + r;
        CHECK(poly_trim(back - f).is_zero());
        CHECK(r.deg() < g.deg());
    }
}

TEST_CASE("factoring over F_p and over Q") {
    // x^4 + x = x (x+1) (x^2+x+1) over F_2
    Fp one(2, 1), zero(2, 0);
    Poly<Fp> f = make_poly<Fp>({zero, one, zero, zero, one});
    auto fac = factor_fp(f);
    REQUIRE(fac.size() == 3);
    Poly<Fp> prod = make_poly<Fp>({one});
    for (const auto& pf : fac) {
        CHECK(pf.mult == 1);
        CHECK(is_irreducible_fp(pf.f));
        for (long i = 0; i < pf.mult; ++i) prod = prod * pf.f;
    }
    CHECK(poly_trim(prod - f).is_zero());

    // t^2 + 1: irreducible mod 3, splits mod 5
    Poly<Rational> t2p1 = make_poly<Rational>({Rational(1), Rational(0), Rational(1)});
    CHECK(is_irreducible_fp(reduce_mod_p(t2p1, 3)));
    CHECK_FALSE(is_irreducible_fp(reduce_mod_p(t2p1, 5)));

    // 6t^2 + 5t + 1 = 6 (t + 1/2)(t + 1/3), monic factors over Q
    Poly<Rational> g = make_poly<Rational>({Rational(1), Rational(5), Rational(6)});
    auto qf = factor_q(g);
    REQUIRE(qf.size() == 2);
    bool half = false, third = false;
    for (const auto& pf : qf) {
        REQUIRE(pf.f.deg() == 1);
        if (pf.f.c[0] == Rational(1) / 2) half = true;
        if (pf.f.c[0] == Rational(1) / 3) third = true;
    }
    CHECK(half);
    CHECK(third);

    CHECK(is_irreducible_q(t2p1));
    CHECK(is_irreducible_q(make_poly<Rational>({Rational(-2), Rational(0), Rational(1)})));
    CHECK_FALSE(is_irreducible_q(make_poly<Rational>({Rational(-4), Rational(0), Rational(1)})));

    // reduce then lift is the identity on {0..p-1} coefficients
    Poly<Rational> h = make_poly<Rational>({Rational(2), Rational(1), Rational(4)});
    Poly<Rational> back = lift_to_q(reduce_mod_p(h, 5));
    CHECK(poly_trim(back - h).is_zero());
}

TEST_CASE("exact linear algebra over F_p") {
    Fp one(3, 1);
    auto e = [&](long v) { return Fp(3, v); };

    Mat<Fp> id = {{one, e(0), e(0)}, {e(0), one, e(0)}, {e(0), e(0), one}};
    CHECK(mat_rank(id) == 3);

    // second row is twice the first: rank 1, kernel dimension 1
    Mat<Fp> sing = {{e(1), e(2)}, {e(2), e(4)}};
    CHECK(mat_rank(sing) == 1);
    Mat<Fp> ker = kernel_basis(sing, 2, one);
    REQUIRE(ker.size() == 1);
    for (const auto& row : sing) {
        Fp dot = e(0);
        for (size_t j = 0; j < row.size(); ++j) dot = dot + row[j] * ker[0][j];
        CHECK(dot.is_zero());
    }

    // row reduction is idempotent
    Rref<Fp> r1 = row_reduce(sing);
    Rref<Fp> r2 = row_reduce(r1.m);
    CHECK(r1.rank() == r2.rank());
    for (size_t i = 0; i < r1.m.size(); ++i)
        for (size_t j = 0; j < r1.m[i].size(); ++j) CHECK(r1.m[i][j] == r2.m[i][j]);
}

TEST_CASE("rational strings round trip") {
    CHECK(rat_to_string(Rational(-5) / 3) == "-5/3");
    CHECK(rat_to_string(Rational(4)) == "4");
    CHECK(rat_from_string("-5/3") == Rational(-5) / 3);
    CHECK(rat_from_string("7") == 7);
    CHECK_THROWS_AS(rat_from_string("7/"), AdxError);
    CHECK_THROWS_AS(rat_from_string("x"), AdxError);
}

}  // TEST_SUITE
