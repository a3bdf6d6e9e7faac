#include <doctest.h>

#include <cmath>
#include <vector>

#include "sms/core.hpp"
#include "sms/rng.hpp"
#include "sms/vec.hpp"

using namespace sms;

namespace {

// Independent subset-product oracle: recursive enumeration by (size, lex).
void subsets_of_size(const std::vector<double>& z, std::size_t size, std::size_t start,
                     double prod, std::vector<double>& out) {
    if (size == 0) {
        out.push_back(prod);
        return;
    }
    for (std::size_t i = start; i + size <= z.size(); ++i)
        subsets_of_size(z, size - 1, i + 1, prod * z[i], out);
}

std::vector<double> brute_force_basis(const std::vector<double>& z) {
    std::vector<double> out;
    for (std::size_t size = 0; size <= z.size(); ++size) subsets_of_size(z, size, 0, 1.0, out);
    return out;
}

}  // namespace

TEST_CASE("conviction basis matches hand examples") {
    CHECK(expand_conviction_basis(std::vector<double>{1, 1}) ==
          std::vector<double>{1, 1, 1, 1});
    CHECK(expand_conviction_basis(std::vector<double>{0, 0}) ==
          std::vector<double>{1, 0, 0, 0});
    CHECK(expand_conviction_basis(std::vector<double>{1, 0, 1}) ==
          std::vector<double>{1, 1, 0, 1, 0, 1, 0, 0});
    CHECK(expand_conviction_basis(std::vector<double>{}) == std::vector<double>{1});
}

TEST_CASE("conviction basis matches the brute-force oracle exhaustively") {
    for (int m1 = 0; m1 <= 4; ++m1) {
        for (int bits = 0; bits < (1 << m1); ++bits) {
            std::vector<double> z(static_cast<std::size_t>(m1));
            for (int i = 0; i < m1; ++i) z[static_cast<std::size_t>(i)] = (bits >> i) & 1;
            CHECK(expand_conviction_basis(z) == brute_force_basis(z));
        }
    }
    // and on continuous inputs
    Rng rng(7);
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<double> z(4);
        for (auto& x : z) x = rng.uniform01() * 2.0 - 1.0;
        const auto got = expand_conviction_basis(z);
        const auto want = brute_force_basis(z);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got[i] == doctest::Approx(want[i]).epsilon(1e-12));
    }
}

TEST_CASE("conviction basis capacity guard") {
    std::vector<double> z(17, 1.0);
    CHECK_THROWS_AS(expand_conviction_basis(z), std::length_error);
    CHECK_THROWS_AS(conviction_basis_size(17), std::length_error);
    CHECK(conviction_basis_size(16) == 65536);
}

TEST_CASE("regressor dimension formula") {
    CHECK(regressor_dim(2, 3) == 80);
    for (int m1 = 0; m1 <= 8; ++m1)
        for (int m2 = 0; m2 <= 8; ++m2) {
            CaseRecord rec;
            rec.a = 1.0;
            rec.z.assign(static_cast<std::size_t>(m1), 1.0);
            rec.v.assign(static_cast<std::size_t>(m2), 1.0);
            rec.lower = 1.0;
            rec.upper = 2.0;
            CHECK(build_regressor(rec).values.size() == regressor_dim(m1, m2));
        }
}

TEST_CASE("regressor block layout") {
    CaseRecord rec;
    rec.a = 10.0;
    rec.z = {0.0};
    rec.v = {0.0};
    rec.lower = 36.0;
    rec.upper = 120.0;

    SUBCASE("zeros propagate") {
        const auto phi = build_regressor(rec).values;
        std::vector<double> want(20, 0.0);
        want[0] = 10.0;
        CHECK(phi == want);
    }

    SUBCASE("active features fill the a and x1 blocks") {
        rec.x = {1.0, 0.0, 0.0, 0.0};
        rec.z = {1.0};
        rec.v = {1.0};
        const auto phi = build_regressor(rec).values;
        std::vector<double> want(20, 0.0);
        want[0] = want[1] = want[2] = want[3] = 10.0;  // a * [phi1 | v x phi1]
        want[4] = want[5] = want[6] = want[7] = 1.0;   // x1 block
        CHECK(phi == want);
    }
}

TEST_CASE("theta construction matches hand expansion") {
    StructuralParams sp;

    SUBCASE("only the constant survives with zero params") {
        sp.p = {0.0};
        sp.q = {0.0};
        const auto theta = build_theta(sp, 5.0).values;
        std::vector<double> want(20, 0.0);
        want[0] = 1.0;
        CHECK(theta == want);
    }

    SUBCASE("hand case") {
        sp.b = 2.0;
        sp.eta = 0.1;
        sp.p = {0.5};
        sp.q = {0.3};
        const auto theta = build_theta(sp, 5.0).values;
        REQUIRE(theta.size() == 20);
        const std::vector<double> head = {1.1, 0.55, 0.3, 0.15, 2.2, 1.1, 0.6, 0.3};
        for (std::size_t i = 0; i < head.size(); ++i)
            CHECK(theta[i] == doctest::Approx(head[i]).epsilon(1e-14));
        for (std::size_t i = head.size(); i < theta.size(); ++i) CHECK(theta[i] == 0.0);
    }

    SUBCASE("component outside the box is a construction error naming the index") {
        sp.b = 2.0;
        sp.eta = 0.1;
        sp.p = {0.5};
        sp.q = {0.3};
        CHECK_THROWS_WITH_AS(build_theta(sp, 1.0),
                             doctest::Contains("component 0"), std::invalid_argument);
    }
}

TEST_CASE("saturate") {
    CHECK(saturate(50.0, 36.0, 120.0) == 50.0);
    CHECK(saturate(130.0, 36.0, 120.0) == 120.0);
    CHECK(saturate(10.0, 36.0, 120.0) == 36.0);
    CHECK_THROWS_AS(saturate(1.0, 5.0, 5.0), std::invalid_argument);

    // idempotent and monotone
    Rng rng(3);
    double prev = -1e18;
    for (int i = 0; i < 200; ++i) {
        const double x = -50.0 + i;
        const double s = saturate(x, 36.0, 120.0);
        CHECK(saturate(s, 36.0, 120.0) == s);
        CHECK(s >= prev);
        prev = s;
    }
    (void)rng;
}

TEST_CASE("structural inner value") {
    CaseRecord rec;
    rec.a = 10.0;
    rec.lower = 1.0;
    rec.upper = 200.0;
    StructuralParams sp;
    CHECK(sms_inner(sp, rec) == 10.0);

    rec.x = {2.0, 0.0, 0.0, 0.0};
    rec.z = {1.0};
    sp.b = 3.0;
    sp.p = {1.0};
    CHECK(sms_inner(sp, rec) == 32.0);
}

TEST_CASE("generation clamps to the statutory interval") {
    CaseRecord rec;
    rec.a = 50.0;
    rec.lower = 36.0;
    rec.upper = 120.0;
    StructuralParams sp;
    CHECK(sms_generate(sp, rec, 0.0) == 50.0);
    rec.a = 115.0;
    CHECK(sms_generate(sp, rec, 20.0) == 120.0);
    rec.a = 40.0;
    CHECK(sms_generate(sp, rec, -10.0) == 36.0);
}

TEST_CASE("linearization identity on random instances") {
    Rng rng(20240601);
    for (int rep = 0; rep < 1000; ++rep) {
        const int m1 = 1 + static_cast<int>(rng.next_u64() % 4);
        const int m2 = static_cast<int>(rng.next_u64() % 4);

        StructuralParams sp;
        sp.b = rng.normal();
        sp.c = rng.normal();
        sp.d = rng.normal();
        sp.e = rng.normal();
        sp.eta = 0.5 * rng.normal();
        sp.p.resize(static_cast<std::size_t>(m1));
        sp.q.resize(static_cast<std::size_t>(m2));
        for (auto& p : sp.p) p = rng.normal();
        for (auto& q : sp.q) q = rng.normal();

        CaseRecord rec;
        rec.a = 20.0 * rng.uniform01();
        for (auto& x : rec.x) x = static_cast<double>(rng.next_u64() % 4);
        rec.z.resize(static_cast<std::size_t>(m1));
        rec.v.resize(static_cast<std::size_t>(m2));
        const bool binary = rep % 2 == 0;
        for (auto& z : rec.z) z = binary ? static_cast<double>(rng.next_u64() % 2) : rng.normal();
        for (auto& v : rec.v) v = binary ? static_cast<double>(rng.next_u64() % 2) : rng.normal();
        rec.lower = 1.0;
        rec.upper = 2.0;

        const double inner = sms_inner(sp, rec);
        const double lin = dot(build_regressor(rec).values, build_theta(sp, 1e9).values);
        CHECK(std::abs(inner - lin) <= 1e-9 * (1.0 + std::abs(inner)));
    }
}

TEST_CASE("case record invariants") {
    CaseRecord rec;
    rec.a = 10.0;
    rec.lower = 36.0;
    rec.upper = 120.0;
    CHECK(!rec.check());

    rec.y = 130.0;
    CHECK(rec.check());
    rec.y = 50.0;
    CHECK(!rec.check());

    rec.z = {2.0};
    CHECK(rec.check());
    rec.z = {1.0};
    CHECK(!rec.check());

    rec.x[1] = 1.5;
    CHECK(rec.check());
    rec.x[1] = 2.0;
    CHECK(!rec.check());

    rec.lower = 0.0;
    CHECK(rec.check());
}
