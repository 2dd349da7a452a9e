// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include "nrl2sm/errors.hpp"
#include "nrl2sm/rational.hpp"

using nrl2sm::Rational;

TEST_CASE("rational normalizes to lowest terms") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(120, 1024) == Rational(15, 128));
    CHECK(Rational(0, 5) == Rational(0, 1));
    CHECK(Rational(7, 7) == Rational(1, 1));

    CHECK(Rational(6, 8).num() == 3);
    CHECK(Rational(6, 8).den() == 4);
}

TEST_CASE("rational sign lives in the numerator") {
    CHECK(Rational(1, -2) == Rational(-1, 2));
    CHECK(Rational(-1, -2) == Rational(1, 2));
    CHECK(Rational(-2, 4).num() == -1);
    CHECK(Rational(-2, 4).den() == 2);
}

TEST_CASE("rational rejects zero denominator") {
    CHECK_THROWS_AS(Rational(1, 0), nrl2sm::InvalidInputError);
}

TEST_CASE("rational ordering is exact") {
    CHECK(Rational(1, 3) < Rational(1, 2));
    CHECK(Rational(2, 3) > Rational(1, 2));
    CHECK(Rational(25, 100) <= Rational(1, 4));
    CHECK(Rational(25, 100) >= Rational(1, 4));
    // 0.67 as a fraction vs a value a hair above it; doubles would need care,
    // rationals do not.
    CHECK(Rational(67, 100) < Rational(671, 1000));
    CHECK_FALSE(Rational(67, 100) < Rational(67, 100));

    // NR rate quantization: 948/1024 vs 949/1024 differ by < 1e-3.
    CHECK(Rational(948, 1024) < Rational(949, 1024));
}

TEST_CASE("rational conversions") {
    CHECK(Rational(1, 2).to_double() == 0.5);
    CHECK(Rational(120, 1024).to_double() == doctest::Approx(0.1171875));
    CHECK(Rational(3, 4).str() == "3/4");
    CHECK(Rational(-2, 4).str() == "-1/2");
}

TEST_CASE("rational min and max") {
    CHECK(nrl2sm::max(Rational(1, 3), Rational(1, 2)) == Rational(1, 2));
    CHECK(nrl2sm::min(Rational(1, 3), Rational(1, 2)) == Rational(1, 3));
}

TEST_CASE("rational works at compile time") {
    static_assert(Rational(2, 4) == Rational(1, 2));
    static_assert(Rational(25, 100) <= Rational(1, 4));
    static_assert(Rational(1, 4) < Rational(67, 100));
    CHECK(true);
}
