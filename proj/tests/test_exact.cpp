#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "achsets/exact.hpp"

using namespace achsets;

TEST_CASE("rational arithmetic stays in lowest terms") {
    Exact a(1, 3), b(1, 6);
    CHECK((a + b).str() == "1/2");
    CHECK((a - b).str() == "1/6");
    CHECK((a * b).str() == "1/18");
    CHECK((a / b).str() == "2/1");
}

TEST_CASE("surd sign determination") {
    // 1 - (1/2)sqrt(3) > 0, 1 - (3/5)sqrt(3) < 0
    Exact x = Exact(1) - Exact(1, 2) * Exact::sqrt_of(3);
    Exact y = Exact(1) - Exact(3, 5) * Exact::sqrt_of(3);
    CHECK(x.sign() == 1);
    CHECK(y.sign() == -1);
    CHECK((Exact::sqrt_of(2) * Exact::sqrt_of(2)).str() == "2/1");
}

TEST_CASE("surd division by conjugate") {
    // 1 / (1 + sqrt(2)) = -1 + sqrt(2)
    Exact d = Exact(1) / (Exact(1) + Exact::sqrt_of(2));
    CHECK(d == Exact::surd(BigRat(-1), BigRat(1), 2));
}

TEST_CASE("mixing distinct radicands throws") {
    CHECK_THROWS_AS(Exact::sqrt_of(2) + Exact::sqrt_of(3), FieldMismatchError);
    try {
        Exact::sqrt_of(2) * Exact::sqrt_of(5);
        FAIL("expected throw");
    } catch (const FieldMismatchError& e) {
        CHECK(std::string(e.what()) == "field mismatch");
    }
}

TEST_CASE("parse round-trips") {
    for (const char* text : {"3/4", "-7/2", "0/1", "1/2+1/3*sqrt(5)", "1/2-1/3*sqrt(5)"}) {
        Exact v = Exact::parse(text);
        CHECK(Exact::parse(v.str()) == v);
    }
    CHECK(Exact::parse("5") == Exact(5));
    CHECK(Exact::parse("sqrt(2)") == Exact::sqrt_of(2));
    CHECK(Exact::parse("3/2*sqrt(7)") == Exact::surd(BigRat(0), BigRat(3, 2), 7));
    CHECK_THROWS_AS(Exact::parse("1.5"), ParameterError);
    CHECK_THROWS_AS(Exact::parse("1/0"), ParameterError);
}

TEST_CASE("pow and comparisons") {
    CHECK(Exact(2, 3).pow(3) == Exact(8, 27));
    CHECK(Exact(2).pow(-2) == Exact(1, 4));
    CHECK(compare(Exact(1, 3), Exact(1, 2)) == Ordering::Less);
    CHECK(Exact::sqrt_of(2) > Exact(7, 5));
    CHECK(Exact::sqrt_of(2) < Exact(3, 2));
}

TEST_CASE("geometric tail closed form") {
    // sum_{i>2} (1/2)^i = 1/4
    CHECK(geometric_tail(Exact(1), Exact(1, 2), 2) == Exact(1, 4));
    CHECK_THROWS_AS(geometric_tail(Exact(1), Exact(3, 2), 0), ParameterError);
}
