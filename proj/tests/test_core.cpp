#include <doctest.h>

#include "swapsim/core.hpp"

using namespace swapsim;

TEST_CASE("make_secret is deterministic and seed-sensitive") {
    const Secret a1 = make_secret("alice-run1");
    const Secret a2 = make_secret("alice-run1");
    CHECK(a1 == a2);
    CHECK(to_hex(a1).size() == 64);

    CHECK(make_secret("a") != make_secret("b"));
    CHECK_THROWS_AS(make_secret(""), std::invalid_argument);
}

TEST_CASE("hashlock round trip and verification") {
    const Secret s = make_secret("x");
    const Hashlock h = hashlock(s);
    CHECK(hashlock(s) == h);
    CHECK(verify(h, s));
    CHECK_FALSE(verify(h, make_secret("y")));
    CHECK_FALSE(verify(Hashlock{}, s));  // all-zero digest matches nothing we make
}

TEST_CASE("round trip holds across many seeds") {
    for (int i = 0; i < 64; ++i) {
        const Secret s = make_secret("seed-" + std::to_string(i));
        CHECK(verify(hashlock(s), s));
    }
}

TEST_CASE("hex encoding round trips") {
    const Secret s = make_secret("hex");
    const std::string hex = to_hex(s);
    auto bytes = from_hex(hex);
    REQUIRE(bytes.has_value());
    CHECK(Secret{*bytes} == s);

    CHECK_FALSE(from_hex("abc").has_value());
    CHECK_FALSE(from_hex(std::string(64, 'g')).has_value());
}

TEST_CASE("amount arithmetic is checked") {
    CHECK(add_amount(2, 3) == 5);
    CHECK(sub_amount(5, 3) == 2);
    CHECK_THROWS_AS(sub_amount(3, 5), std::underflow_error);
    CHECK_THROWS_AS(add_amount(~0ull, 1), std::overflow_error);
    CHECK(delta_of(7, 10) == -3);
    CHECK(delta_of(10, 7) == 3);
}
