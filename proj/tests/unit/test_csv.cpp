#include "fraclap/csv.hpp"
#include "fraclap/error.hpp"

#include "../support/generators.hpp"

#include <doctest.h>

#include <cstring>
#include <limits>

using namespace fraclap;

TEST_CASE("format_double round-trips bit-exactly") {
    testing::Gen gen(3);
    for (int i = 0; i < 5000; ++i) {
        const double x = gen.uniform(-1.0, 1.0) * std::pow(10.0, gen.uniform(-30.0, 30.0));
        const auto text = csv::format_double(x);
        const auto back = csv::parse_double(text);
        REQUIRE(back.has_value());
        REQUIRE(std::memcmp(&x, &*back, sizeof x) == 0);
    }
    CHECK(csv::format_double(0.5) == "0.5");
    CHECK(csv::format_double(16.0) == "16");
}

TEST_CASE("parse_double rejects junk and non-finite values") {
    CHECK_FALSE(csv::parse_double("").has_value());
    CHECK_FALSE(csv::parse_double("1.0x").has_value());
    CHECK_FALSE(csv::parse_double("inf").has_value());
    CHECK_FALSE(csv::parse_double("nan").has_value());
    CHECK(*csv::parse_double("-2.5e-3") == -2.5e-3);
}

TEST_CASE("split_fields trims whitespace") {
    const auto f = csv::split_fields(" 1, 2 ,3 ");
    REQUIRE(f.size() == 3);
    CHECK(f[0] == "1");
    CHECK(f[1] == "2");
    CHECK(f[2] == "3");
}
