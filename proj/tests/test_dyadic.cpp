#include <gtest/gtest.h>

#include "shishkin/dyadic.hpp"

using namespace shishkin;

TEST(Dyadic, PowerSyntaxIsExact) {
    EXPECT_EQ(parse_real("2^-10"), 0x1p-10);
    EXPECT_EQ(parse_real("2^-40"), 0x1p-40);
    EXPECT_EQ(parse_real(" 2^+3 "), 8.0);
    EXPECT_EQ(parse_real("2^0"), 1.0);
}

TEST(Dyadic, DecimalLiterals) {
    EXPECT_EQ(parse_real("0.25"), 0.25);
    EXPECT_EQ(parse_real("1e-3"), 1e-3);
    EXPECT_EQ(parse_real("0"), 0.0);
}

TEST(Dyadic, RejectsMalformedInput) {
    EXPECT_THROW(parse_real(""), ConfigError);
    EXPECT_THROW(parse_real("3^2"), ConfigError);
    EXPECT_THROW(parse_real("2^x"), ConfigError);
    EXPECT_THROW(parse_real("0.5abc"), ConfigError);
}

TEST(Dyadic, ExponentDetection) {
    EXPECT_EQ(dyadic_exponent(0x1p-20).value(), -20);
    EXPECT_EQ(dyadic_exponent(1.0).value(), 0);
    EXPECT_FALSE(dyadic_exponent(0.3).has_value());
    EXPECT_FALSE(dyadic_exponent(0.0).has_value());
}

TEST(Dyadic, Formatting) {
    EXPECT_EQ(format_param(0x1p-10), "2^-10");
    EXPECT_EQ(format_param(0.3), "0.3");
    EXPECT_EQ(format_sci(0.7231), "7.23e-01");
    EXPECT_EQ(format_sci(1.09), "1.09e+00");
    EXPECT_EQ(format_fixed(0.516, 2), "0.52");
    EXPECT_EQ(parse_real(format_real(0.1 + 0.2)), 0.1 + 0.2);
}
