#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <random>
#include <string>
#include <vector>

#include "sdmm/cost.hpp"

using namespace sdmm;

TEST_CASE("rational formatting") {
    CHECK(format_rational(Rational(23)) == "23");
    CHECK(format_rational(Rational(4, 39)) == "4/39");
    CHECK(format_rational(Rational(92, 4)) == "23");
    CHECK(format_rational(Rational(-3, 6)) == "-1/2");
}

TEST_CASE("costs of the 13-server configuration match the worked accounting") {
    const PartitionParams params(2, 2, 2, 1);
    for (auto [a, b, c] : std::vector<std::array<std::int64_t, 3>>{
             {4, 4, 4}, {8, 4, 12}, {100, 200, 300}}) {
        const CostReport r = communication_costs(params, 13, a, b, c);
        CHECK(r.upload_elements == Rational(13, 4) * (a * b + b * c));
        CHECK(r.download_elements == Rational(13, 4) * (a * c));
        CHECK(r.encode_ops == Rational(26) * (a * b + b * c));
        CHECK(r.decode_ops == Rational(23) * (a * c));
    }
    const CostReport sym = communication_costs(params, 13, 4, 4, 4);
    CHECK(sym.total_rate == Rational(4, 39));
}

TEST_CASE("costs of the smallest inner-partition instance") {
    const CostReport r = communication_costs({1, 1, 1, 1}, 3, 1, 1, 1);
    CHECK(r.upload_elements == Rational(6));
    CHECK(r.download_elements == Rational(3));
    CHECK(r.total_rate == Rational(1, 9));
}

TEST_CASE("rate times total traffic is exactly ac") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint32_t t = 1 + rng() % 3, s = 1 + rng() % 3, d = 1 + rng() % 3;
        const std::uint32_t T = 1 + rng() % 2;
        const std::int64_t a = t * (1 + rng() % 5);
        const std::int64_t b = s * (1 + rng() % 5);
        const std::int64_t c = d * (1 + rng() % 5);
        const std::uint64_t n = 1 + rng() % 40;
        const CostReport r = communication_costs({t, s, d, T}, n, a, b, c);
        CHECK(r.total_rate * (r.upload_elements + r.download_elements) == Rational(a * c));
        CHECK(r.upload_elements > 0);
        CHECK(r.download_elements > 0);
        CHECK(r.encode_ops > 0);
        CHECK(r.decode_ops > 0);
    }
}

TEST_CASE("cost preconditions") {
    CHECK_THROWS_AS(communication_costs({2, 2, 2, 1}, 13, 3, 4, 4), std::invalid_argument);
    CHECK_THROWS_AS(communication_costs({2, 2, 2, 1}, 13, 4, 3, 4), std::invalid_argument);
    CHECK_THROWS_AS(communication_costs({2, 2, 2, 1}, 13, 4, 4, 3), std::invalid_argument);
    CHECK_THROWS_AS(communication_costs({2, 2, 2, 1}, 13, 0, 4, 4), std::invalid_argument);
}

TEST_CASE("comparison table at a = b = c = 4") {
    const auto rows = comparison_table(4, 4, 4);
    REQUIRE(rows.size() == 3);

    CHECK(rows[0].scheme == "grid");
    CHECK(rows[0].upload == Rational(104));
    CHECK(rows[0].download == Rational(52));
    CHECK(rows[0].encode == Rational(832));
    CHECK(rows[0].decode == Rational(368));

    CHECK(rows[1].scheme == "gasp");
    CHECK(rows[1].upload == Rational(112));
    CHECK(rows[1].download == Rational(28));
    CHECK(rows[1].encode == Rational(896));
    CHECK(rows[1].decode == Rational(432));

    CHECK(rows[2].scheme == "inner_product");
    CHECK(rows[2].upload == Rational(48));
    CHECK(rows[2].download == Rational(112));
    CHECK(rows[2].encode == Rational(384));
    CHECK(rows[2].decode == Rational(112));
}

TEST_CASE("the grid row of the table comes from the general formulas") {
    for (auto [a, b, c] : std::vector<std::array<std::int64_t, 3>>{{4, 4, 4}, {8, 16, 4}}) {
        const auto rows = comparison_table(a, b, c);
        const CostReport r = communication_costs({2, 2, 2, 1}, 13, a, b, c);
        CHECK(rows[0].upload == r.upload_elements);
        CHECK(rows[0].download == r.download_elements);
        CHECK(rows[0].encode == r.encode_ops);
        CHECK(rows[0].decode == r.decode_ops);
    }
}

TEST_CASE("comparison table rejects non-multiples of 4") {
    CHECK_THROWS_AS(comparison_table(0, 4, 4), std::invalid_argument);
    CHECK_THROWS_AS(comparison_table(4, 6, 4), std::invalid_argument);
}

TEST_CASE("table formatting") {
    const auto rows = comparison_table(4, 4, 4);
    const std::string csv = format_table_csv(rows);
    CHECK(csv == "scheme,upload,download,encode,decode\n"
                 "grid,104,52,832,368\n"
                 "gasp,112,28,896,432\n"
                 "inner_product,48,112,384,112\n");
    const std::string text = format_table_text(rows);
    CHECK(text.find("scheme") != std::string::npos);
    CHECK(text.find("inner_product") != std::string::npos);
    CHECK(text.find("104") != std::string::npos);
}

TEST_CASE("speedup region") {
    CHECK(!speedup_region(10, 10, 10));
    CHECK(!speedup_region(10, 10, 10).reason.empty());
    CHECK(speedup_region(1000, 1000, 1000));
    // a passes but b falls below 216a/(7a-234) = 1836
    CHECK(!speedup_region(34, 10, 1000000));
    CHECK(speedup_region(34, 10, 1000000).reason.find("b") != std::string::npos);
    CHECK(speedup_region(34, 1837, 1000000000));
    CHECK_THROWS_AS(speedup_region(0, 1, 1), std::invalid_argument);
}
