#include <cmath>
#include <random>
#include <sstream>

#include <doctest.h>

#include "qmcar/errors.hpp"
#include "qmcar/nets.hpp"

using namespace qmcar;

namespace {

// Independent oracle: base-2 radical inverse (bit reversal).
double radical_inverse(std::uint64_t n) {
    double value = 0.0, digit = 0.5;
    while (n) {
        if (n & 1) value += digit;
        n >>= 1;
        digit *= 0.5;
    }
    return value;
}

}  // namespace

TEST_CASE("direction-number parsing") {
    SUBCASE("single Joe-Kuo record") {
        std::istringstream in("2 1 0 1\n");
        DirectionNumberTable t = load_direction_numbers(in);
        REQUIRE(t.entries.size() == 1);
        CHECK(t.max_dimension == 2);
        CHECK(t.record(2).degree == 1);
        CHECK(t.record(2).poly == 0);
        CHECK(t.record(2).initial == std::vector<std::uint32_t>{1});
    }
    SUBCASE("header line is skipped") {
        std::istringstream in("d s a m_i\n2 1 0 1\n3 2 1 1 3\n");
        DirectionNumberTable t = load_direction_numbers(in);
        CHECK(t.max_dimension == 3);
        CHECK(t.record(3).degree == 2);
        CHECK(t.record(3).poly == 1);
        CHECK(t.record(3).initial == std::vector<std::uint32_t>{1, 3});
    }
    SUBCASE("empty stream gives the van der Corput-only table") {
        std::istringstream in("");
        DirectionNumberTable t = load_direction_numbers(in);
        CHECK(t.entries.empty());
        CHECK(t.max_dimension == 1);
    }
    SUBCASE("malformed line names its line number") {
        std::istringstream in("2 1 0 1\n3 2 1\n");
        CHECK_THROWS_WITH_AS(load_direction_numbers(in), doctest::Contains("line 2"), ParseError);
    }
    SUBCASE("even initial value is rejected") {
        std::istringstream in("2 1 0 2\n");
        CHECK_THROWS_AS(load_direction_numbers(in), ValidationError);
    }
    SUBCASE("oversized initial value is rejected") {
        std::istringstream in("2 1 0 1\n3 2 1 1 5\n");
        CHECK_THROWS_AS(load_direction_numbers(in), ValidationError);
    }
    SUBCASE("dimension gap is rejected") {
        std::istringstream in("2 1 0 1\n4 3 1 1 3 1\n");
        CHECK_THROWS_AS(load_direction_numbers(in), ValidationError);
    }
}

TEST_CASE("builtin table matches the bundled file") {
    const DirectionNumberTable& t = builtin_direction_table();
    CHECK(t.max_dimension == 21);
    CHECK(t.record(2).initial == std::vector<std::uint32_t>{1});
    CHECK(t.record(7).poly == 4);
    CHECK(t.record(7).initial == std::vector<std::uint32_t>{1, 3, 5, 13});
    CHECK(t.record(10).initial == std::vector<std::uint32_t>{1, 1, 7, 11, 19});
}

TEST_CASE("sobol_points reference values") {
    const DirectionNumberTable& t = builtin_direction_table();
    SUBCASE("m=0 is the origin") {
        NetPoints p = sobol_points(0, 3, t);
        REQUIRE(p.count() == 1);
        for (unsigned j = 0; j < 3; ++j) CHECK(p.coord(0, j) == 0.0);
    }
    SUBCASE("m=1, s=2") {
        NetPoints p = sobol_points(1, 2, t);
        REQUIRE(p.count() == 2);
        CHECK(p.coord(0, 0) == 0.0);
        CHECK(p.coord(0, 1) == 0.0);
        CHECK(p.coord(1, 0) == 0.5);
        CHECK(p.coord(1, 1) == 0.5);
    }
    SUBCASE("m=3, s=1 is the van der Corput block") {
        NetPoints p = sobol_points(3, 1, t);
        const double expected[] = {0, 0.5, 0.25, 0.75, 0.125, 0.625, 0.375, 0.875};
        REQUIRE(p.count() == 8);
        for (std::size_t n = 0; n < 8; ++n) CHECK(p.coord(n, 0) == expected[n]);
    }
    SUBCASE("first coordinate is the radical inverse") {
        NetPoints p = sobol_points(12, 3, t);
        for (std::size_t n = 0; n < p.count(); ++n)
            CHECK(p.coord(n, 0) == radical_inverse(n));
    }
    SUBCASE("unsupported dimension") {
        CHECK_THROWS_AS(sobol_points(3, 22, t), DimensionError);
    }
}

TEST_CASE("sobol_prefix agrees with sobol_points") {
    const DirectionNumberTable& t = builtin_direction_table();
    SUBCASE("prefix of one point") {
        NetPoints p = sobol_prefix(1, 2, t);
        REQUIRE(p.count() == 1);
        CHECK(p.coord(0, 0) == 0.0);
        CHECK(p.coord(0, 1) == 0.0);
    }
    SUBCASE("power-of-two prefix is the net") {
        NetPoints net = sobol_points(6, 4, t);
        NetPoints prefix = sobol_prefix(64, 4, t);
        CHECK(net.raw_data() == prefix.raw_data());
    }
    SUBCASE("three-point prefix in one dimension") {
        NetPoints p = sobol_prefix(3, 1, t);
        REQUIRE(p.count() == 3);
        CHECK(p.coord(0, 0) == 0.0);
        CHECK(p.coord(1, 0) == 0.5);
        CHECK(p.coord(2, 0) == 0.25);
    }
}

TEST_CASE("determinism, nesting, projection, dyadic range") {
    const DirectionNumberTable& t = builtin_direction_table();
    SUBCASE("identical inputs, bit-identical output") {
        CHECK(sobol_points(9, 5, t).raw_data() == sobol_points(9, 5, t).raw_data());
    }
    SUBCASE("points at m are a prefix of m+1") {
        NetPoints small = sobol_points(8, 3, t);
        NetPoints big = sobol_points(9, 3, t);
        for (std::size_t i = 0; i < small.raw_data().size(); ++i)
            CHECK(small.raw_data()[i] == big.raw_data()[i]);
    }
    SUBCASE("dropping the last coordinate projects to the lower-dimensional net") {
        NetPoints p5 = sobol_points(7, 5, t);
        NetPoints p4 = sobol_points(7, 4, t);
        for (std::size_t n = 0; n < p5.count(); ++n)
            for (unsigned j = 0; j < 4; ++j) CHECK(p5.raw(n, j) == p4.raw(n, j));
    }
    SUBCASE("coordinates are dyadic k/2^m strictly below 1") {
        const unsigned m = 10;
        NetPoints p = sobol_points(m, 5, t);
        const std::uint64_t low_mask = (std::uint64_t{1} << (64 - m)) - 1;
        for (std::size_t n = 0; n < p.count(); ++n)
            for (unsigned j = 0; j < 5; ++j) {
                CHECK((p.raw(n, j) & low_mask) == 0);
                CHECK(p.coord(n, j) < 1.0);
            }
    }
}

TEST_CASE("count_in_interval") {
    const DirectionNumberTable& t = builtin_direction_table();
    SUBCASE("van der Corput quarter") {
        NetPoints p = sobol_points(2, 1, t); // {0, 0.5, 0.25, 0.75}
        ElementaryInterval iv{{2}, {0}};     // [0, 0.25)
        CHECK(count_in_interval(p, iv) == 1);
    }
    SUBCASE("order zero counts everything") {
        NetPoints p = sobol_points(5, 3, t);
        ElementaryInterval iv{{0, 0, 0}, {0, 0, 0}};
        CHECK(count_in_interval(p, iv) == 32);
    }
    SUBCASE("dimension mismatch") {
        NetPoints p = sobol_points(3, 2, t);
        ElementaryInterval iv{{1}, {0}};
        CHECK_THROWS_AS(count_in_interval(p, iv), DimensionError);
    }
    SUBCASE("matches a floating-point membership oracle on random dyadic boxes") {
        NetPoints p = sobol_points(9, 3, t);
        std::vector<double> coords = p.to_doubles();
        std::mt19937_64 gen(7);
        for (int trial = 0; trial < 200; ++trial) {
            ElementaryInterval iv;
            for (unsigned j = 0; j < 3; ++j) {
                unsigned d = static_cast<unsigned>(gen() % 5);
                iv.log2_width.push_back(d);
                iv.offset.push_back(d ? gen() % (std::uint64_t{1} << d) : 0);
            }
            std::int64_t oracle = 0;
            for (std::size_t n = 0; n < p.count(); ++n) {
                bool inside = true;
                for (unsigned j = 0; j < 3; ++j) {
                    double width = std::ldexp(1.0, -static_cast<int>(iv.log2_width[j]));
                    double lo = static_cast<double>(iv.offset[j]) * width;
                    double x = coords[n * 3 + j];
                    if (!(x >= lo && x < lo + width)) {
                        inside = false;
                        break;
                    }
                }
                oracle += inside;
            }
            CHECK(count_in_interval(p, iv) == oracle);
        }
    }
}

TEST_CASE("fairness audit") {
    const DirectionNumberTable& t = builtin_direction_table();
    SUBCASE("van der Corput nets have t = 0") {
        for (unsigned m = 1; m <= 10; ++m)
            CHECK(audit_t_value(sobol_points(m, 1, t), m, 1, m) == 0);
    }
    SUBCASE("two-dimensional Sobol net at m = 8 has t = 0") {
        CHECK(audit_t_value(sobol_points(8, 2, t), 8, 2, 8) == 0);
    }
    SUBCASE("k_max caps the search") {
        NetPoints p = sobol_points(8, 2, t);
        CHECK(audit_t_value(p, 8, 2, 3) == 5); // only orders <= 3 examined
    }
    SUBCASE("fairness means exact counts") {
        NetPoints p = sobol_points(8, 2, t);
        CHECK(is_fair_at_order(p, 8, 8));
        ElementaryInterval iv{{5, 3}, {17, 4}};
        CHECK(count_in_interval(p, iv) == 1); // 2^{8-8}
    }
    SUBCASE("five-dimensional regression value") {
        // Empirical t of the first 2^10 Sobol points in dimension 5; frozen
        // after the first audit run.
        NetPoints p = sobol_points(10, 5, t);
        unsigned tv = audit_t_value(p, 10, 5, 10);
        CHECK(tv == 3u);
        CHECK(is_fair_at_order(p, 10, 10 - tv));
    }
}
