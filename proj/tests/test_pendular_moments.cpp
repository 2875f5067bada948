#include "pendular/error.hpp"
#include "pendular/pendular_moments.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

using namespace pendular;

namespace {

const std::vector<MomentSet>& scan() {
    static const std::vector<MomentSet> rows = [] {
        const std::vector<double> grid = uniform_grid(0.0, 12.0, 0.01);
        return moment_scan(grid);
    }();
    return rows;
}

}  // namespace

TEST_CASE("field-free moments vanish") {
    const MomentSet m = moments(0.0);
    CHECK(m.c0 == 0.0);
    CHECK(m.c1 == 0.0);
    CHECK(m.cx == 0.0);
    CHECK(m.delta_e() == 0.0);
    CHECK(m.e0 == 2.0);
}

TEST_CASE("perturbative gap is 0.15 x^2") {
    for (double x : {0.02, 0.05, 0.1}) {
        const double gap = moments(x).delta_e();
        CHECK(std::abs(gap / (0.15 * x * x) - 1.0) <= 0.02);
    }
}

TEST_CASE("moment bounds and signs over the full grid") {
    const auto& rows = scan();
    REQUIRE(rows.size() == 1201);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const MomentSet& m = rows[i];
        INFO("x = ", m.x);
        CHECK(std::abs(m.c0) <= 1.0);
        CHECK(std::abs(m.c1) <= 1.0);
        CHECK(std::abs(m.cx) <= 1.0);
        CHECK(m.delta_e() >= 0.0);
        CHECK(m.cx > 0.0);
        CHECK(m.c0 - m.c1 > 0.0);
        CHECK(m.c0 > rows[i - 1].c0);
    }
}

TEST_CASE("C1 has a single interior zero near 4.9") {
    const std::vector<double> zeros = c1_zero_crossings();
    REQUIRE(zeros.size() == 1);
    CHECK(std::abs(zeros[0] - 4.9) <= 0.2);
    CHECK(std::abs(moments(zeros[0]).c1) <= 1e-9);
}

TEST_CASE("gap reaches about 3.7 at the right edge") {
    const auto& rows = scan();
    const auto it = std::max_element(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
        return a.delta_e() < b.delta_e();
    });
    CHECK(it->x == doctest::Approx(12.0));
    CHECK(std::abs(it->delta_e() - 3.7) <= 0.1);
}

TEST_CASE("moments converge between j_max 20 and 30") {
    for (double x = 0.0; x <= 12.0; x += 0.25) {
        const MomentSet a = moments(x, 20);
        const MomentSet b = moments(x, 30);
        CHECK(std::abs(a.e0 - b.e0) <= 1e-10);
        CHECK(std::abs(a.e1 - b.e1) <= 1e-10);
        CHECK(std::abs(a.c0 - b.c0) <= 1e-10);
        CHECK(std::abs(a.c1 - b.c1) <= 1e-10);
        CHECK(std::abs(a.cx - b.cx) <= 1e-10);
    }
}

TEST_CASE("the M = -1 partner gives the same moments") {
    for (double x : {0.5, 3.0, 6.1, 11.0}) {
        const MomentSet plus = moments(pseudo_spin_states(x, kDefaultJMax, 1));
        const MomentSet minus = moments(pseudo_spin_states(x, kDefaultJMax, -1));
        CHECK(plus.e0 == minus.e0);
        CHECK(plus.c0 == doctest::Approx(minus.c0).epsilon(1e-14));
        CHECK(std::abs(plus.cx) == doctest::Approx(std::abs(minus.cx)).epsilon(1e-12));
    }
    CHECK_THROWS_AS((void)pseudo_spin_states(1.0, kDefaultJMax, 0), InvalidArgument);
}

TEST_CASE("parallel scan is identical to serial evaluation") {
    const std::vector<double> grid = uniform_grid(0.0, 3.0, 0.1);
    const auto serial = moment_scan(grid, kDefaultJMax, 1);
    const auto parallel = moment_scan(grid, kDefaultJMax, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].x == grid[i]);
        CHECK(serial[i].c0 == parallel[i].c0);
        CHECK(serial[i].cx == parallel[i].cx);
    }
}

TEST_CASE("Stark map rows") {
    const std::vector<double> grid{0.0, 6.0, 12.0};
    const std::vector<int> ms{0, 1};
    const auto rows = stark_map(grid, ms, 3);
    REQUIRE(rows.size() == 18);
    CHECK(rows[0].x == 0.0);
    CHECK(rows[0].m == 0);
    CHECK(rows[0].j_tilde == 0);
    CHECK(rows[0].energy == 0.0);
    CHECK(rows[1].energy == 2.0);
    CHECK(rows[2].energy == 6.0);
    CHECK(rows[3].m == 1);
    CHECK(rows[3].j_tilde == 1);
    CHECK(rows[3].energy == 2.0);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(rows[i - 1].x <= rows[i].x);
    }

    // E(1~,1) decreases with x.
    const std::vector<double> fine = uniform_grid(0.0, 12.0, 0.05);
    const std::vector<int> m1{1};
    const auto lowest = stark_map(fine, m1, 1);
    for (std::size_t i = 1; i < lowest.size(); ++i) {
        CHECK(lowest[i].energy < lowest[i - 1].energy);
    }

    const std::vector<double> empty;
    CHECK_THROWS_AS((void)stark_map(empty, ms, 3), InvalidArgument);
    CHECK_THROWS_AS((void)stark_map(grid, ms, 0), InvalidArgument);
}

TEST_CASE("coefficient maps") {
    const std::vector<double> grid = uniform_grid(0.0, 12.0, 0.05);
    const auto down = coefficient_map(grid, PseudoSpin::down);
    const auto up = coefficient_map(grid, PseudoSpin::up);

    CHECK(down[0].x == 0.0);
    CHECK(down[0].j == 1);
    CHECK(down[0].coefficient == 1.0);
    CHECK(down[1].coefficient == 0.0);

    for (const auto* rows : {&down, &up}) {
        double norm = 0.0;
        double x = rows->front().x;
        for (const CoefficientRow& r : *rows) {
            if (r.x != x) {
                CHECK(std::abs(norm - 1.0) <= 1e-12);
                norm = 0.0;
                x = r.x;
            }
            norm += r.coefficient * r.coefficient;
        }
        CHECK(std::abs(norm - 1.0) <= 1e-12);
    }

    // First x where |c(Y00)| exceeds |c(Y10)| for the up state.
    double overtake = -1.0;
    for (std::size_t i = 0; i + 1 < up.size(); ++i) {
        if (up[i].j == 0 && up[i + 1].j == 1 &&
            std::abs(up[i].coefficient) > std::abs(up[i + 1].coefficient)) {
            overtake = up[i].x;
            break;
        }
    }
    CHECK(std::abs(overtake - 4.5) <= 0.3);
}

TEST_CASE("grid helpers") {
    const auto g = uniform_grid(0.0, 1.0, 0.25);
    REQUIRE(g.size() == 5);
    CHECK(g.back() == 1.0);
    CHECK_THROWS_AS((void)uniform_grid(0.0, 1.0, 0.0), InvalidArgument);
    CHECK_THROWS_AS((void)uniform_grid(0.0, 1.0, -0.1), InvalidArgument);
    const std::vector<double> bad{0.0, 0.5, 0.5};
    CHECK_THROWS_AS(validate_grid(bad, "x grid"), InvalidArgument);
    const std::vector<double> negative{-1.0, 0.0};
    CHECK_THROWS_AS(validate_grid(negative, "x grid"), InvalidArgument);

    // Cubic interpolation is exact for cubic data.
    std::vector<double> xs;
    std::vector<double> ys;
    for (double x = 0.0; x <= 3.0; x += 0.5) {
        xs.push_back(x);
        ys.push_back((x - 1.3) * (x + 2.0) * (x - 7.0));
    }
    const auto zeros = locate_zero_crossings(xs, ys);
    REQUIRE(zeros.size() == 1);
    CHECK(zeros[0] == doctest::Approx(1.3).epsilon(1e-12));
}
