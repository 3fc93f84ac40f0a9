#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "uavrelay/rng.hpp"
#include "uavrelay/solver.hpp"

using namespace uavrelay;

namespace {

double quad_row_value(const QuadRow& row, const std::vector<double>& x) {
    double v = -row.rhs;
    for (const auto& sq : row.squares) {
        double t = sq.affine_const;
        for (const auto& [j, a] : sq.affine) t += a * x[j];
        v += sq.weight * t * t;
    }
    for (const auto& [j, a] : row.linear) v += a * x[j];
    return v;
}

bool oracle_feasible(const ConvexQcp& qcp, const std::vector<double>& x) {
    for (const auto& row : qcp.quad_rows)
        if (quad_row_value(row, x) > 1e-9) return false;
    for (const auto& row : qcp.base.rows) {
        double ax = -row.rhs;
        for (const auto& [j, a] : row.terms) ax += a * x[j];
        if (row.equality ? std::abs(ax) > 1e-9 : ax > 1e-9) return false;
    }
    for (int j = 0; j < qcp.base.num_vars(); ++j)
        if (x[j] < qcp.base.lower[j] - 1e-9 || x[j] > qcp.base.upper[j] + 1e-9) return false;
    return true;
}

// Adaptive grid refinement over the (finite) bounding box. The first sweep
// keeps several well-separated candidates and each is refined independently,
// so an optimum in a thin corner of the feasible set is not lost to a single
// shrinking box. Converges well below the 1e-4 comparison tolerance.
double grid_refinement_oracle(const ConvexQcp& qcp) {
    const int n = qcp.base.num_vars();
    const int per_axis = 17;

    auto sweep = [&](const std::vector<double>& lo, const std::vector<double>& hi, double& best,
                     std::vector<double>& best_x) {
        std::vector<int> idx(n, 0);
        std::vector<double> x(n);
        while (true) {
            for (int j = 0; j < n; ++j)
                x[j] = lo[j] + (hi[j] - lo[j]) * idx[j] / double(per_axis - 1);
            if (oracle_feasible(qcp, x)) {
                double value = 0.0;
                for (int j = 0; j < n; ++j) value += qcp.base.objective[j] * x[j];
                if (value > best) {
                    best = value;
                    best_x = x;
                }
            }
            int axis = 0;
            while (axis < n && ++idx[axis] == per_axis) idx[axis++] = 0;
            if (axis == n) break;
        }
    };

    // round 1: collect candidate cells ranked by objective value
    std::vector<std::pair<double, std::vector<double>>> candidates;
    {
        std::vector<int> idx(n, 0);
        std::vector<double> x(n);
        while (true) {
            for (int j = 0; j < n; ++j)
                x[j] = qcp.base.lower[j] +
                       (qcp.base.upper[j] - qcp.base.lower[j]) * idx[j] / double(per_axis - 1);
            if (oracle_feasible(qcp, x)) {
                double value = 0.0;
                for (int j = 0; j < n; ++j) value += qcp.base.objective[j] * x[j];
                candidates.emplace_back(value, x);
            }
            int axis = 0;
            while (axis < n && ++idx[axis] == per_axis) idx[axis++] = 0;
            if (axis == n) break;
        }
    }
    if (candidates.empty()) return -kInf;
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    candidates.resize(std::min<std::size_t>(candidates.size(), 8));

    double best = -kInf;
    for (const auto& [seed_value, seed_x] : candidates) {
        double local = seed_value;
        std::vector<double> local_x = seed_x;
        std::vector<double> lo(n), hi(n);
        for (int round = 0; round < 12; ++round) {
            const double shrink = std::pow(0.35, round + 1);
            for (int j = 0; j < n; ++j) {
                const double half =
                    0.5 * (qcp.base.upper[j] - qcp.base.lower[j]) * shrink + 1e-9;
                lo[j] = std::max(qcp.base.lower[j], local_x[j] - half);
                hi[j] = std::min(qcp.base.upper[j], local_x[j] + half);
            }
            sweep(lo, hi, local, local_x);
        }
        best = std::max(best, local);
    }
    return best;
}

ConvexQcp random_qcp(Rng& rng, std::vector<double>& interior) {
    ConvexQcp qcp;
    const int n = 2 + static_cast<int>(rng.uniform_int(2));  // 2..3
    interior.resize(n);
    for (int j = 0; j < n; ++j) {
        qcp.base.add_var(-2.0, 2.0, 2.0 * rng.uniform01() - 1.0);
        interior[j] = 2.0 * rng.uniform01() - 1.0;
    }
    const int rows = 2 + static_cast<int>(rng.uniform_int(3));  // 2..4
    for (int i = 0; i < rows; ++i) {
        QuadRow row;
        const int squares = 1 + static_cast<int>(rng.uniform_int(2));
        for (int k = 0; k < squares; ++k) {
            QuadRow::SquaredTerm sq;
            sq.weight = 0.2 + 1.3 * rng.uniform01();
            for (int j = 0; j < n; ++j)
                sq.affine.emplace_back(j, 2.0 * rng.uniform01() - 1.0);
            sq.affine_const = rng.uniform01() - 0.5;
            row.squares.push_back(std::move(sq));
        }
        for (int j = 0; j < n; ++j)
            if (rng.uniform01() < 0.4) row.linear.emplace_back(j, rng.uniform01() - 0.5);
        row.rhs = 0.0;
        const double at_interior = quad_row_value(row, interior);
        row.rhs = at_interior + 0.3 + rng.uniform01();  // fat interior
        qcp.quad_rows.push_back(std::move(row));
    }
    return qcp;
}

}  // namespace

TEST_CASE("epigraph variable is forced onto the square") {
    // max -t  s.t.  x^2 <= t,  x = 3
    ConvexQcp qcp;
    qcp.base.add_var(-kInf, kInf, 0.0);   // x
    qcp.base.add_var(-kInf, kInf, -1.0);  // t
    QuadRow row;
    row.squares.push_back({1.0, {{0, 1.0}}, 0.0});
    row.linear = {{1, -1.0}};
    row.rhs = 0.0;
    qcp.quad_rows.push_back(row);
    qcp.base.add_row({{0, 1.0}}, 3.0, /*equality=*/true);

    const std::vector<double> warm{0.0, 1.0};
    const SolveResult res = solve_qcp(qcp, warm);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.x[0] == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(res.x[1] == doctest::Approx(9.0).epsilon(1e-5));
    CHECK(res.kkt_residual <= 1e-7);
}

TEST_CASE("linear objective over the unit ball hits the supporting point") {
    ConvexQcp qcp;
    qcp.base.add_var(-kInf, kInf, 3.0);
    qcp.base.add_var(-kInf, kInf, 4.0);
    QuadRow ball;
    ball.squares.push_back({1.0, {{0, 1.0}}, 0.0});
    ball.squares.push_back({1.0, {{1, 1.0}}, 0.0});
    ball.rhs = 1.0;
    qcp.quad_rows.push_back(ball);

    const std::vector<double> warm{0.0, 0.0};
    const SolveResult res = solve_qcp(qcp, warm);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.x[0] == doctest::Approx(0.6).epsilon(1e-5));
    CHECK(res.x[1] == doctest::Approx(0.8).epsilon(1e-5));
    CHECK(res.objective_value == doctest::Approx(5.0).epsilon(1e-6));
}

TEST_CASE("random convex programs match the grid-refinement oracle") {
    Rng rng(777);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<double> interior;
        const ConvexQcp qcp = random_qcp(rng, interior);
        const double oracle = grid_refinement_oracle(qcp);
        REQUIRE(std::isfinite(oracle));
        const SolveResult res = solve_qcp(qcp, interior);
        REQUIRE(res.status == SolveStatus::Optimal);
        CHECK(res.objective_value == doctest::Approx(oracle).epsilon(1e-4).scale(1.0));

        // every quadratic constraint satisfied at the reported solution
        for (const auto& row : qcp.quad_rows) CHECK(quad_row_value(row, res.x) <= 1e-8);
        for (int j = 0; j < qcp.base.num_vars(); ++j) {
            CHECK(res.x[j] >= qcp.base.lower[j] - 1e-8);
            CHECK(res.x[j] <= qcp.base.upper[j] + 1e-8);
        }
    }
}

TEST_CASE("phase 1 recovers an interior point or proves infeasibility") {
    SUBCASE("feasible without a warm start") {
        ConvexQcp qcp;
        qcp.base.add_var(-5.0, 5.0, 1.0);
        QuadRow row;
        row.squares.push_back({1.0, {{0, 1.0}}, -2.0});  // (x-2)^2 <= 1
        row.rhs = 1.0;
        qcp.quad_rows.push_back(row);
        const SolveResult res = solve_qcp(qcp, {});
        REQUIRE(res.status == SolveStatus::Optimal);
        CHECK(res.x[0] == doctest::Approx(3.0).epsilon(1e-4));
    }
    SUBCASE("empty feasible set") {
        ConvexQcp qcp;
        qcp.base.add_var(-5.0, 5.0, 1.0);
        QuadRow row;
        row.squares.push_back({1.0, {{0, 1.0}}, 0.0});  // x^2 <= -1
        row.rhs = -1.0;
        qcp.quad_rows.push_back(row);
        CHECK(solve_qcp(qcp, {}).status == SolveStatus::Infeasible);
    }
}

TEST_CASE("identical inputs give bitwise-identical results") {
    Rng rng(12);
    std::vector<double> interior;
    const ConvexQcp qcp = random_qcp(rng, interior);
    const SolveResult a = solve_qcp(qcp, interior);
    const SolveResult b = solve_qcp(qcp, interior);
    REQUIRE(a.status == b.status);
    REQUIRE(a.x.size() == b.x.size());
    CHECK(std::memcmp(a.x.data(), b.x.data(), a.x.size() * sizeof(double)) == 0);
}
