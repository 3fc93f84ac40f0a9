#include <algorithm>
#include <cmath>
#include <cstring>
#include <vector>

#include "doctest.h"
#include "uavrelay/rng.hpp"
#include "uavrelay/solver.hpp"

using namespace uavrelay;

namespace {

// Independent oracle: enumerates basic solutions (n active hyperplanes drawn
// from rows and finite bounds), keeps the feasible ones, returns the best
// objective. Exponential, usable only at toy sizes.
double vertex_enumeration_oracle(const LinearProgram& lp) {
    const int n = lp.num_vars();
    struct Plane {
        std::vector<double> a;
        double b;
        bool mandatory;
    };
    std::vector<Plane> planes;
    for (const auto& row : lp.rows) {
        std::vector<double> dense(n, 0.0);
        for (const auto& [j, v] : row.terms) dense[j] = v;
        planes.push_back({dense, row.rhs, row.equality});
    }
    for (int j = 0; j < n; ++j) {
        if (std::isfinite(lp.lower[j])) {
            std::vector<double> dense(n, 0.0);
            dense[j] = 1.0;
            planes.push_back({dense, lp.lower[j], false});
        }
        if (std::isfinite(lp.upper[j])) {
            std::vector<double> dense(n, 0.0);
            dense[j] = 1.0;
            planes.push_back({dense, lp.upper[j], false});
        }
    }

    auto feasible = [&](const std::vector<double>& x) {
        for (const auto& row : lp.rows) {
            double ax = 0.0;
            for (const auto& [j, v] : row.terms) ax += v * x[j];
            if (row.equality ? std::abs(ax - row.rhs) > 1e-7 : ax > row.rhs + 1e-7) return false;
        }
        for (int j = 0; j < n; ++j) {
            if (x[j] < lp.lower[j] - 1e-7 || x[j] > lp.upper[j] + 1e-7) return false;
        }
        return true;
    };

    double best = -kInf;
    const int p = static_cast<int>(planes.size());
    std::vector<int> pick(n);
    auto solve_active = [&](const std::vector<int>& active) {
        std::vector<double> mat(static_cast<std::size_t>(n) * (n + 1), 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) mat[i * (n + 1) + j] = planes[active[i]].a[j];
            mat[i * (n + 1) + n] = planes[active[i]].b;
        }
        for (int col = 0; col < n; ++col) {
            int piv = -1;
            double best_abs = 1e-10;
            for (int i = col; i < n; ++i) {
                if (std::abs(mat[i * (n + 1) + col]) > best_abs) {
                    best_abs = std::abs(mat[i * (n + 1) + col]);
                    piv = i;
                }
            }
            if (piv < 0) return;  // singular active set
            for (int j = 0; j <= n; ++j) std::swap(mat[piv * (n + 1) + j], mat[col * (n + 1) + j]);
            for (int i = 0; i < n; ++i) {
                if (i == col) continue;
                const double f = mat[i * (n + 1) + col] / mat[col * (n + 1) + col];
                for (int j = 0; j <= n; ++j) mat[i * (n + 1) + j] -= f * mat[col * (n + 1) + j];
            }
        }
        std::vector<double> x(n);
        for (int i = 0; i < n; ++i) x[i] = mat[i * (n + 1) + n] / mat[i * (n + 1) + i];
        if (!feasible(x)) return;
        double value = 0.0;
        for (int j = 0; j < n; ++j) value += lp.objective[j] * x[j];
        best = std::max(best, value);
    };

    std::vector<int> mandatory;
    for (int i = 0; i < p; ++i)
        if (planes[i].mandatory) mandatory.push_back(i);

    std::vector<int> active;
    auto recurse = [&](auto&& self, int start) -> void {
        if (static_cast<int>(active.size()) == n) {
            solve_active(active);
            return;
        }
        for (int i = start; i < p; ++i) {
            if (planes[i].mandatory) continue;  // already included
            active.push_back(i);
            self(self, i + 1);
            active.pop_back();
        }
    };
    active = mandatory;
    if (static_cast<int>(active.size()) <= n) recurse(recurse, 0);
    return best;
}

LinearProgram random_bounded_lp(Rng& rng) {
    LinearProgram lp;
    const int n = 2 + static_cast<int>(rng.uniform_int(5));  // 2..6
    const int m = 1 + static_cast<int>(rng.uniform_int(8));  // 1..8
    std::vector<double> interior(n);
    for (int j = 0; j < n; ++j) {
        const double hi = 0.5 + 2.5 * rng.uniform01();
        lp.add_var(0.0, hi, 2.0 * rng.uniform01() - 1.0);
        interior[j] = hi * rng.uniform01();
    }
    for (int i = 0; i < m; ++i) {
        SparseRow terms;
        double ax = 0.0;
        for (int j = 0; j < n; ++j) {
            const double a = 2.0 * rng.uniform01() - 1.0;
            terms.emplace_back(j, a);
            ax += a * interior[j];
        }
        lp.add_row(std::move(terms), ax + rng.uniform01());
    }
    return lp;
}

}  // namespace

TEST_CASE("simple bounded maximization") {
    LinearProgram lp;
    lp.add_var(0.0, kInf, 1.0);
    lp.add_row({{0, 1.0}}, 5.0);
    const SolveResult res = solve_lp(lp);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.x[0] == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(res.objective_value == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(res.kkt_residual <= 1e-7);
}

TEST_CASE("degenerate optima still give the unique objective") {
    LinearProgram lp;
    lp.add_var(0.0, kInf, 1.0);
    lp.add_var(0.0, kInf, 1.0);
    lp.add_row({{0, 1.0}, {1, 1.0}}, 1.0);
    const SolveResult res = solve_lp(lp);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.objective_value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("equality rows and free variables") {
    // max -x + y  s.t.  x + y = 2,  y <= 1.5, x free
    LinearProgram lp;
    lp.add_var(-kInf, kInf, -1.0);
    lp.add_var(0.0, 1.5, 1.0);
    lp.add_row({{0, 1.0}, {1, 1.0}}, 2.0, /*equality=*/true);
    const SolveResult res = solve_lp(lp);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.x[1] == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(res.x[0] == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(res.objective_value == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("random LPs match the vertex-enumeration oracle") {
    Rng rng(2024);
    int solved = 0;
    while (solved < 10) {
        const LinearProgram lp = random_bounded_lp(rng);
        const double oracle = vertex_enumeration_oracle(lp);
        REQUIRE(std::isfinite(oracle));  // generator guarantees feasibility
        const SolveResult res = solve_lp(lp);
        REQUIRE(res.status == SolveStatus::Optimal);
        CHECK(res.objective_value == doctest::Approx(oracle).epsilon(1e-7).scale(1.0));
        ++solved;
    }
}

TEST_CASE("weak duality holds against hand-built dual bounds") {
    // max 2x + 3y s.t. x + y <= 4, x + 3y <= 6, x,y >= 0
    // dual-feasible y = (1.5, 0.5) certifies 4*1.5 + 6*0.5 = 9
    LinearProgram lp;
    lp.add_var(0.0, kInf, 2.0);
    lp.add_var(0.0, kInf, 3.0);
    lp.add_row({{0, 1.0}, {1, 1.0}}, 4.0);
    lp.add_row({{0, 1.0}, {1, 3.0}}, 6.0);
    const SolveResult res = solve_lp(lp);
    REQUIRE(res.status == SolveStatus::Optimal);
    CHECK(res.objective_value <= 9.0 + 1e-9);
    CHECK(res.objective_value == doctest::Approx(9.0).epsilon(1e-9));  // this dual is optimal
}

TEST_CASE("infeasible and iteration-limited problems are flagged") {
    SUBCASE("conflicting rows") {
        LinearProgram lp;
        lp.add_var(2.0, kInf, 1.0);
        lp.add_row({{0, 1.0}}, 1.0);
        CHECK(solve_lp(lp).status == SolveStatus::Infeasible);
    }
    SUBCASE("conflicting equality") {
        LinearProgram lp;
        lp.add_var(0.0, 1.0, 1.0);
        lp.add_var(0.0, 1.0, 1.0);
        lp.add_row({{0, 1.0}, {1, 1.0}}, 3.0, /*equality=*/true);
        CHECK(solve_lp(lp).status == SolveStatus::Infeasible);
    }
    SUBCASE("unbounded ray") {
        LinearProgram lp;
        lp.add_var(0.0, kInf, 1.0);
        CHECK(solve_lp(lp).status == SolveStatus::Unbounded);
    }
    SUBCASE("pivot budget") {
        Rng rng(7);
        const LinearProgram lp = random_bounded_lp(rng);
        LpOptions options;
        options.max_pivots = 1;
        const SolveResult res = solve_lp(lp, options);
        CHECK((res.status == SolveStatus::IterationLimit || res.status == SolveStatus::Optimal));
    }
}

TEST_CASE("identical inputs give bitwise-identical results") {
    Rng rng(31415);
    const LinearProgram lp = random_bounded_lp(rng);
    const SolveResult a = solve_lp(lp);
    const SolveResult b = solve_lp(lp);
    REQUIRE(a.status == b.status);
    REQUIRE(a.x.size() == b.x.size());
    CHECK(std::memcmp(a.x.data(), b.x.data(), a.x.size() * sizeof(double)) == 0);
    CHECK(std::memcmp(&a.objective_value, &b.objective_value, sizeof(double)) == 0);
}
