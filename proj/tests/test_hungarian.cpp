#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rltqap/hungarian.hpp"
#include "rltqap/errors.hpp"

using namespace rltqap;

namespace {

double brute_force_min(const std::vector<double>& M, int m) {
    std::vector<int> p(m);
    for (int i = 0; i < m; ++i) p[i] = i;
    double best = 1e300;
    do {
        double s = 0;
        for (int r = 0; r < m; ++r) s += M[static_cast<size_t>(r) * m + p[r]];
        best = std::min(best, s);
    } while (std::next_permutation(p.begin(), p.end()));
    return best;
}

void check_certificate(const std::vector<double>& M, int m, const AssignmentResult& res) {
    double su = 0, sv = 0;
    for (double u : res.row_potentials) su += u;
    for (double v : res.col_potentials) sv += v;
    CHECK(su + sv == doctest::Approx(res.value).epsilon(1e-9));
    for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s)
            CHECK(M[static_cast<size_t>(r) * m + s] - res.row_potentials[r] -
                      res.col_potentials[s] >=
                  -1e-9);
    std::vector<char> used(m, 0);
    for (int r = 0; r < m; ++r) {
        int s = res.matching[r];
        REQUIRE(s >= 0);
        REQUIRE(s < m);
        CHECK(!used[s]);
        used[s] = 1;
        CHECK(std::abs(M[static_cast<size_t>(r) * m + s] - res.row_potentials[r] -
                       res.col_potentials[s]) <= 1e-9);
    }
}

}  // namespace

TEST_SUITE("hungarian") {

TEST_CASE("all-zero matrix concentrates nothing") {
    std::vector<double> M(9, 0.0);
    auto res = solve_assignment(M, 3);
    CHECK(res.value == 0);
    check_certificate(M, 3, res);
}

TEST_CASE("2x2 with tied matchings") {
    std::vector<double> M{1, 2, 3, 4};
    auto res = solve_assignment(M, 2);
    CHECK(res.value == 5);  // both matchings cost 5
    check_certificate(M, 2, res);
    auto residual = extract_residual(M, 2, res);
    int zeros_on_matching = 0;
    for (int r = 0; r < 2; ++r) {
        CHECK(residual[static_cast<size_t>(r) * 2 + res.matching[r]] <= 1e-9);
        ++zeros_on_matching;
    }
    CHECK(zeros_on_matching == 2);
    for (double x : residual) CHECK(x >= 0);
}

TEST_CASE("constant matrix is fully concentrable") {
    std::vector<double> M(16, 7.5);
    auto res = solve_assignment(M, 4);
    CHECK(res.value == doctest::Approx(30.0));
    for (double x : extract_residual(M, 4, res)) CHECK(x == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("random 6x6 equals brute force over all 720 matchings") {
    std::mt19937_64 rng(17);
    std::uniform_int_distribution<int> d(0, 50);
    for (int t = 0; t < 25; ++t) {
        std::vector<double> M(36);
        for (auto& x : M) x = d(rng);
        auto res = solve_assignment(M, 6);
        CHECK(res.value == brute_force_min(M, 6));  // exact for integers
        check_certificate(M, 6, res);
    }
}

TEST_CASE("random sizes 1..7: value, certificate, and residual invariants") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> d(0, 30);
    for (int t = 0; t < 200; ++t) {
        int m = 1 + static_cast<int>(rng() % 7);
        std::vector<double> M(static_cast<size_t>(m) * m);
        for (auto& x : M) x = d(rng);
        auto res = solve_assignment(M, m);
        CHECK(res.value == brute_force_min(M, m));
        check_certificate(M, m, res);
        auto residual = extract_residual(M, m, res);
        for (double x : residual) CHECK(x >= 0);
        std::vector<double> rmin(m, 1e300), cmin(m, 1e300);
        for (int r = 0; r < m; ++r)
            for (int s = 0; s < m; ++s) {
                rmin[r] = std::min(rmin[r], residual[static_cast<size_t>(r) * m + s]);
                cmin[s] = std::min(cmin[s], residual[static_cast<size_t>(r) * m + s]);
            }
        for (int r = 0; r < m; ++r) CHECK(rmin[r] <= 1e-9);
        for (int s = 0; s < m; ++s) CHECK(cmin[s] <= 1e-9);
    }
}

TEST_CASE("concentration conservation along every permutation") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> d(0.0, 9.0);
    std::vector<double> M(25);
    for (auto& x : M) x = d(rng);
    auto res = solve_assignment(M, 5);
    auto residual = extract_residual(M, 5, res);
    std::vector<int> p{0, 1, 2, 3, 4};
    do {
        double orig = 0, resid = 0;
        for (int r = 0; r < 5; ++r) {
            orig += M[static_cast<size_t>(r) * 5 + p[r]];
            resid += residual[static_cast<size_t>(r) * 5 + p[r]];
        }
        // Clamping can only shrink the residual, so value + residual <= original.
        CHECK(res.value + resid <= orig + 5e-9);
    } while (std::next_permutation(p.begin(), p.end()));
}

TEST_CASE("deterministic matching on repeated solves") {
    std::mt19937_64 rng(123);
    std::uniform_int_distribution<int> d(0, 3);  // small range forces ties
    for (int t = 0; t < 50; ++t) {
        std::vector<double> M(36);
        for (auto& x : M) x = d(rng);
        auto first = solve_assignment(M, 6).matching;
        HungarianSolver reused;
        reused.solve(M, 6);
        reused.solve(M, 6);
        CHECK(reused.last().matching == first);
    }
}

TEST_CASE("input validation") {
    std::vector<double> nanM{0, std::nan(""), 1, 0};
    CHECK_THROWS_AS(solve_assignment(nanM, 2), NonFiniteEntry);
    std::vector<double> negM{0, -1, 1, 0};
    CHECK_THROWS_AS(solve_assignment(negM, 2), NegativeEntry);
}

TEST_CASE("extract_residual rejects a corrupted certificate") {
    std::vector<double> M{1, 2, 3, 4};
    auto res = solve_assignment(M, 2);
    auto bad = res;
    bad.row_potentials[0] += 1.0;
    CHECK_THROWS_AS(extract_residual(M, 2, bad), PotentialMismatch);
    bad = res;
    bad.value += 0.5;
    CHECK_THROWS_AS(extract_residual(M, 2, bad), PotentialMismatch);
}

TEST_CASE("residual_inplace matches extract_residual for both widths") {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<int> d(0, 20);
    std::vector<double> M(16);
    for (auto& x : M) x = d(rng);
    HungarianSolver solver;
    solver.solve(M, 4);
    auto expected = extract_residual(M, 4, solver.last());
    auto copy64 = M;
    solver.residual_inplace(std::span<double>(copy64), 4);
    std::vector<float> copy32(M.begin(), M.end());
    solver.residual_inplace(std::span<float>(copy32), 4);
    for (int t = 0; t < 16; ++t) {
        CHECK(copy64[t] == doctest::Approx(expected[t]).epsilon(1e-12));
        CHECK(copy32[t] == doctest::Approx(expected[t]).epsilon(1e-5));
    }
}

}  // TEST_SUITE
