#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "rltqap/errors.hpp"
#include "rltqap/instance.hpp"

using namespace rltqap;

namespace {
const std::string kDataDir = RLTQAP_DATA_DIR;

Instance tiny2() {
    return parse_qaplib(std::string("2  0 3  3 0  0 5  5 0"));
}

Permutation perm_of(std::initializer_list<int> v) {
    Permutation p;
    p.assign = v;
    return p;
}
}  // namespace

TEST_SUITE("instance") {

TEST_CASE("parses the smallest legal instance") {
    auto inst = tiny2();
    CHECK(inst.n == 2);
    CHECK(inst.flow_at(0, 1) == 3);
    CHECK(inst.dist_at(0, 1) == 5);
}

TEST_CASE("tolerates trailing whitespace and newlines") {
    auto inst = parse_qaplib(std::string("2\n\n0 3\n3 0\n\n0 5\n5 0\n\n  \n"));
    CHECK(inst.n == 2);
}

TEST_CASE("rejects malformed input") {
    CHECK_THROWS_AS(parse_qaplib(std::string("3  0 1")), TokenCountMismatch);
    CHECK_THROWS_AS(parse_qaplib(std::string("2  0 3  3 0  0 5  5 0  9")), TokenCountMismatch);
    CHECK_THROWS_AS(parse_qaplib(std::string("2  0 x  3 0  0 5  5 0")), NonNumericToken);
    CHECK_THROWS_AS(parse_qaplib(std::string("2  0 -3  3 0  0 5  5 0")), NegativeEntry);
    CHECK_THROWS_AS(parse_qaplib(std::string("1  0")), NTooSmall);
    CHECK_THROWS_AS(load_qaplib_file("/no/such/file.dat"), Error);
}

TEST_CASE("swap_matrices exchanges the two matrix roles") {
    auto inst = parse_qaplib(std::string("2  0 3  3 0  0 5  5 0"), true);
    CHECK(inst.flow_at(0, 1) == 5);
    CHECK(inst.dist_at(0, 1) == 3);
}

TEST_CASE("evaluate_permutation counts both ordered pairs") {
    auto inst = tiny2();
    CHECK(evaluate_permutation(inst, Permutation::identity(2)) == 30);  // 3*5 + 3*5

    Instance zero;
    zero.n = 3;
    zero.flow.assign(9, 0.0);
    zero.dist.assign(9, 1.0);
    CHECK(evaluate_permutation(zero, Permutation::identity(3)) == 0);

    CHECK_THROWS_AS(evaluate_permutation(inst, Permutation::identity(3)), DimensionMismatch);
    CHECK_THROWS_AS(evaluate_permutation(inst, perm_of({0, 0})), DimensionMismatch);
}

TEST_CASE("bundled nug12 evaluates to 578 at its optimal permutation") {
    auto inst = load_qaplib_file(kDataDir + "/nug12.dat");
    REQUIRE(inst.n == 12);
    Permutation p = perm_of({7, 11, 3, 4, 8, 9, 1, 5, 2, 10, 6, 0});
    CHECK(evaluate_permutation(inst, p) == doctest::Approx(578).epsilon(1e-12));
}

TEST_CASE("bundled chr12c evaluates to 11156 at its optimal permutation") {
    auto inst = load_qaplib_file(kDataDir + "/chr12c.dat");
    REQUIRE(inst.n == 12);
    Permutation p = perm_of({2, 10, 3, 5, 1, 7, 0, 6, 8, 4, 9, 11});
    CHECK(evaluate_permutation(inst, p) == doctest::Approx(11156).epsilon(1e-12));
}

TEST_CASE("brute force on N=2 returns 30 via the lexicographic-first minimizer") {
    auto bf = brute_force_optimum(tiny2());
    CHECK(bf.cost == 30);
    CHECK(bf.best.assign == std::vector<int>{0, 1});
}

TEST_CASE("brute force equals direct enumeration on random N=3") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto inst = random_instance(3, seed);
        double best = 1e18;
        std::vector<int> p{0, 1, 2};
        do {
            Permutation perm;
            perm.assign = p;
            best = std::min(best, evaluate_permutation(inst, perm));
        } while (std::next_permutation(p.begin(), p.end()));
        CHECK(brute_force_optimum(inst).cost == best);
    }
}

TEST_CASE("identical rows make every permutation optimal; identity returned") {
    Instance inst;
    inst.n = 4;
    inst.flow.assign(16, 2.0);
    inst.dist.assign(16, 3.0);
    auto bf = brute_force_optimum(inst);
    CHECK(bf.best.assign == Permutation::identity(4).assign);
    CHECK(bf.cost == evaluate_permutation(inst, Permutation::identity(4)));
}

TEST_CASE("brute force rejects instances beyond the cap") {
    CHECK_THROWS_AS(brute_force_optimum(random_instance(10, 1)), InstanceTooLarge);
}

TEST_CASE("brute force lower-bounds 100 random permutations") {
    auto inst = random_instance(6, 42);
    double opt = brute_force_optimum(inst).cost;
    std::mt19937_64 rng(7);
    Permutation p = Permutation::identity(6);
    for (int t = 0; t < 100; ++t) {
        std::shuffle(p.assign.begin(), p.assign.end(), rng);
        CHECK(opt <= evaluate_permutation(inst, p));
    }
}

TEST_CASE("objective is invariant under consistent relabeling") {
    auto inst = random_instance(5, 3);
    std::mt19937_64 rng(11);
    for (int t = 0; t < 20; ++t) {
        std::vector<int> sigma{0, 1, 2, 3, 4};
        std::shuffle(sigma.begin(), sigma.end(), rng);
        Instance rel = inst;
        for (int i = 0; i < 5; ++i)
            for (int k = 0; k < 5; ++k)
                rel.flow[static_cast<size_t>(sigma[i]) * 5 + sigma[k]] = inst.flow_at(i, k);
        Permutation p = Permutation::identity(5);
        std::shuffle(p.assign.begin(), p.assign.end(), rng);
        Permutation composed;  // rel object sigma[i] sits where inst object i was
        composed.assign.resize(5);
        for (int i = 0; i < 5; ++i) composed.assign[sigma[i]] = p.assign[i];
        CHECK(evaluate_permutation(inst, p) ==
              doctest::Approx(evaluate_permutation(rel, composed)).epsilon(1e-12));
    }
}

TEST_CASE("parse -> serialize -> parse round-trips") {
    auto inst = random_instance(5, 99);
    auto again = parse_qaplib(serialize_qaplib(inst));
    CHECK(again.n == inst.n);
    CHECK(again.flow == inst.flow);
    CHECK(again.dist == inst.dist);
}

TEST_CASE("random_instance is seed-deterministic") {
    auto a = random_instance(6, 5);
    auto b = random_instance(6, 5);
    CHECK(a.flow == b.flow);
    CHECK(a.dist == b.dist);
    CHECK(a.flow != random_instance(6, 6).flow);
}

TEST_CASE("permutation validity") {
    CHECK(Permutation::identity(4).is_valid(4));
    CHECK_FALSE(perm_of({0, 0, 1}).is_valid(3));
    CHECK_FALSE(perm_of({0, 1, 3}).is_valid(3));
    CHECK_FALSE(perm_of({0, 1}).is_valid(3));
}

}  // TEST_SUITE
