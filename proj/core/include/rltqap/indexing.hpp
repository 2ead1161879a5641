#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace rltqap {

/// Dense ranks for "the r-th index different from a fixed set", the scheme the
/// cost tensors use for their trailing dimensions. All indices are 0-based.
namespace ranks {

/// Rank of x within {0..n-1} \ {a}, counting upwards.
inline int rank1(int x, int a) { return x - (x > a ? 1 : 0); }

/// Inverse of rank1.
inline int unrank1(int r, int a) { return r + (r >= a ? 1 : 0); }

/// Rank of x within {0..n-1} \ {a, b}, a != b.
inline int rank2(int x, int a, int b) { return x - (x > a ? 1 : 0) - (x > b ? 1 : 0); }

inline int unrank2(int r, int a, int b) {
    int lo = a < b ? a : b;
    int hi = a < b ? b : a;
    int x = r;
    if (x >= lo) ++x;
    if (x >= hi) ++x;
    return x;
}

/// Rank of x within {0..n-1} \ {a, b, c}, pairwise distinct.
inline int rank3(int x, int a, int b, int c) {
    return x - (x > a ? 1 : 0) - (x > b ? 1 : 0) - (x > c ? 1 : 0);
}

inline int unrank3(int r, int a, int b, int c) {
    int s[3] = {a, b, c};
    if (s[0] > s[1]) std::swap(s[0], s[1]);
    if (s[1] > s[2]) std::swap(s[1], s[2]);
    if (s[0] > s[1]) std::swap(s[0], s[1]);
    int x = r;
    for (int v : s)
        if (x >= v) ++x;
    return x;
}

}  // namespace ranks

/// Entry counts of the dense tensors at size n.
struct TensorCounts {
    std::uint64_t b = 0;  // n^2
    std::uint64_t c = 0;  // n^2 (n-1)^2
    std::uint64_t d = 0;  // n^2 (n-1)^2 (n-2)^2
    std::uint64_t e = 0;  // n^2 (n-1)^2 (n-2)^2 (n-3)^2

    std::uint64_t total(int level) const {
        return b + c + (level >= 2 ? d : 0) + (level >= 3 ? e : 0);
    }
};

inline TensorCounts tensor_counts(int n) {
    auto sq = [](std::uint64_t x) { return x * x; };
    TensorCounts t;
    t.b = sq(n);
    t.c = t.b * sq(n - 1);
    t.d = t.c * sq(n - 2);
    t.e = t.d * sq(n - 3);
    return t;
}

/// An ordered coefficient tuple, as (object, location) pairs. Arity 1 = B,
/// 2 = C, 3 = D, 4 = E.
struct Tuple {
    std::array<std::uint8_t, 8> v{};  // o0,l0,o1,l1,...
    int arity = 0;

    bool operator==(const Tuple&) const = default;
    auto operator<=>(const Tuple&) const = default;

    std::uint64_t packed() const {
        std::uint64_t key = 0;
        for (int t = 0; t < 2 * arity; ++t) key = key << 8 | v[t];
        return key;
    }
};

/// All orderings of the tuple's pairs (its complementary class, including the
/// input), sorted lexicographically. Cardinality 2, 6 or 24.
/// Throws InvalidTuple when objects or locations repeat or arity is not 2-4.
std::vector<Tuple> complementaries(const Tuple& t);

/// Permutations of {0..k-1} in lexicographic order, precomputed for k = 2,3,4.
const std::vector<std::array<int, 4>>& pair_orderings(int arity);

}  // namespace rltqap
