#include "rltqap/indexing.hpp"

#include <algorithm>

#include "rltqap/errors.hpp"

namespace rltqap {

const std::vector<std::array<int, 4>>& pair_orderings(int arity) {
    static const auto make = [](int k) {
        std::vector<std::array<int, 4>> out;
        std::array<int, 4> idx{0, 1, 2, 3};
        std::sort(idx.begin(), idx.begin() + k);
        do {
            out.push_back(idx);
        } while (std::next_permutation(idx.begin(), idx.begin() + k));
        return out;
    };
    static const std::vector<std::array<int, 4>> k2 = make(2);
    static const std::vector<std::array<int, 4>> k3 = make(3);
    static const std::vector<std::array<int, 4>> k4 = make(4);
    switch (arity) {
        case 2: return k2;
        case 3: return k3;
        default: return k4;
    }
}

std::vector<Tuple> complementaries(const Tuple& t) {
    int k = t.arity;
    if (k < 2 || k > 4) throw InvalidTuple("complementaries require arity 2-4");
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b) {
            if (t.v[2 * a] == t.v[2 * b]) throw InvalidTuple("repeated object in tuple");
            if (t.v[2 * a + 1] == t.v[2 * b + 1]) throw InvalidTuple("repeated location in tuple");
        }
    std::vector<Tuple> out;
    out.reserve(pair_orderings(k).size());
    for (const auto& ord : pair_orderings(k)) {
        Tuple m;
        m.arity = k;
        for (int a = 0; a < k; ++a) {
            m.v[2 * a] = t.v[2 * ord[a]];
            m.v[2 * a + 1] = t.v[2 * ord[a] + 1];
        }
        out.push_back(m);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace rltqap
