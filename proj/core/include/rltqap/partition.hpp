#pragma once

#include <functional>
#include <string>
#include <vector>

namespace rltqap {

/// Ownership map from (object, location) pair sets to worker ids.
/// The pair (i,j) is the unit of load distribution: whoever owns it holds the
/// B, C, D, E blocks with that leading pair.
struct PartitionMap {
    int n = 0;
    int workers = 1;
    std::string scheme = "block-cyclic";
    std::vector<int> owner_of;  // n*n, row-major over (i,j)

    int owner(int i, int j) const { return owner_of[static_cast<size_t>(i) * n + j]; }

    std::vector<std::pair<int, int>> owned_pairs(int worker) const {
        std::vector<std::pair<int, int>> out;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (owner(i, j) == worker) out.emplace_back(i, j);
        return out;
    }
};

/// Default scheme "block-cyclic": (i,j) -> (i*n + j) mod workers.
/// "custom" accepts an explicit owner function.
PartitionMap build_partition(int n, int workers, const std::string& scheme = "block-cyclic");
PartitionMap build_partition(int n, int workers, const std::function<int(int, int)>& owner_fn);

}  // namespace rltqap
