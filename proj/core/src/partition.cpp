#include "rltqap/partition.hpp"

#include "rltqap/errors.hpp"

namespace rltqap {

namespace {

PartitionMap make(int n, int workers, const std::string& scheme,
                  const std::function<int(int, int)>& owner_fn) {
    if (workers < 1 || workers > n * n)
        throw TooManyWorkers("workers must be in [1, n^2], got " + std::to_string(workers));
    PartitionMap map;
    map.n = n;
    map.workers = workers;
    map.scheme = scheme;
    map.owner_of.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int w = owner_fn(i, j);
            if (w < 0 || w >= workers) throw Error("partition scheme produced invalid worker id");
            map.owner_of[static_cast<size_t>(i) * n + j] = w;
        }
    return map;
}

}  // namespace

PartitionMap build_partition(int n, int workers, const std::string& scheme) {
    if (scheme != "block-cyclic") throw Error("unknown partition scheme: " + scheme);
    return make(n, workers, scheme, [&](int i, int j) { return (i * n + j) % workers; });
}

PartitionMap build_partition(int n, int workers, const std::function<int(int, int)>& owner_fn) {
    return make(n, workers, "custom", owner_fn);
}

}  // namespace rltqap
