#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "rltqap/errors.hpp"
#include "rltqap/indexing.hpp"
#include "rltqap/instance.hpp"
#include "rltqap/partition.hpp"

namespace rltqap {

/// Per-tensor entry counts and byte sizes for a given instance size.
struct MemoryEstimate {
    int n = 0;
    int level = 1;
    int precision_bits = 64;
    TensorCounts counts;

    std::uint64_t bytes(std::uint64_t entries) const { return entries * (precision_bits / 8); }
    std::uint64_t total_bytes() const { return bytes(counts.total(level)); }
};

inline MemoryEstimate estimate_memory(int n, int level, int precision_bits) {
    MemoryEstimate est;
    est.n = n;
    est.level = level;
    est.precision_bits = precision_bits;
    est.counts = tensor_counts(n);
    return est;
}

/// The modified-cost model: scalar LB plus dense tensors B, C, D, E.
/// A state holds the full (replicated) B and the C/D/E blocks of the pairs
/// owned by `worker` under `partition`. Layout is submatrix-major: within a
/// leading pair (i,j), all of C is one (n-1)x(n-1) matrix over the ranks of
/// (k,n); D groups a (n-2)x(n-2) matrix per (k,n); E a (n-3)x(n-3) matrix per
/// (k,n,p,q). Concentration therefore streams over contiguous memory.
template <typename Scalar>
struct CostState {
    int n = 0;
    int level = 1;
    double lb = 0.0;
    int worker = 0;
    PartitionMap partition;
    std::vector<std::pair<int, int>> pairs;  // slot -> (i,j)
    std::vector<int> slot_of;                // (i,j) -> slot, -1 when not owned

    std::vector<Scalar> b;  // n*n, replicated across workers
    std::vector<Scalar> c;
    std::vector<Scalar> d;
    std::vector<Scalar> e;

    std::size_t c_block = 0;  // (n-1)^2
    std::size_t d_sub = 0;    // (n-2)^2
    std::size_t d_block = 0;  // (n-1)^2 (n-2)^2
    std::size_t e_sub = 0;    // (n-3)^2
    std::size_t e_block = 0;  // (n-1)^2 (n-2)^2 (n-3)^2

    static constexpr int precision_bits() { return sizeof(Scalar) * 8; }
    /// Non-negativity tolerance matching the storage width.
    static constexpr double neg_eps() { return sizeof(Scalar) == 4 ? 1e-4 : 1e-9; }

    int slot(int i, int j) const { return slot_of[static_cast<size_t>(i) * n + j]; }
    bool owns(int i, int j) const { return slot(i, j) >= 0; }

    Scalar& b_at(int i, int j) { return b[static_cast<size_t>(i) * n + j]; }
    Scalar b_at(int i, int j) const { return b[static_cast<size_t>(i) * n + j]; }

    std::size_t c_index(int s, int kr, int nr) const {
        return s * c_block + static_cast<size_t>(kr) * (n - 1) + nr;
    }
    std::size_t d_index(int s, int kr, int nr, int pr, int qr) const {
        return s * d_block + (static_cast<size_t>(kr) * (n - 1) + nr) * d_sub +
               static_cast<size_t>(pr) * (n - 2) + qr;
    }
    std::size_t e_index(int s, int kr, int nr, int pr, int qr, int gr, int hr) const {
        return s * e_block + (static_cast<size_t>(kr) * (n - 1) + nr) * (d_sub * e_sub) +
               (static_cast<size_t>(pr) * (n - 2) + qr) * e_sub + static_cast<size_t>(gr) * (n - 3) +
               hr;
    }

    /// Value of the coefficient at an ordered tuple (full indices, arity 2-4).
    /// The leading pair must be owned.
    double coeff(const Tuple& t) const {
        int i = t.v[0], j = t.v[1];
        int s = slot(i, j);
        if (s < 0) throw MissingComplementary("tuple leading pair not owned by this worker");
        int kr = ranks::rank1(t.v[2], i), nr = ranks::rank1(t.v[3], j);
        if (t.arity == 2) return c[c_index(s, kr, nr)];
        int pr = ranks::rank2(t.v[4], i, t.v[2]), qr = ranks::rank2(t.v[5], j, t.v[3]);
        if (t.arity == 3) return d[d_index(s, kr, nr, pr, qr)];
        int gr = ranks::rank3(t.v[6], i, t.v[2], t.v[4]);
        int hr = ranks::rank3(t.v[7], j, t.v[3], t.v[5]);
        return e[e_index(s, kr, nr, pr, qr, gr, hr)];
    }

    void set_coeff(const Tuple& t, double value) {
        int i = t.v[0], j = t.v[1];
        int s = slot(i, j);
        if (s < 0) throw MissingComplementary("tuple leading pair not owned by this worker");
        int kr = ranks::rank1(t.v[2], i), nr = ranks::rank1(t.v[3], j);
        if (t.arity == 2) {
            c[c_index(s, kr, nr)] = static_cast<Scalar>(value);
            return;
        }
        int pr = ranks::rank2(t.v[4], i, t.v[2]), qr = ranks::rank2(t.v[5], j, t.v[3]);
        if (t.arity == 3) {
            d[d_index(s, kr, nr, pr, qr)] = static_cast<Scalar>(value);
            return;
        }
        int gr = ranks::rank3(t.v[6], i, t.v[2], t.v[4]);
        int hr = ranks::rank3(t.v[7], j, t.v[3], t.v[5]);
        e[e_index(s, kr, nr, pr, qr, gr, hr)] = static_cast<Scalar>(value);
    }

    /// Minimum stored coefficient across lb-adjacent tensors (monitoring).
    double min_coefficient() const {
        double m = std::numeric_limits<double>::infinity();
        auto scan = [&](const std::vector<Scalar>& t) {
            for (Scalar x : t) m = std::min(m, static_cast<double>(x));
        };
        scan(b);
        scan(c);
        scan(d);
        scan(e);
        return pairs.empty() ? 0.0 : m;
    }
};

/// Fresh state per Eq-(2) coefficient settings: LB = 0, B = 0,
/// C_ijkn = f_ik * d_jn, D = 0, E = 0. Only owned blocks are allocated.
/// memory_budget_bytes caps the *whole-problem* estimate (0 = unlimited).
template <typename Scalar>
CostState<Scalar> init_costs(const Instance& inst, int level, const PartitionMap& partition,
                             int worker = 0, std::uint64_t memory_budget_bytes = 0) {
    if (level < 1 || level > 3) throw LevelUnavailable("level must be 1, 2 or 3");
    int n = inst.n;
    if (level >= 2 && n < 3) throw LevelUnavailable("level 2 requires n >= 3");
    if (level == 3 && n < 4) throw LevelUnavailable("level 3 requires n >= 4");
    if (memory_budget_bytes) {
        auto est = estimate_memory(n, level, CostState<Scalar>::precision_bits());
        if (est.total_bytes() > memory_budget_bytes)
            throw MemoryBudgetExceeded(
                "estimated " + std::to_string(est.total_bytes()) + " bytes (E tensor alone " +
                std::to_string(est.bytes(est.counts.e)) + ") exceeds budget of " +
                std::to_string(memory_budget_bytes));
    }

    CostState<Scalar> st;
    st.n = n;
    st.level = level;
    st.worker = worker;
    st.partition = partition;
    st.slot_of.assign(static_cast<size_t>(n) * n, -1);
    st.pairs = partition.owned_pairs(worker);
    for (size_t s = 0; s < st.pairs.size(); ++s)
        st.slot_of[static_cast<size_t>(st.pairs[s].first) * n + st.pairs[s].second] =
            static_cast<int>(s);

    st.c_block = static_cast<size_t>(n - 1) * (n - 1);
    st.d_sub = static_cast<size_t>(n - 2) * (n - 2);
    st.d_block = st.c_block * st.d_sub;
    st.e_sub = static_cast<size_t>(n - 3) * (n - 3);
    st.e_block = st.d_block * st.e_sub;

    st.b.assign(static_cast<size_t>(n) * n, Scalar(0));
    st.c.assign(st.pairs.size() * st.c_block, Scalar(0));
    if (level >= 2) st.d.assign(st.pairs.size() * st.d_block, Scalar(0));
    if (level == 3) st.e.assign(st.pairs.size() * st.e_block, Scalar(0));

    for (size_t s = 0; s < st.pairs.size(); ++s) {
        auto [i, j] = st.pairs[s];
        for (int kr = 0; kr < n - 1; ++kr) {
            int k = ranks::unrank1(kr, i);
            for (int nr = 0; nr < n - 1; ++nr) {
                int l = ranks::unrank1(nr, j);
                st.c[st.c_index(static_cast<int>(s), kr, nr)] =
                    static_cast<Scalar>(inst.flow_at(i, k) * inst.dist_at(j, l));
            }
        }
    }
    return st;
}

/// Eq-(2) objective on an integer assignment: lb + B + C + D + E terms with
/// the linearization variables fixed by p. `states` must jointly cover every
/// (i,j); lb is read from the first state (it is replicated).
template <typename Scalar>
double evaluate_modified_objective(std::span<const CostState<Scalar>* const> states,
                                   const Permutation& p) {
    if (states.empty()) throw DimensionMismatch("no states");
    int n = states.front()->n;
    if (!p.is_valid(n)) throw DimensionMismatch("permutation does not match state size");
    int level = states.front()->level;
    double total = states.front()->lb;
    for (int i = 0; i < n; ++i) total += states.front()->b_at(i, p.assign[i]);

    for (const auto* stp : states) {
        const auto& st = *stp;
        for (int i = 0; i < n; ++i) {
            int j = p.assign[i];
            int s = st.slot(i, j);
            if (s < 0) continue;
            for (int k = 0; k < n; ++k) {
                if (k == i) continue;
                int l = p.assign[k];
                int kr = ranks::rank1(k, i), nr = ranks::rank1(l, j);
                total += st.c[st.c_index(s, kr, nr)];
                if (level < 2) continue;
                for (int q = 0; q < n; ++q) {
                    if (q == i || q == k) continue;
                    int r = p.assign[q];
                    int pr = ranks::rank2(q, i, k), qr = ranks::rank2(r, j, l);
                    total += st.d[st.d_index(s, kr, nr, pr, qr)];
                    if (level < 3) continue;
                    for (int g = 0; g < n; ++g) {
                        if (g == i || g == k || g == q) continue;
                        int h = p.assign[g];
                        int gr = ranks::rank3(g, i, k, q), hr = ranks::rank3(h, j, l, r);
                        total += st.e[st.e_index(s, kr, nr, pr, qr, gr, hr)];
                    }
                }
            }
        }
    }
    return total;
}

template <typename Scalar>
double evaluate_modified_objective(const CostState<Scalar>& state, const Permutation& p) {
    const CostState<Scalar>* ptr = &state;
    return evaluate_modified_objective(std::span<const CostState<Scalar>* const>(&ptr, 1), p);
}

void write_checkpoint(const std::string& path, const CostState<float>& state);
void write_checkpoint(const std::string& path, const CostState<double>& state);
/// Reads a checkpoint written with the same Scalar width (throws
/// VersionMismatch on width or version disagreement, BadMagic otherwise).
template <typename Scalar>
CostState<Scalar> read_checkpoint(const std::string& path, const Instance& inst);

}  // namespace rltqap
