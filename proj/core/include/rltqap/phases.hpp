#pragma once

#include <array>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "rltqap/cost_state.hpp"
#include "rltqap/hungarian.hpp"
#include "rltqap/message.hpp"

namespace rltqap {

enum class SpreadStep { BtoC, CtoD, DtoE };
enum class ConcentrateStep { EtoD, DtoC, CtoB, BtoLB };

/// Remote complementary values keyed by Tuple::packed().
using IncomingValues = std::unordered_map<std::uint64_t, double>;

/// Visits every canonical complementary class of the given arity: objects
/// strictly increasing across pairs, locations pairwise distinct. `fn`
/// receives the pairs as (object, location), already sorted by object.
template <typename Fn>
void for_each_canonical_class(int n, int arity, Fn&& fn) {
    std::array<std::pair<int, int>, 4> pairs;
    if (arity == 2) {
        for (int i = 0; i < n; ++i)
            for (int k = i + 1; k < n; ++k)
                for (int j = 0; j < n; ++j)
                    for (int l = 0; l < n; ++l) {
                        if (l == j) continue;
                        pairs = {{{i, j}, {k, l}, {}, {}}};
                        fn(pairs);
                    }
    } else if (arity == 3) {
        for (int i = 0; i < n; ++i)
            for (int k = i + 1; k < n; ++k)
                for (int p = k + 1; p < n; ++p)
                    for (int j = 0; j < n; ++j)
                        for (int l = 0; l < n; ++l) {
                            if (l == j) continue;
                            for (int q = 0; q < n; ++q) {
                                if (q == j || q == l) continue;
                                pairs = {{{i, j}, {k, l}, {p, q}, {}}};
                                fn(pairs);
                            }
                        }
    } else {
        for (int i = 0; i < n; ++i)
            for (int k = i + 1; k < n; ++k)
                for (int p = k + 1; p < n; ++p)
                    for (int g = p + 1; g < n; ++g)
                        for (int j = 0; j < n; ++j)
                            for (int l = 0; l < n; ++l) {
                                if (l == j) continue;
                                for (int q = 0; q < n; ++q) {
                                    if (q == j || q == l) continue;
                                    for (int h = 0; h < n; ++h) {
                                        if (h == j || h == l || h == q) continue;
                                        pairs = {{{i, j}, {k, l}, {p, q}, {g, h}}};
                                        fn(pairs);
                                    }
                                }
                            }
    }
}

/// Moves every coefficient one level down, split evenly over the receiving
/// rows (divide by N-1, N-2 or N-3), then zeroes the source. Owned pairs only.
template <typename Scalar>
void spread_down(CostState<Scalar>& st, SpreadStep step) {
    int n = st.n;
    switch (step) {
        case SpreadStep::BtoC: {
            double div = n - 1;
            for (size_t s = 0; s < st.pairs.size(); ++s) {
                auto [i, j] = st.pairs[s];
                Scalar& bij = st.b_at(i, j);
                if (bij != Scalar(0)) {
                    Scalar add = static_cast<Scalar>(static_cast<double>(bij) / div);
                    Scalar* block = st.c.data() + s * st.c_block;
                    for (size_t t = 0; t < st.c_block; ++t) block[t] += add;
                    bij = Scalar(0);
                }
            }
            break;
        }
        case SpreadStep::CtoD: {
            if (st.level < 2) throw LevelUnavailable("no D tensor at level " + std::to_string(st.level));
            double div = n - 2;
            for (size_t s = 0; s < st.pairs.size(); ++s) {
                for (size_t kn = 0; kn < st.c_block; ++kn) {
                    Scalar& src = st.c[s * st.c_block + kn];
                    if (src == Scalar(0)) continue;
                    Scalar add = static_cast<Scalar>(static_cast<double>(src) / div);
                    Scalar* block = st.d.data() + s * st.d_block + kn * st.d_sub;
                    for (size_t t = 0; t < st.d_sub; ++t) block[t] += add;
                    src = Scalar(0);
                }
            }
            break;
        }
        case SpreadStep::DtoE: {
            if (st.level < 3) throw LevelUnavailable("no E tensor at level " + std::to_string(st.level));
            double div = n - 3;
            for (size_t s = 0; s < st.pairs.size(); ++s) {
                for (size_t sub = 0; sub < st.c_block * st.d_sub; ++sub) {
                    Scalar& src = st.d[s * st.d_block + sub];
                    if (src == Scalar(0)) continue;
                    Scalar add = static_cast<Scalar>(static_cast<double>(src) / div);
                    Scalar* block = st.e.data() + s * st.e_block + sub * st.e_sub;
                    for (size_t t = 0; t < st.e_sub; ++t) block[t] += add;
                    src = Scalar(0);
                }
            }
            break;
        }
    }
}

namespace detail {

template <typename Scalar>
void check_nonnegative(const Scalar* block, size_t len) {
    for (size_t t = 0; t < len; ++t)
        if (static_cast<double>(block[t]) < -CostState<Scalar>::neg_eps())
            throw NegativeSourceCoefficient("negative coefficient before concentration");
}

/// Solves one submatrix, adds the assignment value to `dest`, and overwrites
/// the submatrix with the clamped residual.
template <typename Scalar>
double concentrate_block(Scalar* block, int m, HungarianSolver& solver,
                         std::vector<double>& buffer) {
    check_nonnegative(block, static_cast<size_t>(m) * m);
    const double* mat;
    if constexpr (std::is_same_v<Scalar, double>) {
        mat = block;
    } else {
        buffer.assign(block, block + static_cast<size_t>(m) * m);
        mat = buffer.data();
    }
    const auto& res = solver.solve(std::span<const double>(mat, static_cast<size_t>(m) * m), m);
    solver.residual_inplace(std::span<Scalar>(block, static_cast<size_t>(m) * m), m);
    return res.value;
}

}  // namespace detail

/// Hungarian concentration one level up. B->LB uses the full replicated B, so
/// the LB increment is identical on every worker.
template <typename Scalar>
void concentrate_up(CostState<Scalar>& st, ConcentrateStep step, HungarianSolver& solver) {
    int n = st.n;
    std::vector<double> buffer;
    switch (step) {
        case ConcentrateStep::EtoD: {
            if (st.level < 3) throw LevelUnavailable("no E tensor");
            for (size_t s = 0; s < st.pairs.size(); ++s)
                for (size_t sub = 0; sub < st.c_block * st.d_sub; ++sub) {
                    Scalar* block = st.e.data() + s * st.e_block + sub * st.e_sub;
                    double v = detail::concentrate_block(block, n - 3, solver, buffer);
                    st.d[s * st.d_block + sub] += static_cast<Scalar>(v);
                }
            break;
        }
        case ConcentrateStep::DtoC: {
            if (st.level < 2) throw LevelUnavailable("no D tensor");
            for (size_t s = 0; s < st.pairs.size(); ++s)
                for (size_t kn = 0; kn < st.c_block; ++kn) {
                    Scalar* block = st.d.data() + s * st.d_block + kn * st.d_sub;
                    double v = detail::concentrate_block(block, n - 2, solver, buffer);
                    st.c[s * st.c_block + kn] += static_cast<Scalar>(v);
                }
            break;
        }
        case ConcentrateStep::CtoB: {
            for (size_t s = 0; s < st.pairs.size(); ++s) {
                auto [i, j] = st.pairs[s];
                Scalar* block = st.c.data() + s * st.c_block;
                double v = detail::concentrate_block(block, n - 1, solver, buffer);
                st.b_at(i, j) += static_cast<Scalar>(v);
            }
            break;
        }
        case ConcentrateStep::BtoLB: {
            double v = detail::concentrate_block(st.b.data(), n, solver, buffer);
            st.lb += v;
            break;
        }
    }
}

/// Replaces every owned coefficient of the level by the arithmetic mean of
/// its complementary class. The sum runs in canonical lexicographic tuple
/// order and is divided once, so every worker computes bit-identical means.
/// Remote members come from `incoming`; absence throws MissingComplementary.
template <typename Scalar>
void mean_transfer(CostState<Scalar>& st, int arity, const IncomingValues& incoming) {
    if ((arity == 3 && st.level < 2) || (arity == 4 && st.level < 3))
        throw LevelUnavailable("no tensor of arity " + std::to_string(arity));
    const auto& orderings = pair_orderings(arity);
    const int card = static_cast<int>(orderings.size());
    struct Member {
        std::size_t index;  // into the tensor of the leading pair's slot
        bool owned;
    };
    std::vector<Member> members(card);
    std::vector<double> values(card);
    Scalar* tensor = arity == 2 ? st.c.data() : arity == 3 ? st.d.data() : st.e.data();

    for_each_canonical_class(st.n, arity, [&](const std::array<std::pair<int, int>, 4>& pairs) {
        bool any_owned = false;
        for (int a = 0; a < arity; ++a)
            if (st.owns(pairs[a].first, pairs[a].second)) {
                any_owned = true;
                break;
            }
        if (!any_owned) return;

        double sum = 0.0;
        for (int mIdx = 0; mIdx < card; ++mIdx) {
            const auto& ord = orderings[mIdx];
            auto [i, j] = pairs[ord[0]];
            int s = st.slot(i, j);
            if (s >= 0) {
                auto [k, l] = pairs[ord[1]];
                int kr = ranks::rank1(k, i), nr = ranks::rank1(l, j);
                std::size_t idx;
                if (arity == 2) {
                    idx = st.c_index(s, kr, nr);
                } else {
                    auto [p, q] = pairs[ord[2]];
                    int pr = ranks::rank2(p, i, k), qr = ranks::rank2(q, j, l);
                    if (arity == 3) {
                        idx = st.d_index(s, kr, nr, pr, qr);
                    } else {
                        auto [g, h] = pairs[ord[3]];
                        int gr = ranks::rank3(g, i, k, p), hr = ranks::rank3(h, j, l, q);
                        idx = st.e_index(s, kr, nr, pr, qr, gr, hr);
                    }
                }
                members[mIdx] = {idx, true};
                sum += static_cast<double>(tensor[idx]);
            } else {
                Tuple t;
                t.arity = arity;
                for (int a = 0; a < arity; ++a) {
                    t.v[2 * a] = static_cast<std::uint8_t>(pairs[ord[a]].first);
                    t.v[2 * a + 1] = static_cast<std::uint8_t>(pairs[ord[a]].second);
                }
                auto it = incoming.find(t.packed());
                if (it == incoming.end())
                    throw MissingComplementary("no remote value for a complementary tuple");
                members[mIdx] = {0, false};
                sum += it->second;
            }
        }
        Scalar mean = static_cast<Scalar>(sum / card);
        for (int mIdx = 0; mIdx < card; ++mIdx)
            if (members[mIdx].owned) tensor[members[mIdx].index] = mean;
    });
}

/// Builds one message per destination worker (index = worker id; the self
/// entry is only populated for Mens(B), matching its broadcast semantics).
/// Comp messages carry every owned coefficient whose complementary class
/// touches the destination's ownership, each exactly once per destination.
template <typename Scalar>
std::vector<PhaseMessage> collect_outgoing(const CostState<Scalar>& st, Phase phase,
                                           std::uint32_t iteration) {
    const int workers = st.partition.workers;
    std::vector<PhaseMessage> out(workers);
    for (int w = 0; w < workers; ++w) {
        out[w].phase = phase;
        out[w].source = static_cast<std::uint16_t>(st.worker);
        out[w].iteration = iteration;
    }
    if (phase == Phase::MensB) {
        std::vector<std::pair<Tuple, double>> entries;
        entries.reserve(st.pairs.size());
        for (auto [i, j] : st.pairs) {
            Tuple t;
            t.arity = 1;
            t.v[0] = static_cast<std::uint8_t>(i);
            t.v[1] = static_cast<std::uint8_t>(j);
            entries.emplace_back(t, static_cast<double>(st.b_at(i, j)));
        }
        for (int w = 0; w < workers; ++w) out[w].entries = entries;
        return out;
    }

    if (workers == 1) return out;
    const int arity = phase_arity(phase);
    const auto& orderings = pair_orderings(arity);
    std::array<int, 4> pair_owner{};
    for_each_canonical_class(st.n, arity, [&](const std::array<std::pair<int, int>, 4>& pairs) {
        bool mine = false, cross = false;
        for (int a = 0; a < arity; ++a) {
            pair_owner[a] = st.partition.owner(pairs[a].first, pairs[a].second);
            if (pair_owner[a] == st.worker) mine = true;
            if (pair_owner[a] != pair_owner[0]) cross = true;
        }
        if (!mine || !cross) return;
        for (const auto& ord : orderings) {
            if (pair_owner[ord[0]] != st.worker) continue;
            Tuple t;
            t.arity = arity;
            for (int a = 0; a < arity; ++a) {
                t.v[2 * a] = static_cast<std::uint8_t>(pairs[ord[a]].first);
                t.v[2 * a + 1] = static_cast<std::uint8_t>(pairs[ord[a]].second);
            }
            double value = st.coeff(t);
            for (int a = 0; a < arity; ++a) {
                int dest = pair_owner[a];
                if (dest == st.worker) continue;
                bool dup = false;
                for (int b = 0; b < a; ++b)
                    if (pair_owner[b] == dest) {
                        dup = true;
                        break;
                    }
                if (!dup) out[dest].entries.emplace_back(t, value);
            }
        }
    });
    return out;
}

/// Folds received Comp messages into a lookup for mean_transfer.
inline IncomingValues index_incoming(const std::vector<PhaseMessage>& messages) {
    IncomingValues values;
    std::size_t total = 0;
    for (const auto& msg : messages) total += msg.entries.size();
    values.reserve(total);
    for (const auto& msg : messages)
        for (const auto& [tuple, value] : msg.entries) values.emplace(tuple.packed(), value);
    return values;
}

/// Applies a Mens(B) round: every received entry overwrites the replicated B.
template <typename Scalar>
void apply_mens_b(CostState<Scalar>& st, const std::vector<PhaseMessage>& messages) {
    for (const auto& msg : messages) {
        if (msg.phase != Phase::MensB) throw PhaseDesync("expected Mens(B) message");
        for (const auto& [tuple, value] : msg.entries)
            st.b_at(tuple.v[0], tuple.v[1]) = static_cast<Scalar>(value);
    }
}

}  // namespace rltqap
