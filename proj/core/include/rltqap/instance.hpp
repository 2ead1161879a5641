#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rltqap {

/// A QAP instance: n objects, n locations, a flow between every ordered pair
/// of objects and a distance between every ordered pair of locations.
/// Diagonals are stored but never enter the objective.
struct Instance {
    int n = 0;
    std::vector<double> flow;  // n*n, row-major, flow[i*n+k]
    std::vector<double> dist;  // n*n, row-major, dist[j*n+l]
    std::string name;
    std::optional<double> known_optimum;

    double flow_at(int i, int k) const { return flow[static_cast<size_t>(i) * n + k]; }
    double dist_at(int j, int l) const { return dist[static_cast<size_t>(j) * n + l]; }
};

/// Object -> location map; assign[i] is the location of object i (0-based).
struct Permutation {
    std::vector<int> assign;

    int size() const { return static_cast<int>(assign.size()); }
    static Permutation identity(int n);
    bool is_valid(int n) const;
};

/// Parses the QAPLIB plain-text format: N, then N^2 flow entries, then N^2
/// distance entries, whitespace separated. swap_matrices reads them in the
/// opposite roles (some QAPLIB families list distances first).
Instance parse_qaplib(std::istream& in, bool swap_matrices = false);
Instance parse_qaplib(const std::string& text, bool swap_matrices = false);
Instance load_qaplib_file(const std::string& path, bool swap_matrices = false);

/// Serializes back to the same format (N, flow, dist).
std::string serialize_qaplib(const Instance& inst);

/// Objective of Eq-style double sum: sum over ordered pairs i != k of
/// flow(i,k) * dist(p(i), p(k)).
double evaluate_permutation(const Instance& inst, const Permutation& p);

/// Exhaustive minimizer; deterministic lexicographic tie-break.
struct BruteForceResult {
    Permutation best;
    double cost = 0.0;
};
BruteForceResult brute_force_optimum(const Instance& inst, int cap = 9);

/// Seeded uniform-random instance for tests: integer entries in [0, max_entry].
Instance random_instance(int n, std::uint64_t seed, int max_entry = 10);

}  // namespace rltqap
