#include "rltqap/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "rltqap/errors.hpp"

namespace rltqap {

Permutation Permutation::identity(int n) {
    Permutation p;
    p.assign.resize(n);
    std::iota(p.assign.begin(), p.assign.end(), 0);
    return p;
}

bool Permutation::is_valid(int n) const {
    if (static_cast<int>(assign.size()) != n) return false;
    std::vector<bool> seen(n, false);
    for (int v : assign) {
        if (v < 0 || v >= n || seen[v]) return false;
        seen[v] = true;
    }
    return true;
}

namespace {

std::vector<double> read_tokens(std::istream& in) {
    std::vector<double> tokens;
    std::string tok;
    while (in >> tok) {
        size_t pos = 0;
        double v;
        try {
            v = std::stod(tok, &pos);
        } catch (const std::exception&) {
            throw NonNumericToken("non-numeric token '" + tok + "'");
        }
        if (pos != tok.size()) throw NonNumericToken("non-numeric token '" + tok + "'");
        tokens.push_back(v);
    }
    return tokens;
}

}  // namespace

Instance parse_qaplib(std::istream& in, bool swap_matrices) {
    auto tokens = read_tokens(in);
    if (tokens.empty()) throw TokenCountMismatch("empty input");
    double n_raw = tokens[0];
    if (n_raw != std::floor(n_raw) || n_raw < 0) throw NonNumericToken("N must be an integer");
    int n = static_cast<int>(n_raw);
    if (n < 2) throw NTooSmall("N must be >= 2, got " + std::to_string(n));
    size_t expected = 1 + 2 * static_cast<size_t>(n) * n;
    if (tokens.size() != expected) {
        throw TokenCountMismatch("expected " + std::to_string(expected) + " tokens, got " +
                                 std::to_string(tokens.size()));
    }
    Instance inst;
    inst.n = n;
    size_t nn = static_cast<size_t>(n) * n;
    inst.flow.assign(tokens.begin() + 1, tokens.begin() + 1 + nn);
    inst.dist.assign(tokens.begin() + 1 + nn, tokens.end());
    if (swap_matrices) std::swap(inst.flow, inst.dist);
    for (double v : inst.flow)
        if (!std::isfinite(v) || v < 0) throw NegativeEntry("flow entries must be finite and >= 0");
    for (double v : inst.dist)
        if (!std::isfinite(v) || v < 0) throw NegativeEntry("dist entries must be finite and >= 0");
    return inst;
}

Instance parse_qaplib(const std::string& text, bool swap_matrices) {
    std::istringstream in(text);
    return parse_qaplib(in, swap_matrices);
}

Instance load_qaplib_file(const std::string& path, bool swap_matrices) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open instance file: " + path);
    Instance inst = parse_qaplib(in, swap_matrices);
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    inst.name = dot == std::string::npos ? base : base.substr(0, dot);
    return inst;
}

std::string serialize_qaplib(const Instance& inst) {
    std::ostringstream out;
    out << inst.n << "\n\n";
    auto emit = [&](const std::vector<double>& m) {
        for (int i = 0; i < inst.n; ++i) {
            for (int j = 0; j < inst.n; ++j) {
                double v = m[static_cast<size_t>(i) * inst.n + j];
                if (j) out << ' ';
                if (v == std::floor(v) && std::abs(v) < 1e15)
                    out << static_cast<long long>(v);
                else
                    out << v;
            }
            out << '\n';
        }
    };
    emit(inst.flow);
    out << '\n';
    emit(inst.dist);
    return out.str();
}

double evaluate_permutation(const Instance& inst, const Permutation& p) {
    if (!p.is_valid(inst.n)) throw DimensionMismatch("permutation does not match instance size");
    double total = 0.0;
    for (int i = 0; i < inst.n; ++i)
        for (int k = 0; k < inst.n; ++k) {
            if (k == i) continue;
            total += inst.flow_at(i, k) * inst.dist_at(p.assign[i], p.assign[k]);
        }
    return total;
}

BruteForceResult brute_force_optimum(const Instance& inst, int cap) {
    if (inst.n > cap)
        throw InstanceTooLarge("brute force cap is " + std::to_string(cap) + ", instance has n=" +
                               std::to_string(inst.n));
    Permutation p = Permutation::identity(inst.n);
    BruteForceResult result;
    result.cost = evaluate_permutation(inst, p);
    result.best = p;
    while (std::next_permutation(p.assign.begin(), p.assign.end())) {
        double c = evaluate_permutation(inst, p);
        if (c < result.cost) {
            result.cost = c;
            result.best = p;
        }
    }
    return result;
}

Instance random_instance(int n, std::uint64_t seed, int max_entry) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> dist(0, max_entry);
    Instance inst;
    inst.n = n;
    inst.name = "random-n" + std::to_string(n) + "-s" + std::to_string(seed);
    inst.flow.resize(static_cast<size_t>(n) * n);
    inst.dist.resize(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            inst.flow[static_cast<size_t>(i) * n + j] = i == j ? 0 : dist(rng);
            inst.dist[static_cast<size_t>(i) * n + j] = i == j ? 0 : dist(rng);
        }
    return inst;
}

}  // namespace rltqap
