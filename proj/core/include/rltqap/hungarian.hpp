#pragma once

#include <span>
#include <vector>

namespace rltqap {

/// Optimal assignment plus the dual certificate. Invariants (up to eps):
///   sum(u) + sum(v) == value
///   M[r][s] - u[r] - v[s] >= 0 for all r,s
///   M[r][matching[r]] - u[r] - v[matching[r]] == 0
struct AssignmentResult {
    double value = 0.0;
    std::vector<double> row_potentials;
    std::vector<double> col_potentials;
    std::vector<int> matching;  // row -> column
};

/// O(m^3) Hungarian (shortest augmenting path with potentials).
/// Ties in path selection break to the lowest row, then lowest column index,
/// so the matching is deterministic. The workspace is reused across calls;
/// one solver per worker thread.
class HungarianSolver {
   public:
    /// M is row-major m*m, entries finite and >= 0.
    const AssignmentResult& solve(std::span<const double> M, int m);

    /// Writes max(0, M[r][s] - u[r] - v[s]) over M itself.
    /// Valid right after solve() on the same matrix.
    template <typename Scalar>
    void residual_inplace(std::span<Scalar> M, int m) const;

    const AssignmentResult& last() const { return result_; }

   private:
    AssignmentResult result_;
    std::vector<double> minv_;
    std::vector<char> used_;
    std::vector<int> way_;
    std::vector<int> col_row_;  // column -> matched row, -1 if free
};

/// One-shot convenience wrapper (validates entries).
AssignmentResult solve_assignment(std::span<const double> M, int m);

/// Returns max(0, M - u x 1 - 1 x v) clamped at zero after verifying that
/// `res` is a valid certificate for M (throws PotentialMismatch otherwise).
std::vector<double> extract_residual(std::span<const double> M, int m, const AssignmentResult& res,
                                     double eps = 1e-9);

}  // namespace rltqap
