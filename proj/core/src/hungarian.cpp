#include "rltqap/hungarian.hpp"

#include <cmath>
#include <limits>

#include "rltqap/errors.hpp"

namespace rltqap {

const AssignmentResult& HungarianSolver::solve(std::span<const double> M, int m) {
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // 1-based arrays; index 0 is the virtual root column.
    auto& u = result_.row_potentials;
    auto& v = result_.col_potentials;
    u.assign(m + 1, 0.0);
    v.assign(m + 1, 0.0);
    col_row_.assign(m + 1, 0);  // p[j]: row matched to column j, 0 = free
    way_.assign(m + 1, 0);

    auto cost = [&](int i, int j) { return M[static_cast<size_t>(i - 1) * m + (j - 1)]; };

    for (int i = 1; i <= m; ++i) {
        col_row_[0] = i;
        int j0 = 0;
        minv_.assign(m + 1, kInf);
        used_.assign(m + 1, 0);
        do {
            used_[j0] = 1;
            int i0 = col_row_[j0];
            int j1 = -1;
            double delta = kInf;
            for (int j = 1; j <= m; ++j) {
                if (used_[j]) continue;
                double cur = cost(i0, j) - u[i0] - v[j];
                if (cur < minv_[j]) {
                    minv_[j] = cur;
                    way_[j] = j0;
                }
                if (minv_[j] < delta) {
                    delta = minv_[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= m; ++j) {
                if (used_[j]) {
                    u[col_row_[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv_[j] -= delta;
                }
            }
            j0 = j1;
        } while (col_row_[j0] != 0);
        do {
            int j1 = way_[j0];
            col_row_[j0] = col_row_[j1];
            j0 = j1;
        } while (j0);
    }

    result_.matching.assign(m, -1);
    double total = 0.0;
    for (int j = 1; j <= m; ++j) {
        result_.matching[col_row_[j] - 1] = j - 1;
        total += cost(col_row_[j], j);
    }
    result_.value = total;
    // Drop the virtual index 0 so callers see plain 0-based arrays.
    u.erase(u.begin());
    v.erase(v.begin());
    return result_;
}

template <typename Scalar>
void HungarianSolver::residual_inplace(std::span<Scalar> M, int m) const {
    const auto& u = result_.row_potentials;
    const auto& v = result_.col_potentials;
    for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) {
            size_t idx = static_cast<size_t>(r) * m + s;
            double red = static_cast<double>(M[idx]) - u[r] - v[s];
            M[idx] = red > 0 ? static_cast<Scalar>(red) : Scalar(0);
        }
}

template void HungarianSolver::residual_inplace<float>(std::span<float>, int) const;
template void HungarianSolver::residual_inplace<double>(std::span<double>, int) const;

AssignmentResult solve_assignment(std::span<const double> M, int m) {
    if (m < 1) throw DimensionMismatch("assignment matrix must be at least 1x1");
    for (double x : M) {
        if (!std::isfinite(x)) throw NonFiniteEntry("assignment matrix entry not finite");
        if (x < 0) throw NegativeEntry("assignment matrix entry negative");
    }
    HungarianSolver solver;
    return solver.solve(M, m);
}

std::vector<double> extract_residual(std::span<const double> M, int m, const AssignmentResult& res,
                                     double eps) {
    const auto& u = res.row_potentials;
    const auto& v = res.col_potentials;
    if (static_cast<int>(u.size()) != m || static_cast<int>(v.size()) != m ||
        static_cast<int>(res.matching.size()) != m)
        throw PotentialMismatch("certificate size does not match matrix");
    double dual_sum = 0.0;
    for (double x : u) dual_sum += x;
    for (double x : v) dual_sum += x;
    double scale = std::max(1.0, std::abs(res.value));
    if (std::abs(dual_sum - res.value) > eps * scale * m)
        throw PotentialMismatch("dual sum does not equal assignment value");
    for (int r = 0; r < m; ++r) {
        for (int s = 0; s < m; ++s) {
            double red = M[static_cast<size_t>(r) * m + s] - u[r] - v[s];
            if (red < -eps * scale) throw PotentialMismatch("negative reduced cost");
        }
        double matched = M[static_cast<size_t>(r) * m + res.matching[r]] - u[r] - v[res.matching[r]];
        if (std::abs(matched) > eps * scale)
            throw PotentialMismatch("matched edge has nonzero reduced cost");
    }
    std::vector<double> out(M.begin(), M.end());
    for (int r = 0; r < m; ++r)
        for (int s = 0; s < m; ++s) {
            size_t idx = static_cast<size_t>(r) * m + s;
            double red = M[idx] - u[r] - v[s];
            out[idx] = red > 0 ? red : 0.0;
        }
    return out;
}

}  // namespace rltqap
