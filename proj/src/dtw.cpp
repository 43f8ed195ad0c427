#include "warpflow/dtw.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

#include "warpflow/error.hpp"

namespace warpflow::dtw {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_inputs(std::span<const double> x, std::span<const double> y, Band band) {
    if (x.empty() || y.empty()) throw Error(ErrorCode::EmptySeries, "DTW needs two non-empty series");
    const std::size_t diff = x.size() > y.size() ? x.size() - y.size() : y.size() - x.size();
    if (band.kind == Band::Kind::SakoeChiba && band.radius < diff) {
        throw Error(ErrorCode::InfeasibleBand,
                    fmt::format("Sakoe-Chiba radius {} cannot connect series of lengths {} and {}", band.radius,
                                x.size(), y.size()));
    }
}

// One recurrence step, shared by the matrix and rolling-row variants so both
// produce bit-identical values.
inline double step(double local, double up, double left, double diag, bool origin) {
    if (origin) return local;
    return local + std::min({up, left, diag});
}

}  // namespace

std::string Band::str() const {
    return kind == Kind::None ? std::string("none") : fmt::format("sakoe_chiba:{}", radius);
}

CostMatrix::CostMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols, kInf) {}

CostMatrix cost_matrix(std::span<const double> x, std::span<const double> y, Band band) {
    check_inputs(x, y, band);
    const std::size_t n = x.size(), m = y.size();
    CostMatrix D(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            if (!band.admits(i, j)) continue;
            const double up = i > 0 ? D(i - 1, j) : kInf;
            const double left = j > 0 ? D(i, j - 1) : kInf;
            const double diag = i > 0 && j > 0 ? D(i - 1, j - 1) : kInf;
            D(i, j) = step(local_distance(x[i], y[j]), up, left, diag, i == 0 && j == 0);
        }
    }
    return D;
}

double dtw_distance(std::span<const double> x, std::span<const double> y, Band band) {
    check_inputs(x, y, band);
    const std::size_t n = x.size(), m = y.size();
    std::vector<double> prev(m, kInf), curr(m, kInf);
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(curr.begin(), curr.end(), kInf);
        for (std::size_t j = 0; j < m; ++j) {
            if (!band.admits(i, j)) continue;
            const double up = i > 0 ? prev[j] : kInf;
            const double left = j > 0 ? curr[j - 1] : kInf;
            const double diag = i > 0 && j > 0 ? prev[j - 1] : kInf;
            curr[j] = step(local_distance(x[i], y[j]), up, left, diag, i == 0 && j == 0);
        }
        std::swap(prev, curr);
    }
    return prev[m - 1];
}

WarpPath warp_path(std::span<const double> x, std::span<const double> y, Band band) {
    const CostMatrix D = cost_matrix(x, y, band);
    std::size_t i = x.size() - 1, j = y.size() - 1;
    WarpPath path{{i, j}};
    while (i > 0 || j > 0) {
        if (i == 0) {
            --j;
        } else if (j == 0) {
            --i;
        } else {
            const double diag = D(i - 1, j - 1), up = D(i - 1, j), left = D(i, j - 1);
            if (diag <= up && diag <= left) {
                --i;
                --j;
            } else if (up <= left) {
                --i;
            } else {
                --j;
            }
        }
        path.push_back({i, j});
    }
    std::reverse(path.begin(), path.end());
    return path;
}

double path_cost(std::span<const double> x, std::span<const double> y, const WarpPath& path) {
    double total = 0.0;
    for (const auto& s : path) total = local_distance(x[s.i], y[s.j]) + total;
    return total;
}

bool is_valid_path(const WarpPath& path, std::size_t n, std::size_t m) {
    if (path.empty() || n == 0 || m == 0) return false;
    if (path.front() != PathStep{0, 0} || path.back() != PathStep{n - 1, m - 1}) return false;
    for (std::size_t k = 1; k < path.size(); ++k) {
        const auto di = path[k].i - path[k - 1].i;
        const auto dj = path[k].j - path[k - 1].j;
        if (path[k].i < path[k - 1].i || path[k].j < path[k - 1].j) return false;
        if (di > 1 || dj > 1 || (di == 0 && dj == 0)) return false;
    }
    return true;
}

namespace {

void enumerate_paths(std::span<const double> x, std::span<const double> y, std::size_t i, std::size_t j, double acc,
                     double& best) {
    acc = local_distance(x[i], y[j]) + acc;
    if (i + 1 == x.size() && j + 1 == y.size()) {
        best = std::min(best, acc);
        return;
    }
    if (i + 1 < x.size()) enumerate_paths(x, y, i + 1, j, acc, best);
    if (j + 1 < y.size()) enumerate_paths(x, y, i, j + 1, acc, best);
    if (i + 1 < x.size() && j + 1 < y.size()) enumerate_paths(x, y, i + 1, j + 1, acc, best);
}

}  // namespace

double dtw_bruteforce(std::span<const double> x, std::span<const double> y) {
    if (x.empty() || y.empty()) throw Error(ErrorCode::EmptySeries, "DTW needs two non-empty series");
    if (x.size() > kBruteForceLimit || y.size() > kBruteForceLimit) {
        throw Error(ErrorCode::TooLarge, fmt::format("brute-force DTW is limited to lengths <= {}, got {} and {}",
                                                     kBruteForceLimit, x.size(), y.size()));
    }
    double best = kInf;
    enumerate_paths(x, y, 0, 0, 0.0, best);
    return best;
}

}  // namespace warpflow::dtw
