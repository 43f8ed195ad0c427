#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace warpflow::dtw {

/// Global path constraint. A Sakoe-Chiba band of radius r admits only cells
/// with |i - j| <= r; it must satisfy r >= |n - m| for a path to exist.
struct Band {
    enum class Kind { None, SakoeChiba };

    Kind kind = Kind::None;
    std::size_t radius = 0;

    static Band none() { return {}; }
    static Band sakoe_chiba(std::size_t r) { return {Kind::SakoeChiba, r}; }

    bool admits(std::size_t i, std::size_t j) const {
        return kind == Kind::None || (i > j ? i - j : j - i) <= radius;
    }
    std::string str() const;
};

/// Accumulated-cost grid, row-major. Cells outside the band hold +infinity.
class CostMatrix {
public:
    CostMatrix(std::size_t rows, std::size_t cols);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    double operator()(std::size_t i, std::size_t j) const { return cells_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return cells_[i * cols_ + j]; }

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> cells_;
};

struct PathStep {
    std::size_t i = 0;
    std::size_t j = 0;
    bool operator==(const PathStep&) const = default;
};

/// Index pairs from (0,0) to (n-1,m-1); each step is (+1,0), (0,+1) or (+1,+1).
using WarpPath = std::vector<PathStep>;

inline double local_distance(double a, double b) { return a > b ? a - b : b - a; }

/// Full accumulated-cost matrix under the symmetric unit-weight recurrence
/// D(i,j) = d(i,j) + min(D(i-1,j), D(i,j-1), D(i-1,j-1)).
CostMatrix cost_matrix(std::span<const double> x, std::span<const double> y, Band band = {});

/// Unnormalized DTW distance. Uses two rolling rows; the result is bit-identical
/// to the last cell of cost_matrix().
/// Throws EmptySeries or InfeasibleBand.
double dtw_distance(std::span<const double> x, std::span<const double> y, Band band = {});

/// An optimal warping path. Backtracking prefers the diagonal predecessor,
/// then (i-1, j), then (i, j-1) when accumulated costs tie.
WarpPath warp_path(std::span<const double> x, std::span<const double> y, Band band = {});

/// Sum of local distances along `path`, accumulated from (0,0) forward.
double path_cost(std::span<const double> x, std::span<const double> y, const WarpPath& path);

/// True when `path` is a valid warping path for an n x m grid.
bool is_valid_path(const WarpPath& path, std::size_t n, std::size_t m);

inline constexpr std::size_t kBruteForceLimit = 8;

/// Exhaustive minimum over every monotone, continuous, boundary-respecting
/// path. Exponential; throws TooLarge when either length exceeds kBruteForceLimit.
double dtw_bruteforce(std::span<const double> x, std::span<const double> y);

}  // namespace warpflow::dtw
