#pragma once

// Two-phase aggregation volumes and costs: sensors to LMUs (Phase I)
// and LMUs to base stations (Phase II).

#include "deba/model.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace deba {

/// Dense row-major 0/1 matrix.
class Adjacency {
public:
    Adjacency() = default;
    Adjacency(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols, 0) {}

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }

    [[nodiscard]] bool at(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c] != 0; }
    void set(std::size_t r, std::size_t c, bool v) { cells_[r * cols_ + c] = v ? 1 : 0; }

    [[nodiscard]] std::span<const std::uint8_t> row(std::size_t r) const
    {
        return {cells_.data() + r * cols_, cols_};
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::uint8_t> cells_;
};

/// Dense row-major matrix of link loss probabilities.
class LossMatrix {
public:
    LossMatrix() = default;
    LossMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), cells_(rows * cols, 0.0) {}

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] double at(std::size_t r, std::size_t c) const { return cells_[r * cols_ + c]; }
    void set(std::size_t r, std::size_t c, double p);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> cells_;
};

struct Topology {
    Adjacency intra;     // sensors x LMUs
    Adjacency inter;     // LMUs x BSs
    LossMatrix intra_loss;
    LossMatrix inter_loss;

    /// One-hop star: sensor s belongs to LMU owner[s]; LMU l uplinks to BS bs_of[l].
    static Topology star(std::span<const std::size_t> owner, std::size_t n_lmus,
                         std::span<const std::size_t> bs_of, std::size_t n_bs);

    /// Throws DomainError unless every row has exactly one link and shapes agree.
    void validate() const;
};

/// Per-link component matrix and its per-sink totals.
struct PhaseComponents {
    std::vector<double> link;  // rows x cols, row-major: X_ij or Z_ij
    std::vector<double> sink;  // per column: I_j or J_j
    std::size_t cols = 0;

    [[nodiscard]] double total() const;
};

/// Phase I components: X_ij = resolution * G_ij * V_i, I_j = sum_i X_ij.
PhaseComponents phase1_components(const Topology& topo, std::span<const double> sensor_volumes,
                                  double resolution = 1.0);

/// Phase II components: Z_ij = O_ij * F_i, J_j = sum_i Z_ij.
PhaseComponents phase2_components(const Topology& topo, std::span<const double> lmu_volumes);

double phase1_cost(double price_intra, double intra_component);
double phase2_cost(double price_inter, double inter_component);

/// Total two-phase aggregation cost of one epoch.
double total_cost(const CostParams& params, std::span<const double> intra,
                  std::span<const double> inter);

} // namespace deba
