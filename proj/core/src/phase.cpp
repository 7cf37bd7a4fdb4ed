#include "deba/phase.hpp"

#include <numeric>

namespace deba {

void LossMatrix::set(std::size_t r, std::size_t c, double p)
{
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError("loss probability outside [0, 1]");
    }
    cells_[r * cols_ + c] = p;
}

Topology Topology::star(std::span<const std::size_t> owner, std::size_t n_lmus,
                        std::span<const std::size_t> bs_of, std::size_t n_bs)
{
    Topology t;
    t.intra = Adjacency(owner.size(), n_lmus);
    t.intra_loss = LossMatrix(owner.size(), n_lmus);
    for (std::size_t s = 0; s < owner.size(); ++s) {
        t.intra.set(s, owner[s], true);
    }
    t.inter = Adjacency(n_lmus, n_bs);
    t.inter_loss = LossMatrix(n_lmus, n_bs);
    for (std::size_t l = 0; l < bs_of.size(); ++l) {
        t.inter.set(l, bs_of[l], true);
    }
    return t;
}

namespace {

void require_one_link_per_row(const Adjacency& a, const char* what)
{
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto row = a.row(r);
        if (std::accumulate(row.begin(), row.end(), 0) != 1) {
            throw DomainError(std::string(what) + ": row " + std::to_string(r) +
                              " must have exactly one link");
        }
    }
}

PhaseComponents components(const Adjacency& adj, std::span<const double> volumes, double scale)
{
    if (volumes.size() != adj.rows()) {
        throw DomainError("phase components: volume vector does not match topology");
    }
    PhaseComponents out;
    out.cols = adj.cols();
    out.link.assign(adj.rows() * adj.cols(), 0.0);
    out.sink.assign(adj.cols(), 0.0);
    for (std::size_t i = 0; i < adj.rows(); ++i) {
        if (volumes[i] < 0.0) {
            throw DomainError("phase components: negative volume");
        }
        for (std::size_t j = 0; j < adj.cols(); ++j) {
            if (adj.at(i, j)) {
                const double x = scale * volumes[i];
                out.link[i * adj.cols() + j] = x;
                out.sink[j] += x;
            }
        }
    }
    return out;
}

} // namespace

void Topology::validate() const
{
    if (intra.cols() != inter.rows()) {
        throw DomainError("topology: intra columns must equal inter rows (LMU count)");
    }
    if (intra_loss.rows() != intra.rows() || intra_loss.cols() != intra.cols() ||
        inter_loss.rows() != inter.rows() || inter_loss.cols() != inter.cols()) {
        throw DomainError("topology: loss matrix shape mismatch");
    }
    require_one_link_per_row(intra, "intra adjacency");
    require_one_link_per_row(inter, "inter adjacency");
}

double PhaseComponents::total() const
{
    return std::accumulate(sink.begin(), sink.end(), 0.0);
}

PhaseComponents phase1_components(const Topology& topo, std::span<const double> sensor_volumes,
                                  double resolution)
{
    return components(topo.intra, sensor_volumes, resolution);
}

PhaseComponents phase2_components(const Topology& topo, std::span<const double> lmu_volumes)
{
    return components(topo.inter, lmu_volumes, 1.0);
}

double phase1_cost(double price_intra, double intra_component)
{
    return price_intra * intra_component;
}

double phase2_cost(double price_inter, double inter_component)
{
    return price_inter * inter_component;
}

double total_cost(const CostParams& params, std::span<const double> intra,
                  std::span<const double> inter)
{
    double cost = 0.0;
    for (double v : intra) {
        cost += phase1_cost(params.price_intra, v);
    }
    for (double v : inter) {
        cost += phase2_cost(params.price_inter, v);
    }
    return cost;
}

} // namespace deba
