#ifndef ELNET_NETWORK_HPP
#define ELNET_NETWORK_HPP

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "elnet/curve.hpp"
#include "elnet/graph.hpp"

namespace elnet {

/// Pairing of an angled graph with per-edge geometry. Curve i runs from the
/// end-0 vertex to the end-1 vertex of edge i; a singular curve contributes
/// its single point to both.
class Network {
public:
    Network(AngledGraph graph, std::vector<DiscreteCurve> curves)
        : graph_(std::move(graph)), curves_(std::move(curves)) {
        if (static_cast<int>(curves_.size()) != graph_.num_edges())
            throw std::invalid_argument("one curve per edge required");
    }

    const AngledGraph& graph() const { return graph_; }
    const DiscreteCurve& curve(int edge) const { return curves_.at(edge); }
    const std::vector<DiscreteCurve>& curves() const { return curves_; }

    /// Position of a vertex, read off the first incident curve endpoint.
    Vec2 junction_position(int v) const {
        const HalfEdge h = graph_.incident(v).front();
        return curves_[h.edge].endpoint(h.end);
    }

    /// Largest disagreement between incident curve endpoints over all junctions.
    double incidence_residual() const {
        double worst = 0.0;
        for (int v = 0; v < graph_.num_vertices(); ++v) {
            const Vec2 p = junction_position(v);
            for (const HalfEdge& h : graph_.incident(v))
                worst = std::max(worst, (curves_[h.edge].endpoint(h.end) - p).norm());
        }
        return worst;
    }

    void validate(double tol = 1e-9) const {
        const double r = incidence_residual();
        if (r > tol)
            throw std::invalid_argument("junction incidence violated by " + std::to_string(r));
    }

    /// Edges mapped to singular curves.
    std::vector<int> singular_edges() const {
        std::vector<int> s;
        for (int e = 0; e < graph_.num_edges(); ++e)
            if (curves_[e].is_singular()) s.push_back(e);
        return s;
    }

    std::vector<int> regular_edges() const {
        std::vector<int> r;
        for (int e = 0; e < graph_.num_edges(); ++e)
            if (!curves_[e].is_singular()) r.push_back(e);
        return r;
    }

    bool is_regular() const { return singular_edges().empty(); }

    double total_length() const {
        double l = 0.0;
        for (const auto& c : curves_) l += c.length();
        return l;
    }

private:
    AngledGraph graph_;
    std::vector<DiscreteCurve> curves_;
};

struct EdgeEnergy {
    int edge = 0;
    double length = 0.0;
    double bending = 0.0;  // integral of k^2 ds
    double energy = 0.0;   // alpha * bending + beta * length
};

struct EnergyBreakdown {
    double alpha = 1.0;
    double beta = 1.0;
    double total = 0.0;
    std::vector<EdgeEnergy> per_edge;
};

/// Elastic energy sum_i (alpha * int k^2 ds + beta * length); singular curves
/// contribute zero. Terms are accumulated in edge order.
inline EnergyBreakdown elastic_energy(const Network& n, double alpha = 1.0, double beta = 1.0) {
    EnergyBreakdown out;
    out.alpha = alpha;
    out.beta = beta;
    for (int e = 0; e < n.graph().num_edges(); ++e) {
        EdgeEnergy t;
        t.edge = e;
        const DiscreteCurve& c = n.curve(e);
        if (!c.is_singular()) {
            t.length = c.length();
            t.bending = bending_energy(c);
            t.energy = alpha * t.bending + beta * t.length;
        }
        out.total += t.energy;
        out.per_edge.push_back(t);
    }
    return out;
}

/// Scale the whole network by lambda about the origin.
inline Network rescale(const Network& n, double lambda) {
    if (!(lambda > 0.0)) throw std::invalid_argument("scale must be positive");
    std::vector<DiscreteCurve> curves;
    curves.reserve(n.curves().size());
    for (const auto& c : n.curves()) {
        if (c.is_singular())
            curves.push_back(DiscreteCurve::singular_at(c.front() * lambda));
        else
            curves.push_back(c.scaled(lambda));
    }
    return Network(n.graph(), std::move(curves));
}

}  // namespace elnet

#endif
