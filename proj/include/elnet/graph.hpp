#ifndef ELNET_GRAPH_HPP
#define ELNET_GRAPH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "elnet/angle.hpp"

namespace elnet {

/// One of the two ends (z, i) of an edge: `edge` is the edge index i,
/// `end` is the endpoint z in {0, 1}.
struct HalfEdge {
    int edge = -1;
    int end = 0;

    HalfEdge() = default;
    HalfEdge(int e, int z) : edge(e), end(z) {}

    HalfEdge opposite() const { return {edge, 1 - end}; }

    friend bool operator==(const HalfEdge&, const HalfEdge&) = default;
    friend auto operator<=>(const HalfEdge&, const HalfEdge&) = default;
};

struct EdgeSpec {
    std::string v0;
    std::string v1;
    double dir0 = 0.0;  // assigned direction at end 0, radians
    double dir1 = 0.0;  // assigned direction at end 1, radians
    std::string id;     // optional user id; defaults to the index
};

/// Combinatorial N-graph with one assigned direction per half-edge.
/// Vertices are dense integer ids in first-appearance order of their labels;
/// all state is immutable after construction.
class AngledGraph {
public:
    AngledGraph() = default;

    int num_edges() const { return static_cast<int>(ends_.size()); }
    int num_vertices() const { return static_cast<int>(labels_.size()); }

    int vertex_of(const HalfEdge& h) const { return ends_.at(h.edge)[h.end]; }
    double direction(const HalfEdge& h) const { return dirs_.at(h.edge)[h.end]; }

    const std::string& vertex_label(int v) const { return labels_.at(v); }
    const std::string& edge_id(int e) const { return edge_ids_.at(e); }
    std::optional<int> find_vertex(const std::string& label) const {
        auto it = vertex_index_.find(label);
        if (it == vertex_index_.end()) return std::nullopt;
        return it->second;
    }

    /// Half-edges incident to vertex v, ordered by (edge, end).
    const std::vector<HalfEdge>& incident(int v) const { return incidence_.at(v); }

    bool is_loop(int edge) const { return ends_.at(edge)[0] == ends_.at(edge)[1]; }

    friend AngledGraph build_graph(const std::vector<EdgeSpec>& edges);

private:
    std::vector<std::array<int, 2>> ends_;
    std::vector<std::array<double, 2>> dirs_;
    std::vector<std::string> edge_ids_;
    std::vector<std::string> labels_;
    std::map<std::string, int> vertex_index_;
    std::vector<std::vector<HalfEdge>> incidence_;
};

inline AngledGraph build_graph(const std::vector<EdgeSpec>& edges) {
    if (edges.empty()) throw std::invalid_argument("graph needs at least one edge");
    AngledGraph g;
    std::map<std::string, int> seen_ids;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        const EdgeSpec& e = edges[i];
        if (!std::isfinite(e.dir0) || !std::isfinite(e.dir1))
            throw std::invalid_argument("non-finite direction on edge " + std::to_string(i));
        std::string id = e.id.empty() ? std::to_string(i) : e.id;
        if (!seen_ids.emplace(id, static_cast<int>(i)).second)
            throw std::invalid_argument("duplicate edge id: " + id);
        g.edge_ids_.push_back(std::move(id));
        std::array<int, 2> vs;
        const std::string* labels[2] = {&e.v0, &e.v1};
        for (int z = 0; z < 2; ++z) {
            auto [it, inserted] =
                g.vertex_index_.emplace(*labels[z], static_cast<int>(g.labels_.size()));
            if (inserted) g.labels_.push_back(*labels[z]);
            vs[z] = it->second;
        }
        g.ends_.push_back(vs);
        g.dirs_.push_back({mod_two_pi(e.dir0), mod_two_pi(e.dir1)});
    }
    g.incidence_.assign(g.labels_.size(), {});
    for (int e = 0; e < g.num_edges(); ++e)
        for (int z = 0; z < 2; ++z) g.incidence_[g.ends_[e][z]].push_back({e, z});
    return g;
}

inline int junction_order(const AngledGraph& g, int v) {
    if (v < 0 || v >= g.num_vertices()) throw std::out_of_range("unknown vertex");
    return static_cast<int>(g.incident(v).size());
}

inline int junction_order(const AngledGraph& g, const std::string& label) {
    auto v = g.find_vertex(label);
    if (!v) throw std::out_of_range("unknown vertex label: " + label);
    return junction_order(g, *v);
}

/// A walk through consecutive edges. Step j traverses edge i_j starting from
/// its endpoint z_j, so consecutive steps satisfy
/// vertex_of(1-z_j, i_j) == vertex_of(z_{j+1}, i_{j+1}).
struct Path {
    std::vector<HalfEdge> steps;
    bool closed = false;

    bool consistent(const AngledGraph& g) const {
        if (steps.empty()) return false;
        const std::size_t n = steps.size();
        for (std::size_t j = 0; j + 1 < n; ++j)
            if (g.vertex_of(steps[j].opposite()) != g.vertex_of(steps[j + 1])) return false;
        if (closed && g.vertex_of(steps[n - 1].opposite()) != g.vertex_of(steps[0]))
            return false;
        return true;
    }

    Path reversed() const {
        Path r;
        r.closed = closed;
        r.steps.reserve(steps.size());
        for (auto it = steps.rbegin(); it != steps.rend(); ++it) r.steps.push_back(it->opposite());
        return r;
    }
};

/// Turn taken at the junction between two consecutive steps:
/// the counterclockwise angle from -d^{1-z,i} of the incoming step to
/// d^{w,j} of the outgoing one.
inline double junction_turn(const AngledGraph& g, const HalfEdge& incoming,
                            const HalfEdge& outgoing) {
    return ccw_angle(g.direction(incoming.opposite()) + kPi, g.direction(outgoing));
}

/// Total turning angle of a path, in [0, 2*pi). Open paths sum J-1 junction
/// turns, cycles also include the wrap-around turn.
inline double path_angle(const AngledGraph& g, const Path& p) {
    if (!p.consistent(g)) throw std::invalid_argument("inconsistent path");
    double sum = 0.0;
    const std::size_t n = p.steps.size();
    for (std::size_t j = 0; j + 1 < n; ++j)
        sum += junction_turn(g, p.steps[j], p.steps[j + 1]);
    if (p.closed) sum += junction_turn(g, p.steps[n - 1], p.steps[0]);
    return mod_two_pi(sum);
}

/// Deterministic spanning forest of an edge subset, breadth-first from the
/// lowest-index edge of each component, ties broken by edge index.
/// parent_step[v] is the step that first reached v (traversed toward v).
struct SpanningForest {
    std::vector<int> component;                        // per vertex, -1 when absent
    std::vector<std::optional<HalfEdge>> parent_step;  // per vertex
    std::vector<int> roots;                            // one vertex per component
    std::vector<bool> tree_edge;                       // per edge of g
    std::vector<int> non_tree_edges;                   // subset edges, ascending
    std::vector<int> subset_vertices;                  // ascending
};

inline SpanningForest spanning_forest(const AngledGraph& g, const std::vector<int>& subgraph) {
    SpanningForest f;
    f.component.assign(g.num_vertices(), -1);
    f.parent_step.assign(g.num_vertices(), std::nullopt);
    f.tree_edge.assign(g.num_edges(), false);

    std::vector<int> edges = subgraph;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (int e : edges)
        if (e < 0 || e >= g.num_edges()) throw std::out_of_range("edge outside graph");

    std::vector<std::vector<HalfEdge>> adj(g.num_vertices());
    for (int e : edges)
        for (int z = 0; z < 2; ++z) adj[g.vertex_of({e, z})].push_back({e, z});
    {
        std::vector<bool> in_subset(g.num_vertices(), false);
        for (int e : edges)
            for (int z = 0; z < 2; ++z) in_subset[g.vertex_of({e, z})] = true;
        for (int v = 0; v < g.num_vertices(); ++v)
            if (in_subset[v]) f.subset_vertices.push_back(v);
    }

    std::vector<bool> edge_used(g.num_edges(), false);
    for (int e : edges) {
        const int start = g.vertex_of({e, 0});
        if (f.component[start] != -1) continue;
        const int comp = static_cast<int>(f.roots.size());
        f.roots.push_back(start);
        f.component[start] = comp;
        std::queue<int> q;
        q.push(start);
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            for (const HalfEdge& h : adj[v]) {
                if (edge_used[h.edge]) continue;
                const int w = g.vertex_of(h.opposite());
                if (f.component[w] == -1) {
                    edge_used[h.edge] = true;
                    f.tree_edge[h.edge] = true;
                    f.component[w] = comp;
                    f.parent_step[w] = h;  // step traversed v -> w
                    q.push(w);
                }
            }
        }
    }
    for (int e : edges)
        if (!f.tree_edge[e]) f.non_tree_edges.push_back(e);
    return f;
}

/// Steps of the tree walk from vertex `from` up/down to vertex `to`
/// (both in the same forest component).
inline std::vector<HalfEdge> tree_walk(const AngledGraph& g, const SpanningForest& f, int from,
                                       int to) {
    auto root_chain = [&](int v) {
        std::vector<int> chain{v};
        while (f.parent_step[chain.back()])
            chain.push_back(g.vertex_of(*f.parent_step[chain.back()]));
        return chain;
    };
    std::vector<int> up = root_chain(from), down = root_chain(to);
    // trim the common suffix above the meeting vertex
    while (up.size() > 1 && down.size() > 1 && up[up.size() - 2] == down[down.size() - 2]) {
        up.pop_back();
        down.pop_back();
    }
    if (up.back() != down.back()) throw std::logic_error("tree_walk across components");
    std::vector<HalfEdge> steps;
    for (std::size_t k = 0; k + 1 < up.size(); ++k)
        steps.push_back(f.parent_step[up[k]]->opposite());  // walk toward the root
    for (std::size_t k = down.size() - 1; k-- > 0;) steps.push_back(*f.parent_step[down[k]]);
    return steps;
}

/// One fundamental cycle per non-tree edge of the deterministic spanning
/// forest of `subgraph`; empty for forests.
inline std::vector<Path> fundamental_cycles(const AngledGraph& g,
                                            const std::vector<int>& subgraph) {
    const SpanningForest f = spanning_forest(g, subgraph);
    std::vector<Path> cycles;
    for (int e : f.non_tree_edges) {
        Path c;
        c.closed = true;
        c.steps.push_back({e, 0});
        const int head = g.vertex_of({e, 1});
        const int tail = g.vertex_of({e, 0});
        for (const HalfEdge& h : tree_walk(g, f, head, tail)) c.steps.push_back(h);
        cycles.push_back(std::move(c));
    }
    return cycles;
}

/// Connected components of an edge subset, as lists of edges (ascending).
inline std::vector<std::vector<int>> connected_components(const AngledGraph& g,
                                                          const std::vector<int>& subgraph) {
    const SpanningForest f = spanning_forest(g, subgraph);
    std::vector<std::vector<int>> comps(f.roots.size());
    std::vector<int> edges = subgraph;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (int e : edges) comps[f.component[g.vertex_of({e, 0})]].push_back(e);
    // drop components that received no edges (cannot happen, but keep shape tidy)
    std::erase_if(comps, [](const auto& c) { return c.empty(); });
    return comps;
}

}  // namespace elnet

#endif
