#ifndef ELNET_CLASSIFY_HPP
#define ELNET_CLASSIFY_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "elnet/graph.hpp"
#include "elnet/network.hpp"
#include "elnet/simplex.hpp"

namespace elnet {

/// Real or virtual tangent angles per half-edge plus one rotation angle per
/// junction, satisfying tangent(z,i) = rotation(v) + direction(z,i) at every
/// covered vertex and tangent(1,i) = tangent(0,i) + pi on virtual edges.
struct TangentAssignment {
    std::map<HalfEdge, double> tangent;
    std::map<int, double> rotation;

    bool has(const HalfEdge& h) const { return tangent.count(h) > 0; }
    double at(const HalfEdge& h) const { return tangent.at(h); }
    void set(const HalfEdge& h, double a) { tangent[h] = mod_two_pi(a); }
};

struct PropagationResult {
    bool ok = false;
    TangentAssignment tangents;
    // diagnostics when a fundamental cycle obstructs the assignment
    std::optional<Path> failing_cycle;
    double failing_angle = 0.0;
};

/// Build virtual tangents for a connected edge subset along its spanning
/// forest, then verify every chord's fundamental cycle closes (total turning
/// 0 mod 2pi). The whole assignment is rotated so the seed half-edge carries
/// seed_angle.
inline PropagationResult propagate_directions(const AngledGraph& g,
                                              const std::vector<int>& subgraph, HalfEdge seed,
                                              double seed_angle) {
    if (std::find(subgraph.begin(), subgraph.end(), seed.edge) == subgraph.end())
        throw std::invalid_argument("seed outside subgraph");
    const SpanningForest f = spanning_forest(g, subgraph);
    if (f.roots.size() != 1) throw std::invalid_argument("subgraph is not connected");

    PropagationResult out;
    std::map<int, double> phi;  // junction rotation, relative to the root
    phi[f.roots[0]] = 0.0;
    // assign rotations outward along the tree
    {
        std::vector<int> order{f.roots[0]};
        std::map<int, std::vector<int>> children;
        for (int v : f.subset_vertices)
            if (f.parent_step[v]) children[g.vertex_of(*f.parent_step[v])].push_back(v);
        for (std::size_t k = 0; k < order.size(); ++k) {
            const int u = order[k];
            for (int v : children[u]) {
                const HalfEdge h = *f.parent_step[v];  // traversed u -> v
                const double tau_u = phi[u] + g.direction(h);
                phi[v] = tau_u + kPi - g.direction(h.opposite());
                order.push_back(v);
            }
        }
    }
    for (int v : f.subset_vertices) phi[v] = mod_two_pi(phi[v]);

    // tangents of every subgraph half-edge follow from the vertex rotations
    std::vector<int> edges = subgraph;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    for (int e : edges)
        for (int z = 0; z < 2; ++z) {
            const HalfEdge h{e, z};
            out.tangents.set(h, phi[g.vertex_of(h)] + g.direction(h));
        }

    // chord edges must come out antipodal; a mismatch is a cycle obstruction
    for (int e : f.non_tree_edges) {
        const double t0 = out.tangents.at({e, 0});
        const double t1 = out.tangents.at({e, 1});
        if (!angle_eq(t1, t0 + kPi)) {
            Path c;
            c.closed = true;
            c.steps.push_back({e, 0});
            for (const HalfEdge& h :
                 tree_walk(g, f, g.vertex_of({e, 1}), g.vertex_of({e, 0})))
                c.steps.push_back(h);
            out.failing_cycle = c;
            out.failing_angle = path_angle(g, c);
            return out;
        }
    }

    // rotate everything so the seed half-edge carries the requested angle
    const double rho = seed_angle - out.tangents.at(seed);
    for (auto& [h, t] : out.tangents.tangent) t = mod_two_pi(t + rho);
    for (int v : f.subset_vertices) out.tangents.rotation[v] = mod_two_pi(phi[v] + rho);
    out.ok = true;
    return out;
}

struct SupportRealization {
    std::vector<int> support;          // edges with positive length, ascending
    std::map<int, double> lengths;     // per subgraph edge, max normalized to 1
    std::map<int, Vec2> positions;     // per subgraph vertex
};

namespace detail {

/// Closure rows of the subgraph: two rows per fundamental cycle, expressing
/// sum of signed l_i * (cos, sin)(tangent at end 0) = 0 around the cycle.
inline std::vector<std::vector<double>> closure_rows(const AngledGraph& g,
                                                     const std::vector<int>& edges,
                                                     const std::map<int, int>& col_of,
                                                     const TangentAssignment& tangents) {
    std::vector<std::vector<double>> rows;
    for (const Path& c : fundamental_cycles(g, edges)) {
        std::vector<double> rx(edges.size(), 0.0), ry(edges.size(), 0.0);
        for (const HalfEdge& s : c.steps) {
            const double sign = (s.end == 0) ? 1.0 : -1.0;
            const Vec2 u = unit(tangents.at({s.edge, 0}));
            rx[col_of.at(s.edge)] += sign * u.x;
            ry[col_of.at(s.edge)] += sign * u.y;
        }
        rows.push_back(std::move(rx));
        rows.push_back(std::move(ry));
    }
    return rows;
}

}  // namespace detail

/// Solve the linear feasibility system x_{head} - x_{tail} = l_i * u(tangent),
/// l_i >= 0, and return a relative-interior point: support is exactly the set
/// of edges that can be regular in some straight realization.
inline SupportRealization max_support_realization(const AngledGraph& g,
                                                  const std::vector<int>& subgraph,
                                                  const TangentAssignment& tangents) {
    SupportRealization out;
    std::vector<int> edges = subgraph;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    if (edges.empty()) return out;
    std::map<int, int> col_of;
    for (std::size_t j = 0; j < edges.size(); ++j) col_of[edges[j]] = static_cast<int>(j);

    const auto rows = detail::closure_rows(g, edges, col_of, tangents);
    BoundedSimplex lp(rows, std::vector<double>(edges.size(), 1.0));

    constexpr double kSupportTol = 1e-7;
    std::vector<std::vector<double>> solutions;
    std::vector<double> all_ones(edges.size(), 1.0);
    solutions.push_back(lp.maximize(all_ones));
    // certify edges stuck at zero in the first optimum individually
    for (std::size_t j = 0; j < edges.size(); ++j) {
        if (solutions.front()[j] > kSupportTol) continue;
        std::vector<double> cj(edges.size(), 0.0);
        cj[j] = 1.0;
        double best = 0.0;
        auto x = lp.maximize(cj, &best);
        if (best > kSupportTol) solutions.push_back(std::move(x));
    }

    std::vector<double> rel(edges.size(), 0.0);
    for (const auto& s : solutions)
        for (std::size_t j = 0; j < edges.size(); ++j) rel[j] += s[j] / solutions.size();
    double top = 0.0;
    for (double v : rel) top = std::max(top, v);
    if (top > 0.0)
        for (double& v : rel) v /= top;
    for (std::size_t j = 0; j < edges.size(); ++j) {
        const double l = (rel[j] > kSupportTol) ? rel[j] : 0.0;
        out.lengths[edges[j]] = l;
        if (l > 0.0) out.support.push_back(edges[j]);
    }

    // vertex positions by tree traversal from each component root
    const SpanningForest f = spanning_forest(g, edges);
    for (int r : f.roots) out.positions[r] = Vec2{0.0, 0.0};
    {
        std::vector<int> order = f.roots;
        std::map<int, std::vector<int>> children;
        for (int v : f.subset_vertices)
            if (f.parent_step[v]) children[g.vertex_of(*f.parent_step[v])].push_back(v);
        for (std::size_t k = 0; k < order.size(); ++k) {
            const int u = order[k];
            for (int v : children[u]) {
                const HalfEdge h = *f.parent_step[v];
                const double sign = (h.end == 0) ? 1.0 : -1.0;
                out.positions[v] = out.positions[u] +
                                   sign * out.lengths[h.edge] * unit(tangents.at({h.edge, 0}));
                order.push_back(v);
            }
        }
    }
    return out;
}

enum class StratifyVerdict { Straight, StratifiedStraight, NotStratified };

inline const char* to_string(StratifyVerdict v) {
    switch (v) {
        case StratifyVerdict::Straight: return "Straight";
        case StratifyVerdict::StratifiedStraight: return "StratifiedStraight";
        default: return "NotStratified";
    }
}

struct StrataReport {
    StratifyVerdict verdict = StratifyVerdict::Straight;
    std::vector<std::vector<int>> strata;            // H_0 .. H_{q-1}, nonempty
    std::vector<SupportRealization> realizations;    // Sigma_j per stratum
    int step = 0;                                    // q with H_q empty
    TangentAssignment tangents;
    std::optional<Path> failing_cycle;               // propagation obstruction
    double failing_angle = 0.0;
    std::vector<int> stuck_stratum;                  // nonempty stratum with empty support
};

/// Decide stratified-straightness of an edge subset by greedy maximal-support
/// descent: propagate tangents once on H_0 (or adopt the supplied ones), then
/// peel off the relative-interior support at each level.
inline StrataReport stratify(const AngledGraph& g, const std::vector<int>& subgraph,
                             const TangentAssignment* given_tangents = nullptr) {
    StrataReport rep;
    std::vector<int> current = subgraph;
    std::sort(current.begin(), current.end());
    current.erase(std::unique(current.begin(), current.end()), current.end());
    if (current.empty()) return rep;  // empty subgraph: step 0, vacuously straight

    if (given_tangents) {
        rep.tangents = *given_tangents;
    } else {
        for (const auto& comp : connected_components(g, current)) {
            const HalfEdge seed{comp.front(), 0};
            PropagationResult pr = propagate_directions(g, comp, seed, g.direction(seed));
            if (!pr.ok) {
                rep.verdict = StratifyVerdict::NotStratified;
                rep.failing_cycle = pr.failing_cycle;
                rep.failing_angle = pr.failing_angle;
                return rep;
            }
            rep.tangents.tangent.insert(pr.tangents.tangent.begin(), pr.tangents.tangent.end());
            rep.tangents.rotation.insert(pr.tangents.rotation.begin(),
                                         pr.tangents.rotation.end());
        }
    }

    while (!current.empty()) {
        SupportRealization sr = max_support_realization(g, current, rep.tangents);
        if (sr.support.empty()) {
            rep.verdict = StratifyVerdict::NotStratified;
            rep.stuck_stratum = current;
            return rep;
        }
        rep.strata.push_back(current);
        std::vector<int> next;
        std::set_difference(current.begin(), current.end(), sr.support.begin(),
                            sr.support.end(), std::back_inserter(next));
        rep.realizations.push_back(std::move(sr));
        current = std::move(next);
        ++rep.step;
    }
    rep.verdict = (rep.step <= 1) ? StratifyVerdict::Straight
                                  : StratifyVerdict::StratifiedStraight;
    return rep;
}

struct AngleCheck {
    bool pass = false;
    TangentAssignment tangents;
    std::vector<std::string> reasons;
    std::optional<Path> failing_cycle;
    double failing_angle = 0.0;
};

/// Angle condition for a possibly singular network, in the finite path form:
/// i) real tangents at every junction match the assigned directions up to one
/// rotation per junction; ii) virtual tangents propagate consistently on each
/// singular component; iii) every regular half-edge adjacent to a singular
/// component agrees with the propagated tangents up to the component's single
/// free rotation.
inline AngleCheck check_angle_condition(const Network& n, double tol = kAngleTol) {
    const AngledGraph& g = n.graph();
    AngleCheck out;
    out.pass = true;

    std::vector<bool> is_singular(g.num_edges(), false);
    for (int e : n.singular_edges()) is_singular[e] = true;

    // real outer tangents
    std::map<HalfEdge, double> real;
    for (int e : n.regular_edges())
        for (int z = 0; z < 2; ++z) real[{e, z}] = n.curve(e).outer_tangent(z);

    std::vector<bool> vertex_in_singular(g.num_vertices(), false);

    // singular components: propagate, then pin the free rotation against
    // adjacent regular half-edges
    for (const auto& comp : connected_components(g, n.singular_edges())) {
        const HalfEdge seed{comp.front(), 0};
        PropagationResult pr = propagate_directions(g, comp, seed, g.direction(seed));
        if (!pr.ok) {
            out.pass = false;
            out.failing_cycle = pr.failing_cycle;
            out.failing_angle = pr.failing_angle;
            std::ostringstream msg;
            msg << "singular cycle turning " << pr.failing_angle << " != 0 (mod 2pi)";
            out.reasons.push_back(msg.str());
            return out;
        }
        std::set<int> comp_vertices;
        for (int e : comp)
            for (int z = 0; z < 2; ++z) comp_vertices.insert(g.vertex_of({e, z}));
        for (int v : comp_vertices) vertex_in_singular[v] = true;

        std::optional<double> rho;
        for (int v : comp_vertices) {
            for (const HalfEdge& h : g.incident(v)) {
                if (is_singular[h.edge]) continue;
                const double want = real.at(h) - pr.tangents.rotation.at(v) - g.direction(h);
                if (!rho) {
                    rho = want;
                } else if (!angle_eq(*rho, want, tol)) {
                    out.pass = false;
                    std::ostringstream msg;
                    msg << "open path through collapsed component: half-edge (" << h.end << ","
                        << g.edge_id(h.edge) << ") at vertex '" << g.vertex_label(v)
                        << "' misses the propagated tangents by " << wrap_pi(want - *rho);
                    out.reasons.push_back(msg.str());
                }
            }
        }
        const double offset = rho.value_or(0.0);
        for (const auto& [h, t] : pr.tangents.tangent) out.tangents.set(h, t + offset);
        for (int v : comp_vertices)
            out.tangents.rotation[v] = mod_two_pi(pr.tangents.rotation.at(v) + offset);
    }

    // junctions not touching any singular component: plain per-junction check
    for (int v = 0; v < g.num_vertices(); ++v) {
        if (vertex_in_singular[v]) continue;
        std::optional<double> phi;
        for (const HalfEdge& h : g.incident(v)) {
            const double want = real.at(h) - g.direction(h);
            if (!phi) {
                phi = want;
            } else if (!angle_eq(*phi, want, tol)) {
                out.pass = false;
                std::ostringstream msg;
                msg << "junction '" << g.vertex_label(v) << "': half-edge (" << h.end << ","
                    << g.edge_id(h.edge) << ") breaks the assigned angles by "
                    << wrap_pi(want - *phi);
                out.reasons.push_back(msg.str());
            }
        }
        if (phi) out.tangents.rotation[v] = mod_two_pi(*phi);
    }
    for (const auto& [h, t] : real) out.tangents.set(h, t);
    return out;
}

enum class NetworkClass { Regular, Degenerate, Inadmissible };

inline const char* to_string(NetworkClass k) {
    switch (k) {
        case NetworkClass::Regular: return "Regular";
        case NetworkClass::Degenerate: return "Degenerate";
        default: return "Inadmissible";
    }
}

struct Verdict {
    NetworkClass kind = NetworkClass::Inadmissible;
    std::vector<std::string> reasons;
    std::optional<TangentAssignment> tangents;
    std::optional<StrataReport> strata;
};

/// Regular / Degenerate / Inadmissible classification: angle condition plus
/// stratified-straightness of the singular part, tangents shared between the
/// two checks.
inline Verdict classify_network(const Network& n) {
    Verdict v;
    AngleCheck ac = check_angle_condition(n);
    if (!ac.pass) {
        v.kind = NetworkClass::Inadmissible;
        v.reasons = ac.reasons;
        return v;
    }
    v.tangents = ac.tangents;
    const std::vector<int> sing = n.singular_edges();
    if (sing.empty()) {
        v.kind = NetworkClass::Regular;
        return v;
    }
    StrataReport sr = stratify(n.graph(), sing, &ac.tangents);
    if (sr.verdict == StratifyVerdict::NotStratified) {
        v.kind = NetworkClass::Inadmissible;
        if (!sr.stuck_stratum.empty()) {
            std::ostringstream msg;
            msg << "singular part not stratified-straight: stratum {";
            for (std::size_t k = 0; k < sr.stuck_stratum.size(); ++k)
                msg << (k ? "," : "") << n.graph().edge_id(sr.stuck_stratum[k]);
            msg << "} admits no straight realization with positive length";
            v.reasons.push_back(msg.str());
        } else {
            v.reasons.push_back("singular component fails the cycle turning condition");
        }
        v.strata = std::move(sr);
        return v;
    }
    v.kind = NetworkClass::Degenerate;
    v.strata = std::move(sr);
    return v;
}

struct RelaxedEnergy {
    bool finite = false;
    double value = 0.0;  // meaningful when finite
    Verdict verdict;
};

/// Relaxed functional: the extended elastic energy on regular/degenerate
/// networks, +infinity marker otherwise.
inline RelaxedEnergy relaxed_energy(const Network& n, double alpha = 1.0, double beta = 1.0) {
    RelaxedEnergy out;
    out.verdict = classify_network(n);
    if (out.verdict.kind != NetworkClass::Inadmissible) {
        out.finite = true;
        out.value = elastic_energy(n, alpha, beta).total;
    }
    return out;
}

enum class SquareAngleVerdict { Straight, StratifiedNotStraight, NotStratified };

inline const char* to_string(SquareAngleVerdict v) {
    switch (v) {
        case SquareAngleVerdict::Straight: return "Straight";
        case SquareAngleVerdict::StratifiedNotStraight: return "StratifiedNotStraight";
        default: return "NotStratified";
    }
}

struct SquareAngleResult {
    SquareAngleVerdict verdict = SquareAngleVerdict::Straight;
    std::optional<Path> witness;  // forbidden cycle through a singular edge
    StrataReport strata;
};

/// Right-angle straightness criterion for subgraphs whose junctions have
/// order <= 4 with distinct directions at multiples of pi/2: the subgraph is
/// straight iff no singular edge of the first stratum starts a closed
/// non-backtracking walk whose intermediate steps all avoid the direction
/// opposite to the starting one (in the canonical assignment).
inline SquareAngleResult square_angle_straightness(const AngledGraph& g,
                                                   const std::vector<int>& subgraph) {
    std::vector<int> edges = subgraph;
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    // precondition: order <= 4, distinct directions, right-angle fan
    {
        std::map<int, std::vector<HalfEdge>> at_vertex;
        for (int e : edges)
            for (int z = 0; z < 2; ++z) at_vertex[g.vertex_of({e, z})].push_back({e, z});
        for (const auto& [v, halves] : at_vertex) {
            if (halves.size() > 4)
                throw std::invalid_argument("square-angle mode: junction '" +
                                            g.vertex_label(v) + "' has order > 4");
            for (std::size_t a = 0; a < halves.size(); ++a)
                for (std::size_t b = a + 1; b < halves.size(); ++b) {
                    const double diff =
                        ccw_angle(g.direction(halves[a]), g.direction(halves[b]));
                    const double quarter = diff / (kPi / 2.0);
                    if (std::abs(quarter - std::round(quarter)) > 1e-6)
                        throw std::invalid_argument(
                            "square-angle mode: directions at junction '" + g.vertex_label(v) +
                            "' are not multiples of pi/2 apart");
                    if (angle_eq(diff, 0.0))
                        throw std::invalid_argument(
                            "square-angle mode: repeated direction at junction '" +
                            g.vertex_label(v) + "'");
                }
        }
    }

    SquareAngleResult out;
    out.strata = stratify(g, edges);
    if (out.strata.verdict == StratifyVerdict::NotStratified) {
        out.verdict = SquareAngleVerdict::NotStratified;
        return out;
    }
    if (out.strata.step <= 1) {
        out.verdict = SquareAngleVerdict::Straight;
        return out;
    }

    const TangentAssignment& tau = out.strata.tangents;
    const std::vector<int>& first_singular = out.strata.strata[1];

    // walk states are half-edge traversals; successors respect incidence and
    // never immediately backtrack
    std::map<int, std::vector<HalfEdge>> starts_at;
    for (int e : edges)
        for (int z = 0; z < 2; ++z) starts_at[g.vertex_of({e, z})].push_back({e, z});

    for (int e0 : first_singular) {
        for (int z0 = 0; z0 < 2; ++z0) {
            const HalfEdge start{e0, z0};
            const double forbidden = tau.at(start) + kPi;
            const int home = g.vertex_of(start);

            std::map<HalfEdge, HalfEdge> parent;
            std::vector<HalfEdge> frontier{start};
            std::set<HalfEdge> seen{start};
            std::optional<Path> witness;
            while (!frontier.empty() && !witness) {
                std::vector<HalfEdge> next;
                for (const HalfEdge& u : frontier) {
                    const int at = g.vertex_of(u.opposite());
                    for (const HalfEdge& t : starts_at[at]) {
                        if (t == u.opposite()) continue;           // no backtracking
                        if (t.opposite() == start) continue;       // no wrap backtrack
                        if (g.vertex_of(t.opposite()) == home) {   // closing step, any direction
                            Path c;
                            c.closed = true;
                            std::vector<HalfEdge> chain{t, u};
                            HalfEdge w = u;
                            while (!(w == start)) {
                                w = parent.at(w);
                                chain.push_back(w);
                            }
                            for (auto it = chain.rbegin(); it != chain.rend(); ++it)
                                c.steps.push_back(*it);
                            witness = std::move(c);
                            break;
                        }
                        if (angle_eq(tau.at(t), forbidden)) continue;  // never goes left
                        if (seen.insert(t).second) {
                            parent[t] = u;
                            next.push_back(t);
                        }
                    }
                    if (witness) break;
                }
                frontier = std::move(next);
            }
            if (witness) {
                out.verdict = SquareAngleVerdict::StratifiedNotStraight;
                out.witness = std::move(witness);
                return out;
            }
        }
    }
    out.verdict = SquareAngleVerdict::Straight;
    return out;
}

}  // namespace elnet

#endif
