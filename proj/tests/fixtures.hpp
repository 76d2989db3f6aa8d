// Shared graph and network fixtures for the test suites: the named example
// topologies with concrete direction sets (only within-junction relative
// angles matter; each junction's rotation is fixed so directions equal the
// reference tangent assignment).
#ifndef ELNET_TEST_FIXTURES_HPP
#define ELNET_TEST_FIXTURES_HPP

#include <cmath>
#include <vector>

#include "elnet/analysis.hpp"
#include "elnet/classify.hpp"
#include "elnet/curve.hpp"
#include "elnet/graph.hpp"
#include "elnet/network.hpp"

namespace fixtures {

using namespace elnet;

/// Three edges between two triple junctions, 2*pi/3 fans at both ends.
inline AngledGraph theta_graph() {
    return build_graph({{"a", "b", 0.0, kPi, "E1"},
                        {"a", "b", 2.0 * kPi / 3.0, kPi / 3.0, "E2"},
                        {"a", "b", 4.0 * kPi / 3.0, 5.0 * kPi / 3.0, "E3"}});
}

/// Regular round realization of the theta graph: a straight chord and two
/// symmetric arcs meeting it at 2*pi/3, junctions at (0,0) and (sqrt(3),0).
inline Network theta_network(int M = 64) {
    const AngledGraph g = theta_graph();
    const Vec2 a{0.0, 0.0}, b{std::sqrt(3.0), 0.0};
    std::vector<DiscreteCurve> curves;
    curves.push_back(make_segment(a, b, M));
    curves.push_back(make_arc(a, 2.0 * kPi / 3.0, -1.0, 4.0 * kPi / 3.0, M));
    curves.push_back(make_arc(a, 4.0 * kPi / 3.0, 1.0, 4.0 * kPi / 3.0, M));
    return Network(g, std::move(curves));
}

/// Five-edge graph whose triangle {E3,E4,E5} carries angles (0, pi/2, pi/2):
/// stratified straight of step 2 on the triangle, step 3 from the whole graph.
inline AngledGraph two_strata_graph() {
    return build_graph({{"A", "C", 0.0, kPi, "E1"},
                        {"A", "B", 0.0, kPi, "E2"},
                        {"C", "B", 3.0 * kPi / 2.0, kPi / 2.0, "E3"},
                        {"C", "D", 3.0 * kPi / 2.0, kPi / 2.0, "E4"},
                        {"B", "D", 0.0, kPi, "E5"}});
}

/// Six-edge graph with a 4-cycle through four 2*pi/3 junctions (cycle turns
/// 5pi/3, pi/3, 5pi/3, pi/3, so the collapsed cycle satisfies the angle
/// condition) and two outer petal edges.
inline AngledGraph collapsed_cycle_graph() {
    return build_graph({{"a", "b", 0.0, kPi, "E1"},
                        {"b", "c", 5.0 * kPi / 3.0, 2.0 * kPi / 3.0, "E2"},
                        {"c", "d", 0.0, kPi, "E3"},
                        {"d", "a", 5.0 * kPi / 3.0, 2.0 * kPi / 3.0, "E4"},
                        {"b", "c", kPi / 3.0, 4.0 * kPi / 3.0, "E5"},
                        {"d", "a", kPi / 3.0, 4.0 * kPi / 3.0, "E6"}});
}

/// The collapsed-cycle network: E1..E4 at the origin, the petals realized as
/// full circles with the matching exact tangents.
inline Network collapsed_cycle_network(int M = 96) {
    const AngledGraph g = collapsed_cycle_graph();
    std::vector<DiscreteCurve> curves;
    for (int e = 0; e < 4; ++e) curves.push_back(DiscreteCurve::singular_at({0.0, 0.0}));
    curves.push_back(make_arc({0.0, 0.0}, kPi / 3.0, 1.0, kTwoPi, M));
    curves.push_back(make_arc({0.0, 0.0}, kPi / 3.0, 1.0 / 1.5, kTwoPi * 1.5, M));
    return Network(g, std::move(curves));
}

/// Four edges tracing the overlapping rectangle: right-angle junctions of
/// order two; stratified straight (step 2) but not straight.
inline AngledGraph overlap_rectangle_graph() {
    return build_graph({{"a", "b", 0.0, kPi, "E1"},
                        {"b", "c", kPi / 2.0, 3.0 * kPi / 2.0, "E2"},
                        {"c", "d", 0.0, kPi, "E3"},
                        {"d", "a", 3.0 * kPi / 2.0, kPi / 2.0, "E4"}});
}

/// Plain square cycle: straight.
inline AngledGraph square_graph() {
    return build_graph({{"a", "b", 0.0, kPi, "E1"},
                        {"b", "c", kPi / 2.0, 3.0 * kPi / 2.0, "E2"},
                        {"c", "d", kPi, 0.0, "E3"},
                        {"d", "a", 3.0 * kPi / 2.0, kPi / 2.0, "E4"}});
}

/// Five-edge graph whose triangle {E1,E2,E3} has angles (0, pi/2, pi/2) and
/// two regular continuation edges; the collapsed triangle is the step-2
/// degenerate limit.
inline AngledGraph fan_limit_graph() {
    const double t = kPi / 2.0;
    return build_graph({{"P", "Q", t, t + kPi, "E1"},
                        {"P", "R", t, t + kPi, "E2"},
                        {"Q", "R", t + 3.0 * kPi / 2.0, t + kPi / 2.0, "E3"},
                        {"Q", "S", t, t + kPi, "E4"},
                        {"R", "T", t, t + kPi, "E5"}});
}

inline Network fan_limit_degenerate_network(int M = 64) {
    const AngledGraph g = fan_limit_graph();
    std::vector<DiscreteCurve> curves;
    for (int e = 0; e < 3; ++e) curves.push_back(DiscreteCurve::singular_at({0.0, 0.0}));
    curves.push_back(make_segment({0.0, 0.0}, {0.0, 2.0}, M));
    curves.push_back(make_segment({0.0, 0.0}, {0.0, 3.0}, M));
    return Network(g, std::move(curves));
}

/// Two petal loops joined by a middle edge, 2*pi/3 fans everywhere; the
/// relaxed minimizer collapses the middle edge.
inline AngledGraph double_petal_graph() {
    return build_graph({{"A", "A", kPi / 3.0, kPi, "E1"},
                        {"A", "B", 5.0 * kPi / 3.0, 2.0 * kPi / 3.0, "E2"},
                        {"B", "B", 0.0, 4.0 * kPi / 3.0, "E3"}});
}

/// The eight-edge quotient example: seven junctions, one of order four.
inline AngledGraph eight_edge_graph() {
    auto E = [](const char* v0, const char* v1, const char* id) {
        return EdgeSpec{v0, v1, 0.0, 0.0, id};
    };
    return build_graph({E("V1", "V2", "E1"), E("V1", "V3", "E2"), E("V2", "V4", "E3"),
                        E("V3", "V4", "E4"), E("V5", "V3", "E5"), E("V5", "V6", "E6"),
                        E("V3", "V7", "E7"), E("V6", "V7", "E8")});
}

/// Triangle with junction turns (pi/3, pi/3, 5pi/3): total turning pi/3, so
/// no consistent virtual tangents exist. Pendant edges raise the junction
/// order to 3.
inline AngledGraph bad_triangle_graph() {
    return build_graph({{"u", "v", 0.0, kPi, "E1"},
                        {"v", "w", kPi / 3.0, 4.0 * kPi / 3.0, "E2"},
                        {"w", "u", 2.0 * kPi / 3.0, 4.0 * kPi / 3.0, "E3"},
                        {"u", "p1", kPi / 2.0, 0.0, "E4"},
                        {"v", "p2", kPi / 2.0, 0.0, "E5"},
                        {"w", "p3", kPi / 2.0, 0.0, "E6"}});
}

/// 4-cycle whose propagated headings (0, pi/3, 2pi/3, pi/3) only combine to
/// zero with all lengths zero: consistent angles, empty support.
inline AngledGraph half_plane_cycle_graph() {
    const double h1 = 0.0, h2 = kPi / 3.0, h3 = 2.0 * kPi / 3.0, h4 = kPi / 3.0;
    return build_graph({{"v1", "v2", h1, h1 + kPi, "E1"},
                        {"v2", "v3", h2, h2 + kPi, "E2"},
                        {"v3", "v4", h3, h3 + kPi, "E3"},
                        {"v4", "v1", h4, h4 + kPi, "E4"}});
}

inline std::vector<int> all_edges(const AngledGraph& g) {
    std::vector<int> e(g.num_edges());
    for (int i = 0; i < g.num_edges(); ++i) e[i] = i;
    return e;
}

/// Wiggly smooth test curve built from a finite tangent-angle series.
inline DiscreteCurve random_smooth_curve(unsigned seed, int M = 256) {
    std::vector<double> theta(M + 1);
    const double a1 = 0.3 + 0.5 * ((seed * 2654435761u >> 8) % 1000) / 1000.0;
    const double a2 = 0.2 + 0.4 * ((seed * 97u + 13u) % 997) / 997.0;
    const double a3 = 0.1 + 0.2 * ((seed * 31u + 7u) % 991) / 991.0;
    const double base = kTwoPi * ((seed * 131u) % 977) / 977.0;
    for (int j = 0; j <= M; ++j) {
        const double t = static_cast<double>(j) / M;
        theta[j] = base + a1 * std::sin(kTwoPi * t) + a2 * std::cos(2.0 * kTwoPi * t) +
                   a3 * std::sin(3.0 * kTwoPi * t + 0.5);
    }
    const double len = 0.5 + 2.0 * ((seed * 193u + 29u) % 983) / 983.0;
    return curve_from_tangent_angles({0.0, 0.0}, theta, len);
}

}  // namespace fixtures

#endif
