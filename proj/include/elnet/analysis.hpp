#ifndef ELNET_ANALYSIS_HPP
#define ELNET_ANALYSIS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "elnet/classify.hpp"
#include "elnet/curve.hpp"
#include "elnet/network.hpp"

namespace elnet {

struct EdgeResidual {
    int edge = 0;
    double sup = 0.0;
    double l2 = 0.0;
};

struct JunctionResidual {
    int vertex = 0;
    double curvature_balance = 0.0;  // |sum_in k - sum_out k|
    double force_balance = 0.0;      // |sum_in F - sum_out F|, F = 2 ds_k nu + k^2 tau - tau
};

struct ELReport {
    std::vector<EdgeResidual> edges;
    std::vector<JunctionResidual> junctions;
    std::vector<int> skipped_singular;
    double interior_sup = 0.0;
    double junction_sup = 0.0;
};

namespace detail {

/// One-sided endpoint values of the discrete curvature and its derivative,
/// second order, from the genuine interior nodes.
struct EndpointCurvature {
    double k = 0.0;
    double dk = 0.0;
};

inline EndpointCurvature endpoint_curvature(const std::vector<double>& k, double h, int z) {
    const std::size_t n = k.size();
    if (n < 5) throw std::invalid_argument("curve too coarse for endpoint stencils");
    EndpointCurvature out;
    if (z == 0) {
        const double f1 = k[1], f2 = k[2], f3 = k[3];
        out.k = 2.0 * f1 - f2;
        out.dk = (-5.0 * f1 + 8.0 * f2 - 3.0 * f3) / (2.0 * h);
    } else {
        const double f1 = k[n - 2], f2 = k[n - 3], f3 = k[n - 4];
        out.k = 2.0 * f1 - f2;
        out.dk = -(-5.0 * f1 + 8.0 * f2 - 3.0 * f3) / (2.0 * h);
    }
    return out;
}

}  // namespace detail

/// Residuals of the critical-point system: interior 2 k'' + k^3 - k per curve
/// and the two junction balance conditions, with curves oriented as stored
/// (end 1 counts as incoming, end 0 as outgoing).
inline ELReport el_residual(const Network& n) {
    ELReport rep;
    const AngledGraph& g = n.graph();
    std::map<int, std::vector<double>> ks;
    for (int e = 0; e < g.num_edges(); ++e) {
        const DiscreteCurve& c = n.curve(e);
        if (c.is_singular()) {
            rep.skipped_singular.push_back(e);
            continue;
        }
        const double h = c.ds();
        const std::vector<double> k = curvature(c);
        ks[e] = k;
        EdgeResidual er;
        er.edge = e;
        double sum = 0.0;
        int count = 0;
        for (std::size_t j = 2; j + 2 < k.size(); ++j) {
            const double kpp = (k[j + 1] - 2.0 * k[j] + k[j - 1]) / (h * h);
            const double r = std::abs(2.0 * kpp + k[j] * k[j] * k[j] - k[j]);
            er.sup = std::max(er.sup, r);
            sum += r * r;
            ++count;
        }
        er.l2 = count ? std::sqrt(h * sum) : 0.0;
        rep.interior_sup = std::max(rep.interior_sup, er.sup);
        rep.edges.push_back(er);
    }

    for (int v = 0; v < g.num_vertices(); ++v) {
        JunctionResidual jr;
        jr.vertex = v;
        double k_in = 0.0, k_out = 0.0;
        Vec2 f_in{0.0, 0.0}, f_out{0.0, 0.0};
        bool any = false;
        for (const HalfEdge& h : g.incident(v)) {
            const DiscreteCurve& c = n.curve(h.edge);
            if (c.is_singular()) continue;
            any = true;
            const auto ec = detail::endpoint_curvature(ks.at(h.edge), c.ds(), h.end);
            const Vec2 tau = unit(c.end_tangent(h.end));
            const Vec2 nu = perp(tau);
            const Vec2 F = 2.0 * ec.dk * nu + (ec.k * ec.k - 1.0) * tau;
            if (h.end == 1) {
                k_in += ec.k;
                f_in += F;
            } else {
                k_out += ec.k;
                f_out += F;
            }
        }
        if (!any) continue;
        jr.curvature_balance = std::abs(k_in - k_out);
        jr.force_balance = (f_in - f_out).norm();
        rep.junction_sup =
            std::max({rep.junction_sup, jr.curvature_balance, jr.force_balance});
        rep.junctions.push_back(jr);
    }
    return rep;
}

/// Turning-defect lower bound for a closed immersed cycle:
/// max(0, 2*pi - sum |turn|)^2 / L.
inline double lower_bound_cycle(const std::vector<double>& junction_turns, double length) {
    if (!(length > 0.0)) throw std::invalid_argument("cycle length must be positive");
    double turn_sum = 0.0;
    for (double t : junction_turns) turn_sum += std::abs(t);
    const double gap = std::max(0.0, kTwoPi - turn_sum);
    return gap * gap / length;
}

/// Twice the total absolute turning of the given curves: a lower bound for
/// their elastic energy (the a^2/L + L >= 2a chain).
inline double curvature_energy_bound(const std::vector<DiscreteCurve>& curves) {
    double sum = 0.0;
    for (const auto& c : curves)
        if (!c.is_singular()) sum += total_curvature(c);
    return 2.0 * sum;
}

/// Track-change connector: two congruent unit-radius arcs joining the origin
/// (tangent e1) to (2 sin t, h) with tangent e1, t = arccos(1 - h/2).
/// Endpoints and tangents are exact; the energy is 4t up to quadrature error.
inline DiscreteCurve make_train_tracks(double h, int M = 256) {
    if (!(h > 0.0) || h > 2.0) throw std::invalid_argument("offset must lie in (0, 2]");
    const double theta = std::acos(1.0 - 0.5 * h);
    const int m = std::max(2, M / 2);
    DiscreteCurve a1 = make_arc({0.0, 0.0}, 0.0, 1.0, theta, m);
    DiscreteCurve a2 = make_arc(a1.back(), theta, -1.0, theta, m);
    std::vector<Vec2> pts = a1.points();
    pts.insert(pts.end(), a2.points().begin() + 1, a2.points().end());
    // exact endpoint regardless of roundoff drift across the seam
    pts.back() = Vec2{2.0 * std::sin(theta), h};
    DiscreteCurve c = DiscreteCurve::from_points(std::move(pts), 2.0 * theta);
    c.set_end_tangent(0, 0.0);
    c.set_end_tangent(1, 0.0);
    return c;
}

namespace detail {

/// Generalized track piece from `start` (tangent `heading`) covering forward
/// distance `advance` and lateral offset `lateral`, ending with the same
/// heading. Uses the unit-radius construction when it fits, otherwise shrinks
/// the radius to keep the base inside the advance budget.
inline std::vector<Vec2> track_points(const Vec2& start, double heading, double advance,
                                      double lateral, int samples_per_arc) {
    const Vec2 u = unit(heading);
    std::vector<Vec2> pts;
    if (std::abs(lateral) < 1e-13) {
        pts = {start, start + advance * u};
        return pts;
    }
    const double w = std::abs(lateral);
    const double sgn = lateral > 0.0 ? 1.0 : -1.0;
    double theta, radius;
    if (w < 2.0 && std::sqrt(std::max(0.0, w * (4.0 - w))) <= 0.8 * advance) {
        theta = std::acos(1.0 - 0.5 * w);  // unit-radius construction
        radius = 1.0;
    } else {
        const double base = 0.5 * advance;
        theta = 2.0 * std::atan2(w, base);
        radius = 0.5 * base / std::sin(theta);
    }
    const double base = 2.0 * radius * std::sin(theta);
    if (base > advance + 1e-12)
        throw std::logic_error("track connector does not fit the straight run");
    DiscreteCurve a1 =
        make_arc(start, heading, sgn / radius, radius * theta, samples_per_arc);
    DiscreteCurve a2 = make_arc(a1.back(), heading + sgn * theta, -sgn / radius,
                                radius * theta, samples_per_arc);
    pts = a1.points();
    pts.insert(pts.end(), a2.points().begin() + 1, a2.points().end());
    const Vec2 land = start + base * u + lateral * perp(u);
    pts.back() = land;
    if (advance - base > 1e-12) pts.push_back(start + advance * u + lateral * perp(u));
    return pts;
}

/// Length of the straight run at the start of a curve (collinear prefix).
inline double straight_run_length(const DiscreteCurve& c) {
    const auto& p = c.points();
    const Vec2 u = unit(c.end_tangent(0));
    const Vec2 nu = perp(u);
    double run = 0.0;
    for (std::size_t j = 1; j < p.size(); ++j) {
        const Vec2 d = p[j] - p[0];
        if (std::abs(d.dot(nu)) > 1e-9 * std::max(1.0, d.norm())) break;
        run = d.dot(u);
    }
    return std::max(0.0, run);
}

/// Move the start of a curve to `new_start`, bridging the displacement inside
/// the curve's initial straight run with a track connector.
inline DiscreteCurve splice_start(const DiscreteCurve& c, const Vec2& new_start) {
    const auto& p = c.points();
    const double t0 = c.end_tangent(0);
    const Vec2 u = unit(t0);
    const Vec2 nu = perp(u);
    // last sample still on the initial straight run
    std::size_t j_run = 0;
    double best = 0.0;
    for (std::size_t j = 1; j < p.size(); ++j) {
        const Vec2 d = p[j] - p[0];
        if (std::abs(d.dot(nu)) > 1e-9 * std::max(1.0, d.norm())) break;
        if (d.dot(u) <= best) break;
        best = d.dot(u);
        j_run = j;
    }
    if (j_run == 0) throw std::logic_error("splice target curve has no straight run");
    const Vec2 q = p[j_run];
    const Vec2 gap = q - new_start;
    const double advance = gap.dot(u);
    const double lateral = gap.dot(nu);
    if (!(advance > 0.0)) throw std::logic_error("splice displacement exceeds the run");
    std::vector<Vec2> pts = track_points(new_start, t0, advance, lateral, 48);
    for (std::size_t j = j_run + 1; j < p.size(); ++j) pts.push_back(p[j]);
    for (std::size_t j = 1; j < pts.size();) {
        if ((pts[j] - pts[j - 1]).norm() < 1e-14)
            pts.erase(pts.begin() + static_cast<long>(j));
        else
            ++j;
    }
    DiscreteCurve out = DiscreteCurve::from_points(std::move(pts));
    out = resample_constant_speed(out, std::max(16, c.segments()));
    out.set_end_tangent(0, t0);
    out.set_end_tangent(1, c.end_tangent(1));
    return out;
}

inline DiscreteCurve splice_end(const DiscreteCurve& c, int z, const Vec2& target) {
    if (z == 0) return splice_start(c, target);
    return splice_start(c.reversed(), target).reversed();
}

}  // namespace detail

/// Straighten the start of a curve: prepend a straight run of length at most
/// eps in the initial tangent direction, blending the displaced body with a
/// C^2 cutoff over the first half of the parameter.
inline DiscreteCurve straighten_endpoint(const DiscreteCurve& c, double eps) {
    if (c.is_singular()) throw std::invalid_argument("singular curve");
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    const double delta = std::min(0.5 * eps, 0.125 * c.length());
    const double run = detail::straight_run_length(c);
    if (run >= delta) return c;  // already straight at the start

    // refine smoothly so the new run spans several samples
    DiscreteCurve base = c;
    if (base.ds() > delta / 6.0) {
        const int per = std::min(512, static_cast<int>(std::ceil(6.0 * base.ds() / delta)));
        base = upsample_smooth(base, per);
    }
    const double t0 = base.end_tangent(0);
    const Vec2 u = unit(t0);
    const auto& p = base.points();
    const int M = base.segments();
    auto cutoff = [](double t) {
        if (t <= 0.2) return 1.0;
        if (t >= 0.95) return 0.0;
        const double s = (t - 0.2) / 0.75;
        return 1.0 - (10.0 * s * s * s - 15.0 * s * s * s * s + 6.0 * s * s * s * s * s);
    };
    std::vector<Vec2> pts;
    const int m0 = std::max(2, static_cast<int>(std::ceil(delta / base.ds())));
    for (int j = 0; j < m0; ++j)
        pts.push_back(p[0] + u * (delta * static_cast<double>(j) / m0));
    for (int j = 0; j <= M; ++j)
        pts.push_back(p[j] + u * (delta * cutoff(static_cast<double>(j) / M)));
    for (std::size_t j = 1; j < pts.size();) {
        if ((pts[j] - pts[j - 1]).norm() < 1e-14)
            pts.erase(pts.begin() + static_cast<long>(j));
        else
            ++j;
    }
    DiscreteCurve out = DiscreteCurve::from_points(std::move(pts));
    out = resample_constant_speed(out, M + m0);
    out.set_end_tangent(0, t0);
    out.set_end_tangent(1, c.end_tangent(1));
    return out;
}

inline DiscreteCurve straighten_endpoint(const DiscreteCurve& c, int z, double eps) {
    if (z == 0) return straighten_endpoint(c, eps);
    return straighten_endpoint(c.reversed(), eps).reversed();
}

/// Regularize a degenerate network: realize each stratum of the singular part
/// at a geometrically separated scale (the next level fits inside the cube of
/// the previous straight-run length), then splice the adjacent regular curves
/// with track connectors inside their straightened end runs.
inline Network desingularize(const Network& n, double eps) {
    if (!(eps > 0.0) || eps >= 0.5) throw std::invalid_argument("eps must lie in (0, 0.5)");
    Verdict v = classify_network(n);
    if (v.kind != NetworkClass::Degenerate)
        throw std::invalid_argument("desingularize needs a degenerate network");
    const StrataReport& sr = *v.strata;
    const AngledGraph& g = n.graph();

    std::vector<bool> singular(g.num_edges(), false);
    for (int e : n.singular_edges()) singular[e] = true;
    std::vector<bool> vertex_singular(g.num_vertices(), false);
    for (int e = 0; e < g.num_edges(); ++e)
        if (singular[e])
            for (int z = 0; z < 2; ++z) vertex_singular[g.vertex_of({e, z})] = true;

    // regular curves straightened at every end that touches the singular part
    std::vector<std::optional<DiscreteCurve>> curves(g.num_edges());
    double min_run = eps;
    for (int e = 0; e < g.num_edges(); ++e) {
        if (singular[e]) continue;
        DiscreteCurve c = n.curve(e);
        for (int z = 0; z < 2; ++z)
            if (vertex_singular[g.vertex_of({e, z})]) c = straighten_endpoint(c, z, eps);
        for (int z = 0; z < 2; ++z)
            if (vertex_singular[g.vertex_of({e, z})]) {
                const DiscreteCurve probe = (z == 0) ? c : c.reversed();
                min_run = std::min(min_run, detail::straight_run_length(probe));
            }
        curves[e] = std::move(c);
    }

    // pass 1: final vertex positions, level by level; each component is
    // anchored at its current collapse point and scaled so its diameter stays
    // inside the cube of the finest length placed so far
    std::map<int, Vec2> pos;
    for (int e = 0; e < g.num_edges(); ++e)
        if (singular[e])
            for (int z = 0; z < 2; ++z) pos[g.vertex_of({e, z})] = n.curve(e).front();

    const double safety = 0.25;
    double allowed_diam = std::min(std::pow(safety * min_run, 3.0), eps * eps * eps);
    std::vector<double> segment_length(g.num_edges(), 0.0);

    for (std::size_t level = 0; level < sr.strata.size(); ++level) {
        const SupportRealization& real = sr.realizations[level];
        double min_segment = std::numeric_limits<double>::infinity();
        for (const auto& comp : connected_components(g, sr.strata[level])) {
            std::vector<int> comp_vertices;
            for (int e : comp)
                for (int z = 0; z < 2; ++z) comp_vertices.push_back(g.vertex_of({e, z}));
            std::sort(comp_vertices.begin(), comp_vertices.end());
            comp_vertices.erase(std::unique(comp_vertices.begin(), comp_vertices.end()),
                                comp_vertices.end());
            Vec2 centroid{0.0, 0.0};
            for (int v2 : comp_vertices) centroid += real.positions.at(v2);
            centroid = centroid / static_cast<double>(comp_vertices.size());
            double diam = 0.0;
            for (std::size_t a = 0; a < comp_vertices.size(); ++a)
                for (std::size_t b = a + 1; b < comp_vertices.size(); ++b)
                    diam = std::max(diam, (real.positions.at(comp_vertices[a]) -
                                           real.positions.at(comp_vertices[b]))
                                              .norm());
            if (diam <= 0.0) continue;
            const double scale = allowed_diam / diam;
            const Vec2 anchor = pos.at(comp_vertices.front());
            for (int v2 : comp_vertices)
                pos[v2] = anchor + scale * (real.positions.at(v2) - centroid);
            for (int e : comp) {
                const double len = scale * real.lengths.at(e);
                if (len > 0.0) {
                    segment_length[e] = len;
                    min_segment = std::min(min_segment, len);
                }
            }
        }
        if (std::isfinite(min_segment))
            allowed_diam = std::min(allowed_diam, std::pow(safety * min_segment, 3.0));
    }

    // pass 2: realize the singular edges as segments between final positions
    // (tangent hints carry the propagated angles) and splice each regular
    // curve end once onto its final junction position
    for (int e = 0; e < g.num_edges(); ++e) {
        if (!singular[e]) continue;
        if (segment_length[e] <= 0.0) throw std::logic_error("edge left unrealized");
        DiscreteCurve seg =
            make_segment(pos.at(g.vertex_of({e, 0})), pos.at(g.vertex_of({e, 1})), 32);
        const double forward = sr.tangents.at({e, 0});
        seg.set_end_tangent(0, forward);
        seg.set_end_tangent(1, forward);
        curves[e] = std::move(seg);
    }
    for (int e = 0; e < g.num_edges(); ++e) {
        if (singular[e]) continue;
        for (int z = 0; z < 2; ++z) {
            const int vz = g.vertex_of({e, z});
            if (!vertex_singular[vz]) continue;
            if ((curves[e]->endpoint(z) - pos.at(vz)).norm() < 1e-15) continue;
            curves[e] = detail::splice_end(*curves[e], z, pos.at(vz));
        }
    }

    std::vector<DiscreteCurve> out;
    for (int e = 0; e < g.num_edges(); ++e) out.push_back(std::move(*curves[e]));
    return Network(g, std::move(out));
}

/// The three collapsing arcs of the shrinking-fan family: a central arc of
/// radius r and length 2*a*r flanked by two arcs of radius
/// R = sin(pi/2 - a)/sin(a) * r and length a*R, chained end to end.
inline std::array<DiscreteCurve, 3> make_collapsing_fan(double r, double a, int M = 256) {
    if (!(r > 0.0)) throw std::invalid_argument("radius must be positive");
    if (!(a > 0.0) || !(a < kPi / 2.0)) throw std::invalid_argument("half-angle out of range");
    const double R = std::sin(kPi / 2.0 - a) / std::sin(a) * r;
    DiscreteCurve g1 = make_arc({0.0, 0.0}, 0.0, 1.0 / R, a * R, M);
    DiscreteCurve g3 = make_arc(g1.back(), g1.end_tangent(1) + kPi / 2.0, -1.0 / r,
                                2.0 * a * r, M);
    DiscreteCurve g2 = make_arc(g3.back(), g3.end_tangent(1) + kPi / 2.0, 1.0 / R, a * R, M);
    return {std::move(g1), std::move(g2), std::move(g3)};
}

}  // namespace elnet

#endif
