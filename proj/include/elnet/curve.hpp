#ifndef ELNET_CURVE_HPP
#define ELNET_CURVE_HPP

#include <array>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "elnet/angle.hpp"
#include "elnet/vec2.hpp"

namespace elnet {

/// Constant-speed sampled planar curve, or a curve collapsed to a point.
///
/// A regular curve stores M+1 points sampled at parameter j/M of the
/// constant-speed parametrization, together with the declared length l, so
/// the arc step between samples is ds = l/M. Euclidean distances between
/// consecutive points agree with ds up to the O(M^-2) sampling error.
/// Endpoint tangent angles (of the forward derivative) may be attached by
/// constructions that know them exactly; otherwise they are estimated by
/// parabolic extrapolation of the chord directions, which is exact on
/// circular arcs and straight lines.
class DiscreteCurve {
public:
    static DiscreteCurve singular_at(const Vec2& p) {
        DiscreteCurve c;
        c.singular_ = true;
        c.pts_ = {p};
        c.length_ = 0.0;
        return c;
    }

    static DiscreteCurve from_points(std::vector<Vec2> pts,
                                     std::optional<double> declared_length = std::nullopt) {
        if (pts.size() < 2) throw std::invalid_argument("regular curve needs at least 2 points");
        DiscreteCurve c;
        c.pts_ = std::move(pts);
        double chord_sum = 0.0;
        for (std::size_t j = 0; j + 1 < c.pts_.size(); ++j) {
            const double d = (c.pts_[j + 1] - c.pts_[j]).norm();
            if (d <= 0.0) throw std::invalid_argument("consecutive points must be distinct");
            chord_sum += d;
        }
        c.length_ = declared_length.value_or(chord_sum);
        if (!(c.length_ > 0.0)) throw std::invalid_argument("curve length must be positive");
        return c;
    }

    bool is_singular() const { return singular_; }
    const std::vector<Vec2>& points() const { return pts_; }
    int segments() const { return singular_ ? 0 : static_cast<int>(pts_.size()) - 1; }
    double length() const { return length_; }
    /// Arc step between consecutive samples of the parametrization.
    double ds() const { return singular_ ? 0.0 : length_ / segments(); }

    const Vec2& front() const { return pts_.front(); }
    const Vec2& back() const { return pts_.back(); }
    const Vec2& endpoint(int z) const { return z == 0 ? pts_.front() : pts_.back(); }

    void set_end_tangent(int z, double angle) { end_tangent_[z] = mod_two_pi(angle); }
    std::optional<double> stored_end_tangent(int z) const { return end_tangent_[z]; }

    /// Angle of the forward derivative at endpoint z (t=0 or t=1).
    double end_tangent(int z) const {
        if (singular_) throw std::logic_error("singular curve has no tangent");
        if (end_tangent_[z]) return *end_tangent_[z];
        if (pts_.size() < 3) {
            const double a = (pts_[1] - pts_[0]).arg();
            return mod_two_pi(a);
        }
        if (z == 0) {
            const double c1 = (pts_[1] - pts_[0]).arg();
            const double c2 = (pts_[2] - pts_[0]).arg();
            return mod_two_pi(c1 + wrap_pi(c1 - c2));
        }
        const std::size_t n = pts_.size();
        const double c1 = (pts_[n - 1] - pts_[n - 2]).arg();
        const double c2 = (pts_[n - 1] - pts_[n - 3]).arg();
        return mod_two_pi(c1 + wrap_pi(c1 - c2));
    }

    /// Outer tangent angle at endpoint z: the direction pointing from the
    /// endpoint into the curve, (-1)^z * gamma'(z).
    double outer_tangent(int z) const {
        return z == 0 ? end_tangent(0) : mod_two_pi(end_tangent(1) + kPi);
    }

    DiscreteCurve scaled(double lambda) const {
        DiscreteCurve c = *this;
        for (Vec2& p : c.pts_) p = p * lambda;
        c.length_ *= lambda;
        return c;
    }

    DiscreteCurve translated(const Vec2& t) const {
        DiscreteCurve c = *this;
        for (Vec2& p : c.pts_) p += t;
        return c;
    }

    DiscreteCurve transformed(double rot, const Vec2& t) const {
        DiscreteCurve c = *this;
        for (Vec2& p : c.pts_) p = rotate(p, rot) + t;
        for (int z = 0; z < 2; ++z)
            if (c.end_tangent_[z]) c.end_tangent_[z] = mod_two_pi(*c.end_tangent_[z] + rot);
        return c;
    }

    DiscreteCurve reversed() const {
        DiscreteCurve c = *this;
        if (singular_) return c;
        std::reverse(c.pts_.begin(), c.pts_.end());
        c.end_tangent_[0] = end_tangent_[1] ? std::optional(mod_two_pi(*end_tangent_[1] + kPi))
                                            : std::nullopt;
        c.end_tangent_[1] = end_tangent_[0] ? std::optional(mod_two_pi(*end_tangent_[0] + kPi))
                                            : std::nullopt;
        return c;
    }

private:
    std::vector<Vec2> pts_;
    double length_ = 0.0;
    bool singular_ = false;
    std::array<std::optional<double>, 2> end_tangent_{};
};

/// Signed turning angle at interior node j: angle from chord j to chord j+1,
/// wrapped to (-pi, pi].
inline std::vector<double> turning_angles(const DiscreteCurve& c) {
    if (c.is_singular()) throw std::invalid_argument("singular curve");
    const auto& p = c.points();
    std::vector<double> turns;
    turns.reserve(p.size() >= 2 ? p.size() - 2 : 0);
    for (std::size_t j = 1; j + 1 < p.size(); ++j) {
        const double a = (p[j] - p[j - 1]).arg();
        const double b = (p[j + 1] - p[j]).arg();
        turns.push_back(wrap_pi(b - a));
    }
    return turns;
}

/// Discrete oriented curvature k_j = turning angle / ds at every node;
/// endpoints carry one-sided copies of their neighbors.
inline std::vector<double> curvature(const DiscreteCurve& c) {
    if (c.is_singular()) throw std::invalid_argument("singular curve");
    if (c.points().size() < 3) throw std::invalid_argument("curvature needs at least 3 points");
    const double h = c.ds();
    const std::vector<double> turns = turning_angles(c);
    std::vector<double> k(c.points().size());
    for (std::size_t j = 0; j < turns.size(); ++j) k[j + 1] = turns[j] / h;
    k.front() = k[1];
    k.back() = k[k.size() - 2];
    return k;
}

/// Total absolute turning, including the turns between the endpoint tangents
/// and the first/last chords (exact on circular arcs; a closed curve with
/// matching end tangents picks up its seam turn this way).
inline double total_curvature(const DiscreteCurve& c) {
    double sum = 0.0;
    for (double t : turning_angles(c)) sum += std::abs(t);
    const auto& p = c.points();
    sum += std::abs(wrap_pi((p[1] - p[0]).arg() - c.end_tangent(0)));
    sum += std::abs(wrap_pi(c.end_tangent(1) - (p[p.size() - 1] - p[p.size() - 2]).arg()));
    return sum;
}

/// Bending integral of k^2 ds by the composite midpoint rule on the
/// constant-speed grid; endpoint half-cells reuse the neighboring value.
inline double bending_energy(const DiscreteCurve& c) {
    if (c.is_singular()) return 0.0;
    if (c.points().size() < 3) return 0.0;
    const double h = c.ds();
    const std::vector<double> k = curvature(c);
    double sum = 0.0;
    for (std::size_t j = 1; j + 1 < k.size(); ++j) sum += k[j] * k[j];
    sum += 0.5 * (k[1] * k[1] + k[k.size() - 2] * k[k.size() - 2]);
    return h * sum;
}

/// Resample to M equal arc steps of the same total length. Points are placed
/// at arc distance j*l/M along the input polyline; the declared length is
/// preserved exactly and endpoint tangents carry over.
inline DiscreteCurve resample_constant_speed(const DiscreteCurve& c, int M) {
    if (c.is_singular()) throw std::invalid_argument("cannot resample a singular curve");
    if (M < 2) throw std::invalid_argument("resample needs M >= 2");
    const auto& p = c.points();
    std::vector<double> cum(p.size(), 0.0);
    for (std::size_t j = 0; j + 1 < p.size(); ++j) {
        const double d = (p[j + 1] - p[j]).norm();
        if (d <= 0.0) throw std::invalid_argument("repeated interior point");
        cum[j + 1] = cum[j] + d;
    }
    const double total = cum.back();
    std::vector<Vec2> out(M + 1);
    out.front() = p.front();
    out.back() = p.back();
    std::size_t seg = 0;
    for (int j = 1; j < M; ++j) {
        const double s = total * static_cast<double>(j) / M;
        while (seg + 2 < cum.size() && cum[seg + 1] < s) ++seg;
        const double t = (s - cum[seg]) / (cum[seg + 1] - cum[seg]);
        out[j] = p[seg] + (p[seg + 1] - p[seg]) * t;
    }
    DiscreteCurve r = DiscreteCurve::from_points(std::move(out), c.length());
    for (int z = 0; z < 2; ++z)
        if (auto t = c.stored_end_tangent(z)) r.set_end_tangent(z, *t);
    return r;
}

/// Refine a polyline through a C^1 Catmull-Rom interpolant, inserting
/// `per_segment` - 1 points into every chord. Unlike plain resampling, the
/// inserted points spread the turning smoothly, so discrete bending measured
/// on the refined curve stays faithful to the underlying smooth curve.
inline DiscreteCurve upsample_smooth(const DiscreteCurve& c, int per_segment) {
    if (c.is_singular()) throw std::invalid_argument("singular curve");
    if (per_segment < 2) return c;
    const auto& p = c.points();
    const std::size_t n = p.size();
    std::vector<Vec2> m(n);  // node tangents from central differences; exact
                             // stored directions take over at the endpoints
    for (std::size_t j = 0; j < n; ++j) {
        if (j == 0)
            m[j] = c.stored_end_tangent(0)
                       ? unit(*c.stored_end_tangent(0)) * (p[1] - p[0]).norm()
                       : p[1] - p[0];
        else if (j + 1 == n)
            m[j] = c.stored_end_tangent(1)
                       ? unit(*c.stored_end_tangent(1)) * (p[n - 1] - p[n - 2]).norm()
                       : p[n - 1] - p[n - 2];
        else
            m[j] = (p[j + 1] - p[j - 1]) * 0.5;
    }
    std::vector<Vec2> out;
    out.reserve((n - 1) * per_segment + 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        for (int k = 0; k < per_segment; ++k) {
            const double t = static_cast<double>(k) / per_segment;
            const double t2 = t * t, t3 = t2 * t;
            const double h00 = 2 * t3 - 3 * t2 + 1;
            const double h10 = t3 - 2 * t2 + t;
            const double h01 = -2 * t3 + 3 * t2;
            const double h11 = t3 - t2;
            out.push_back(h00 * p[j] + h10 * m[j] + h01 * p[j + 1] + h11 * m[j + 1]);
        }
    }
    out.push_back(p.back());
    DiscreteCurve r = DiscreteCurve::from_points(std::move(out), c.length());
    for (int z = 0; z < 2; ++z)
        if (auto t = c.stored_end_tangent(z)) r.set_end_tangent(z, *t);
    return r;
}

/// Circular arc sampled uniformly in angle: starts at `start` with forward
/// tangent angle `tangent`, signed curvature `kappa` (positive turns left),
/// total turning |sweep| = |kappa| * length. Endpoint tangents are exact.
inline DiscreteCurve make_arc(const Vec2& start, double tangent, double kappa, double arc_length,
                              int M) {
    if (M < 2) throw std::invalid_argument("arc needs M >= 2");
    if (!(arc_length > 0.0)) throw std::invalid_argument("arc length must be positive");
    std::vector<Vec2> pts(M + 1);
    if (std::abs(kappa) < 1e-14) {
        const Vec2 u = unit(tangent);
        for (int j = 0; j <= M; ++j) pts[j] = start + u * (arc_length * j / M);
    } else {
        const double r = 1.0 / std::abs(kappa);
        const double sign = kappa > 0.0 ? 1.0 : -1.0;
        const Vec2 center = start + r * unit(tangent + sign * kPi / 2.0);
        const double phi0 = (start - center).arg();
        const double sweep = kappa * arc_length;
        for (int j = 0; j <= M; ++j)
            pts[j] = center + r * unit(phi0 + sweep * static_cast<double>(j) / M);
    }
    DiscreteCurve c = DiscreteCurve::from_points(std::move(pts), arc_length);
    c.set_end_tangent(0, tangent);
    c.set_end_tangent(1, tangent + kappa * arc_length);
    return c;
}

/// Straight segment between two points with exact tangents.
inline DiscreteCurve make_segment(const Vec2& a, const Vec2& b, int M) {
    const double len = (b - a).norm();
    if (!(len > 0.0)) throw std::invalid_argument("segment endpoints coincide");
    std::vector<Vec2> pts(M + 1);
    for (int j = 0; j <= M; ++j) pts[j] = a + (b - a) * (static_cast<double>(j) / M);
    DiscreteCurve c = DiscreteCurve::from_points(std::move(pts), len);
    const double ang = (b - a).arg();
    c.set_end_tangent(0, ang);
    c.set_end_tangent(1, ang);
    return c;
}

/// Curve built from tangent-angle samples theta_0..theta_M by midpoint
/// integration: p_{j+1} = p_j + (l/M) * u((theta_j + theta_{j+1})/2).
/// Endpoint tangents are theta_0 and theta_M exactly.
inline DiscreteCurve curve_from_tangent_angles(const Vec2& start, const std::vector<double>& theta,
                                               double length) {
    if (theta.size() < 2) throw std::invalid_argument("need at least 2 tangent samples");
    if (!(length > 0.0)) throw std::invalid_argument("length must be positive");
    const int M = static_cast<int>(theta.size()) - 1;
    const double h = length / M;
    std::vector<Vec2> pts(M + 1);
    pts[0] = start;
    for (int j = 0; j < M; ++j) pts[j + 1] = pts[j] + h * unit(0.5 * (theta[j] + theta[j + 1]));
    DiscreteCurve c = DiscreteCurve::from_points(std::move(pts), length);
    c.set_end_tangent(0, theta.front());
    c.set_end_tangent(1, theta.back());
    return c;
}

}  // namespace elnet

#endif
