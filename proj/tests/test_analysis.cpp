#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "elnet/analysis.hpp"
#include "elnet/optimize.hpp"
#include "fixtures.hpp"

using namespace elnet;
using namespace fixtures;

namespace {

double curve_energy(const DiscreteCurve& c) { return bending_energy(c) + c.length(); }

Network one_curve(const DiscreteCurve& c) {
    AngledGraph g = build_graph(
        {{"a", "b", c.outer_tangent(0), c.outer_tangent(1), "E1"}});
    return Network(g, {c});
}

}  // namespace

TEST_CASE("criticality residuals") {
    SECTION("the unit circle solves the interior equation") {
        AngledGraph g = build_graph({{"o", "o", kPi / 2.0, 3.0 * kPi / 2.0, "E1"}});
        Network n(g, {make_arc({1, 0}, kPi / 2.0, 1.0, kTwoPi, 512)});
        const ELReport rep = el_residual(n);
        CHECK(rep.interior_sup <= 1e-2);
        CHECK(rep.junction_sup <= 1e-6);
    }
    SECTION("straight segments have exactly zero interior residual") {
        Network n = one_curve(make_segment({0, 0}, {3, 0}, 64));
        const ELReport rep = el_residual(n);
        CHECK(rep.edges[0].sup == 0.0);
        CHECK(rep.edges[0].l2 == 0.0);
    }
    SECTION("k = sin(s) reproduces the closed-form residual pointwise") {
        const int M = 512;
        std::vector<double> th(M + 1);
        for (int j = 0; j <= M; ++j) th[j] = 1.0 - std::cos(kPi * j / M);
        DiscreteCurve c = curve_from_tangent_angles({0, 0}, th, kPi);
        const std::vector<double> k = curvature(c);
        const double h = c.ds();
        for (std::size_t j = 2; j + 2 < k.size(); ++j) {
            const double s = kPi * static_cast<double>(j) / M;
            const double kpp = (k[j + 1] - 2.0 * k[j] + k[j - 1]) / (h * h);
            const double got = std::abs(2.0 * kpp + k[j] * k[j] * k[j] - k[j]);
            const double want = std::abs(std::pow(std::sin(s), 3) - 3.0 * std::sin(s));
            CHECK(std::abs(got - want) <= 5e-2);
        }
    }
    SECTION("singular curves are skipped with a notice") {
        Network n = fan_limit_degenerate_network();
        const ELReport rep = el_residual(n);
        CHECK(rep.skipped_singular == std::vector<int>{0, 1, 2});
        CHECK(rep.edges.size() == 2);
    }
    SECTION("junction residuals are parametrization independent") {
        Network n = theta_network(128);
        const ELReport a = el_residual(n);
        std::vector<DiscreteCurve> curves(n.curves().begin(), n.curves().end());
        curves[1] = curves[1].reversed();
        AngledGraph g = build_graph({{"a", "b", 0.0, kPi, "E1"},
                                     {"b", "a", kPi / 3.0, 2.0 * kPi / 3.0, "E2"},
                                     {"a", "b", 4.0 * kPi / 3.0, 5.0 * kPi / 3.0, "E3"}});
        const ELReport b = el_residual(Network(g, std::move(curves)));
        for (std::size_t j = 0; j < a.junctions.size(); ++j) {
            CHECK(a.junctions[j].curvature_balance ==
                  Catch::Approx(b.junctions[j].curvature_balance).margin(1e-9));
            CHECK(a.junctions[j].force_balance ==
                  Catch::Approx(b.junctions[j].force_balance).margin(1e-9));
        }
    }
}

TEST_CASE("cycle turning lower bound") {
    CHECK(lower_bound_cycle({kPi / 3.0, kPi / 3.0, kPi / 3.0, kPi / 3.0}, 1.0) ==
          Catch::Approx(std::pow(2.0 * kPi / 3.0, 2)));
    CHECK(lower_bound_cycle({kPi, kPi / 2.0, kPi / 2.0, kPi / 4.0}, 3.0) == 0.0);
    CHECK(lower_bound_cycle({kPi / 3.0, kPi / 3.0, kPi / 3.0}, 2.0) ==
          Catch::Approx(kPi * kPi / 2.0));
    CHECK_THROWS_AS(lower_bound_cycle({1.0}, 0.0), std::invalid_argument);
}

TEST_CASE("total-curvature energy bound") {
    SECTION("straight segments give zero") {
        CHECK(curvature_energy_bound({make_segment({0, 0}, {1, 1}, 16)}) == 0.0);
    }
    SECTION("the unit circle attains equality") {
        DiscreteCurve c = make_arc({1, 0}, kPi / 2.0, 1.0, kTwoPi, 512);
        const double bound = curvature_energy_bound({c});
        CHECK(bound == Catch::Approx(4.0 * kPi).epsilon(1e-9));
        CHECK(curve_energy(c) >= bound * (1.0 - 1e-12));
    }
    SECTION("the theta minimizer sits above 16*pi/3") {
        MinimizeResult res = minimize_relaxed(theta_graph(), 1, 1, {});
        REQUIRE(res.network);
        std::vector<DiscreteCurve> curves(res.network->curves().begin(),
                                          res.network->curves().end());
        const double bound = curvature_energy_bound(curves);
        CHECK(bound >= 16.0 * kPi / 3.0 * 0.99);
        CHECK(res.energy >= bound * 0.99);
    }
}

TEST_CASE("track connector") {
    SECTION("closed-form contracts at h = 0.02") {
        const double h = 0.02;
        DiscreteCurve c = make_train_tracks(h);
        const double theta = std::acos(1.0 - h / 2.0);
        CHECK((c.front() - Vec2{0, 0}).norm() <= 1e-12);
        CHECK((c.back() - Vec2{2.0 * std::sin(theta), h}).norm() <= 1e-12);
        CHECK(std::abs(wrap_pi(c.end_tangent(0))) <= 1e-12);
        CHECK(std::abs(wrap_pi(c.end_tangent(1))) <= 1e-12);
        CHECK(curve_energy(c) == Catch::Approx(4.0 * theta).epsilon(0.005));
    }
    SECTION("vanishing-offset asymptotics") {
        const double h = 1e-4;
        DiscreteCurve c = make_train_tracks(h);
        const double ratio = curve_energy(c) / (4.0 * std::sqrt(h));
        CHECK(ratio >= 0.98);
        CHECK(ratio <= 1.02);
    }
    SECTION("h = 2 is two quarter circles") {
        DiscreteCurve c = make_train_tracks(2.0);
        CHECK(curve_energy(c) == Catch::Approx(2.0 * kPi).epsilon(0.005));
    }
    SECTION("offset out of range") {
        CHECK_THROWS_AS(make_train_tracks(0.0), std::invalid_argument);
        CHECK_THROWS_AS(make_train_tracks(2.5), std::invalid_argument);
    }
}

TEST_CASE("endpoint straightening") {
    SECTION("straight input is returned unchanged") {
        DiscreteCurve seg = make_segment({0, 0}, {1, 0}, 32);
        DiscreteCurve out = straighten_endpoint(seg, 0.05);
        CHECK(out.points().size() == seg.points().size());
    }
    SECTION("quarter circle contracts") {
        DiscreteCurve q = make_arc({0, 0}, 0.0, 1.0, kPi / 2.0, 256);
        const double e0 = curve_energy(q);
        DiscreteCurve s = straighten_endpoint(q, 0.05);
        CHECK((s.front() - q.front()).norm() == 0.0);
        CHECK(angle_eq(s.end_tangent(0), q.end_tangent(0)));
        const double run = elnet::detail::straight_run_length(s);
        CHECK(run > 0.0);
        CHECK(run <= 0.05);
        CHECK(curve_energy(s) <= e0 * (1.0 + 0.05) + 1e-3);
    }
    SECTION("halving eps roughly halves run and inflation") {
        DiscreteCurve q = make_arc({0, 0}, 0.0, 1.0, kPi / 2.0, 256);
        const double e0 = curve_energy(q);
        const double run1 = elnet::detail::straight_run_length(straighten_endpoint(q, 0.1));
        const double run2 = elnet::detail::straight_run_length(straighten_endpoint(q, 0.05));
        CHECK(run1 / run2 == Catch::Approx(2.0).epsilon(0.2));
        const double i1 = curve_energy(straighten_endpoint(q, 0.1)) - e0;
        const double i2 = curve_energy(straighten_endpoint(q, 0.05)) - e0;
        CHECK(i1 / i2 > 1.4);
        CHECK(i1 / i2 < 4.0);
    }
}

TEST_CASE("desingularization") {
    SECTION("collapsed tree between two segments") {
        AngledGraph g = build_graph({{"a", "m", 0.0, kPi, "E1"},
                                     {"m", "n", 0.0, kPi, "E2"},
                                     {"n", "b", 0.0, kPi, "E3"}});
        Network n(g, {make_segment({-2, 0}, {0, 0}, 64), DiscreteCurve::singular_at({0, 0}),
                      make_segment({0, 0}, {2, 0}, 64)});
        REQUIRE(classify_network(n).kind == NetworkClass::Degenerate);
        const double ebar = elastic_energy(n).total;
        double prev = 1e18;
        for (double eps : {0.1, 0.05, 0.025}) {
            Network r = desingularize(n, eps);
            CHECK(classify_network(r).kind == NetworkClass::Regular);
            const double e = elastic_energy(r).total;
            CHECK(e >= ebar - 1e-9);
            CHECK(e <= prev + 1e-12);
            prev = e;
        }
    }
    SECTION("the step-two fan limit regularizes with vanishing excess") {
        Network n = fan_limit_degenerate_network();
        const double ebar = elastic_energy(n).total;
        double prev = 1e18;
        for (double eps : {0.1, 0.05, 0.025}) {
            Network r = desingularize(n, eps);
            CHECK(classify_network(r).kind == NetworkClass::Regular);
            const double e = elastic_energy(r).total;
            CHECK(e >= ebar - 1e-9);
            CHECK(e <= prev);
            // pointwise: junction images stay within C*eps of the collapse point
            for (int v = 0; v < n.graph().num_vertices(); ++v)
                CHECK((r.junction_position(v) - n.junction_position(v)).norm() <= 5.0 * eps);
            prev = e;
        }
    }
    SECTION("the degenerate petal minimizer regularizes within 5% at eps = 0.01") {
        MinimizeResult res = minimize_relaxed(double_petal_graph(), 1, 1, {});
        REQUIRE(res.verdict);
        REQUIRE(res.verdict->kind == NetworkClass::Degenerate);
        const double ebar = elastic_energy(*res.network).total;
        double prev = 1e18;
        for (double eps : {0.1, 0.05, 0.025, 0.01}) {
            Network r = desingularize(*res.network, eps);
            CHECK(classify_network(r).kind == NetworkClass::Regular);
            const double e = elastic_energy(r).total;
            CHECK(e >= ebar * (1.0 - 1e-9));
            CHECK(e <= prev);
            prev = e;
        }
        CHECK(prev <= ebar * 1.05);
    }
    SECTION("non-degenerate input is rejected") {
        CHECK_THROWS_AS(desingularize(theta_network(), 0.05), std::invalid_argument);
        CHECK_THROWS_AS(desingularize(fixtures::collapsed_cycle_network(), 0.05),
                        std::invalid_argument);
    }
}

TEST_CASE("collapsing fan family") {
    SECTION("closed form within 0.5% at r = a = 1/100") {
        const double r = 0.01, a = 0.01;
        const auto arcs = make_collapsing_fan(r, a);
        double e = 0.0;
        for (const auto& c : arcs) e += curve_energy(c);
        const double formula = 2.0 * (r * a / std::tan(a) + a * std::tan(a) / r) +
                               2.0 * a * r + 2.0 * a / r;
        CHECK(e == Catch::Approx(formula).epsilon(0.005));
    }
    SECTION("the r = 1/n, a = 1/n^2 family vanishes") {
        double prev = 1e18;
        for (int n : {10, 20, 40}) {
            const auto arcs = make_collapsing_fan(1.0 / n, 1.0 / (static_cast<double>(n) * n));
            double e = 0.0;
            for (const auto& c : arcs) e += curve_energy(c);
            // leading terms 2(1/n + 1/n^3) + 2/n^3 + 2/n
            const double nn = n;
            const double leading = 2.0 * (1.0 / nn + 1.0 / (nn * nn * nn)) +
                                   2.0 / (nn * nn * nn) + 2.0 / nn;
            CHECK(e == Catch::Approx(leading).epsilon(0.01));
            CHECK(e < prev);
            prev = e;
        }
        CHECK(prev < 0.2);
    }
    SECTION("wide half-angles stay finite and match the closed form") {
        const double r = 1.0, a = 1.5;  // close to pi/2
        const auto arcs = make_collapsing_fan(r, a);
        double e = 0.0;
        for (const auto& c : arcs) e += curve_energy(c);
        const double formula = 2.0 * (r * a / std::tan(a) + a * std::tan(a) / r) +
                               2.0 * a * r + 2.0 * a / r;
        CHECK(e == Catch::Approx(formula).epsilon(0.01));
    }
    SECTION("arcs chain end to start") {
        const auto arcs = make_collapsing_fan(0.5, 0.4);
        CHECK((arcs[0].back() - arcs[2].front()).norm() <= 1e-12);
        CHECK((arcs[2].back() - arcs[1].front()).norm() <= 1e-12);
    }
    SECTION("parameters out of range") {
        CHECK_THROWS_AS(make_collapsing_fan(0.0, 0.1), std::invalid_argument);
        CHECK_THROWS_AS(make_collapsing_fan(1.0, kPi), std::invalid_argument);
    }
}
