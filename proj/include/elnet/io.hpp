#ifndef ELNET_IO_HPP
#define ELNET_IO_HPP

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "elnet/analysis.hpp"
#include "elnet/classify.hpp"
#include "elnet/network.hpp"
#include "elnet/optimize.hpp"

namespace elnet {

using json = nlohmann::json;

inline double parse_angle_field(const json& j, const std::string& what) {
    if (j.is_string()) return parse_angle(j.get<std::string>());
    if (j.is_number()) {
        const double v = j.get<double>();
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite " + what);
        return v;
    }
    throw std::invalid_argument(what + " must be a number or an angle string");
}

inline AngledGraph graph_from_json(const json& doc) {
    if (!doc.is_object()) throw std::invalid_argument("graph document must be an object");
    if (doc.value("dimension", 2) != 2)
        throw std::invalid_argument("only dimension 2 is supported");
    if (!doc.contains("edges") || !doc["edges"].is_array() || doc["edges"].empty())
        throw std::invalid_argument("graph document needs a nonempty 'edges' array");
    std::vector<EdgeSpec> specs;
    for (const auto& e : doc["edges"]) {
        EdgeSpec s;
        if (e.contains("id"))
            s.id = e["id"].is_string() ? e["id"].get<std::string>() : e["id"].dump();
        s.v0 = e.at("v0").is_string() ? e["v0"].get<std::string>() : e["v0"].dump();
        s.v1 = e.at("v1").is_string() ? e["v1"].get<std::string>() : e["v1"].dump();
        s.dir0 = parse_angle_field(e.at("dir0_rad"), "dir0_rad");
        s.dir1 = parse_angle_field(e.at("dir1_rad"), "dir1_rad");
        specs.push_back(std::move(s));
    }
    return build_graph(specs);
}

inline json graph_to_json(const AngledGraph& g) {
    json edges = json::array();
    for (int e = 0; e < g.num_edges(); ++e) {
        edges.push_back({{"id", g.edge_id(e)},
                         {"v0", g.vertex_label(g.vertex_of({e, 0}))},
                         {"v1", g.vertex_label(g.vertex_of({e, 1}))},
                         {"dir0_rad", g.direction({e, 0})},
                         {"dir1_rad", g.direction({e, 1})}});
    }
    return json{{"dimension", 2}, {"edges", edges}};
}

inline json network_to_json(const Network& n) {
    json doc = graph_to_json(n.graph());
    json geom = json::object();
    for (int e = 0; e < n.graph().num_edges(); ++e) {
        const DiscreteCurve& c = n.curve(e);
        json entry;
        if (c.is_singular()) {
            entry["singular_at"] = {c.front().x, c.front().y};
        } else {
            json pts = json::array();
            for (const Vec2& p : c.points()) pts.push_back({p.x, p.y});
            entry["points"] = std::move(pts);
            entry["length"] = c.length();
            if (c.stored_end_tangent(0) && c.stored_end_tangent(1))
                entry["end_tangents_rad"] = {*c.stored_end_tangent(0),
                                             *c.stored_end_tangent(1)};
        }
        geom[n.graph().edge_id(e)] = std::move(entry);
    }
    doc["geometry"] = std::move(geom);
    return doc;
}

inline Network network_from_json(const json& doc) {
    AngledGraph g = graph_from_json(doc);
    if (!doc.contains("geometry") || !doc["geometry"].is_object())
        throw std::invalid_argument("network document needs a 'geometry' object");
    const json& geom = doc["geometry"];
    std::vector<DiscreteCurve> curves;
    for (int e = 0; e < g.num_edges(); ++e) {
        const std::string& id = g.edge_id(e);
        if (!geom.contains(id))
            throw std::invalid_argument("geometry missing for edge " + id);
        const json& entry = geom[id];
        if (entry.contains("singular_at")) {
            const auto& p = entry["singular_at"];
            curves.push_back(DiscreteCurve::singular_at({p.at(0), p.at(1)}));
            continue;
        }
        if (!entry.contains("points"))
            throw std::invalid_argument("edge " + id + " needs 'points' or 'singular_at'");
        std::vector<Vec2> pts;
        for (const auto& p : entry["points"]) pts.push_back({p.at(0), p.at(1)});
        std::optional<double> declared;
        if (entry.contains("length")) declared = entry["length"].get<double>();
        DiscreteCurve c = DiscreteCurve::from_points(std::move(pts), declared);
        if (entry.contains("end_tangents_rad")) {
            c.set_end_tangent(0, parse_angle_field(entry["end_tangents_rad"].at(0),
                                                   "end tangent"));
            c.set_end_tangent(1, parse_angle_field(entry["end_tangents_rad"].at(1),
                                                   "end tangent"));
        }
        curves.push_back(std::move(c));
    }
    Network n(std::move(g), std::move(curves));
    n.validate();
    return n;
}

inline json tangents_to_json(const AngledGraph& g, const TangentAssignment& t) {
    json halves = json::array();
    for (const auto& [h, angle] : t.tangent)
        halves.push_back(
            {{"edge", g.edge_id(h.edge)}, {"end", h.end}, {"angle_rad", angle}});
    json rot = json::object();
    for (const auto& [v, angle] : t.rotation) rot[g.vertex_label(v)] = angle;
    return json{{"half_edges", halves}, {"rotations", rot}};
}

inline json strata_to_json(const AngledGraph& g, const StrataReport& sr) {
    json strata = json::array();
    for (const auto& layer : sr.strata) {
        json ids = json::array();
        for (int e : layer) ids.push_back(g.edge_id(e));
        strata.push_back(std::move(ids));
    }
    json realizations = json::array();
    for (const auto& r : sr.realizations) {
        json lengths = json::object();
        for (const auto& [e, l] : r.lengths) lengths[g.edge_id(e)] = l;
        json positions = json::object();
        for (const auto& [v, p] : r.positions) positions[g.vertex_label(v)] = {p.x, p.y};
        realizations.push_back({{"lengths", lengths}, {"positions", positions}});
    }
    json out{{"verdict", to_string(sr.verdict)},
             {"step", sr.step},
             {"strata", strata},
             {"realizations", realizations},
             {"tangents", tangents_to_json(g, sr.tangents)}};
    if (sr.failing_cycle) {
        json steps = json::array();
        for (const HalfEdge& h : sr.failing_cycle->steps)
            steps.push_back({{"edge", g.edge_id(h.edge)}, {"end", h.end}});
        out["failing_cycle"] = steps;
        out["failing_angle_rad"] = sr.failing_angle;
    }
    return out;
}

inline json verdict_to_json(const AngledGraph& g, const Verdict& v) {
    json out{{"verdict", to_string(v.kind)}, {"reasons", v.reasons}};
    if (v.tangents) out["tangents"] = tangents_to_json(g, *v.tangents);
    if (v.strata) {
        const json sj = strata_to_json(g, *v.strata);
        out["strata"] = sj["strata"];
        out["step"] = sj["step"];
        out["stratified"] = sj["verdict"];
        if (sj.contains("realizations")) out["realizations"] = sj["realizations"];
    }
    return out;
}

inline std::string energy_csv(const Network& n, const EnergyBreakdown& b) {
    std::ostringstream os;
    os.precision(15);
    os << "edge,length,bending,energy\n";
    for (const auto& t : b.per_edge)
        os << n.graph().edge_id(t.edge) << "," << t.length << "," << t.bending << ","
           << t.energy << "\n";
    os << "total," << "" << "," << "" << "," << b.total << "\n";
    return os.str();
}

inline std::string el_report_csv(const Network& n, const ELReport& rep) {
    std::ostringstream os;
    os.precision(15);
    os << "kind,id,sup_or_curvature,l2_or_force\n";
    for (const auto& e : rep.edges)
        os << "edge," << n.graph().edge_id(e.edge) << "," << e.sup << "," << e.l2 << "\n";
    for (const auto& j : rep.junctions)
        os << "junction," << n.graph().vertex_label(j.vertex) << "," << j.curvature_balance
           << "," << j.force_balance << "\n";
    for (int e : rep.skipped_singular)
        os << "skipped," << n.graph().edge_id(e) << ",," << "\n";
    return os.str();
}

inline std::string convergence_csv(const std::vector<IterationRecord>& log) {
    std::ostringstream os;
    os.precision(15);
    os << "iteration,objective,residual\n";
    for (const auto& r : log)
        os << r.iteration << "," << r.objective << "," << r.residual << "\n";
    return os.str();
}

inline json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    json doc;
    in >> doc;
    return doc;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write " + path);
    out << text;
}

}  // namespace elnet

#endif
