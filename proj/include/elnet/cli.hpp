#ifndef ELNET_CLI_HPP
#define ELNET_CLI_HPP

#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "elnet/io.hpp"
#include "elnet/svg.hpp"

namespace elnet::cli {

inline Network network_from_doc(const json& doc) {
    if (doc.contains("geometry")) return network_from_json(doc);
    // a bare graph classifies as the fully collapsed network at the origin
    AngledGraph g = graph_from_json(doc);
    std::vector<DiscreteCurve> curves(g.num_edges(), DiscreteCurve::singular_at({0.0, 0.0}));
    return Network(std::move(g), std::move(curves));
}

inline int run_classify(const std::string& path, bool square_angle, const std::string& out,
                        std::ostream& os) {
    const json doc = load_json_file(path);
    Network n = network_from_doc(doc);
    Verdict v = classify_network(n);
    os << to_string(v.kind) << "\n";
    for (const auto& r : v.reasons) os << "  " << r << "\n";
    if (v.strata && v.strata->verdict != StratifyVerdict::NotStratified) {
        os << "  stratified: " << to_string(v.strata->verdict) << ", step "
           << v.strata->step << "\n";
        for (std::size_t j = 0; j < v.strata->strata.size(); ++j) {
            os << "    H_" << j << " = {";
            for (std::size_t k = 0; k < v.strata->strata[j].size(); ++k)
                os << (k ? "," : "") << n.graph().edge_id(v.strata->strata[j][k]);
            os << "}\n";
        }
    }
    json report = verdict_to_json(n.graph(), v);
    if (square_angle) {
        std::vector<int> sing = n.singular_edges();
        if (sing.empty()) {
            sing.resize(n.graph().num_edges());
            std::iota(sing.begin(), sing.end(), 0);
        }
        const SquareAngleResult sq = square_angle_straightness(n.graph(), sing);
        os << "  square-angle: " << to_string(sq.verdict) << "\n";
        report["square_angle"] = to_string(sq.verdict);
        if (sq.witness) {
            json steps = json::array();
            os << "    witnessing cycle:";
            for (const HalfEdge& h : sq.witness->steps) {
                os << " (" << h.end << "," << n.graph().edge_id(h.edge) << ")";
                steps.push_back({{"edge", n.graph().edge_id(h.edge)}, {"end", h.end}});
            }
            os << "\n";
            report["square_angle_witness"] = steps;
        }
    }
    if (!out.empty()) write_text_file(out, report.dump(2) + "\n");
    return 0;
}

inline int run_minimize(const std::string& path, double alpha, double beta,
                        const std::vector<double>& fixed_lengths, const MinimizeOptions& opts,
                        const std::string& prefix, std::ostream& os) {
    const AngledGraph g = graph_from_json(load_json_file(path));
    MinimizeResult res;
    if (!fixed_lengths.empty()) {
        if (static_cast<int>(fixed_lengths.size()) != g.num_edges())
            throw std::invalid_argument("--fixed-lengths needs one value per edge");
        res = minimize_fixed_length(g, fixed_lengths, alpha, opts);
    } else {
        res = minimize_relaxed(g, alpha, beta, opts);
    }
    std::ostringstream summary;
    summary.precision(12);
    summary << "energy " << res.energy << "\n"
            << "converged " << (res.converged ? "yes" : "no") << "\n"
            << "closure_residual " << res.closure_residual << "\n"
            << "iterations " << res.iterations << "\n"
            << "restart " << res.best_seed << "\n";
    summary << "lengths";
    for (double l : res.lengths) summary << " " << l;
    summary << "\n";
    summary << "restart_energies";
    for (double e : res.restart_energies) summary << " " << e;
    summary << "\n";
    if (!res.degenerate_edges.empty()) {
        summary << "degenerate_edges";
        for (int e : res.degenerate_edges) summary << " " << g.edge_id(e);
        summary << "\n";
    }
    if (res.verdict) summary << "verdict " << to_string(res.verdict->kind) << "\n";
    if (res.suspicious) summary << "suspicious yes\n";
    os << summary.str();
    if (!prefix.empty()) {
        if (res.network)
            write_text_file(prefix + ".network.json", network_to_json(*res.network).dump(2) + "\n");
        write_text_file(prefix + ".convergence.csv", convergence_csv(res.log));
        write_text_file(prefix + ".summary.txt", summary.str());
    }
    return res.converged ? 0 : 2;
}

inline int run_analyze(const std::string& path, const std::string& prefix, std::ostream& os) {
    Network n = network_from_json(load_json_file(path));
    const EnergyBreakdown b = elastic_energy(n);
    const ELReport rep = el_residual(n);
    os.precision(12);
    os << "energy " << b.total << "\n"
       << "interior_sup_residual " << rep.interior_sup << "\n"
       << "junction_sup_residual " << rep.junction_sup << "\n";
    if (!prefix.empty()) {
        write_text_file(prefix + ".energy.csv", energy_csv(n, b));
        write_text_file(prefix + ".el.csv", el_report_csv(n, rep));
    }
    return 0;
}

inline Network chain_to_network(const std::vector<DiscreteCurve>& curves) {
    std::vector<EdgeSpec> specs;
    std::vector<DiscreteCurve> geo;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        EdgeSpec s;
        s.v0 = "v" + std::to_string(i);
        s.v1 = "v" + std::to_string(i + 1);
        s.dir0 = curves[i].outer_tangent(0);
        s.dir1 = curves[i].outer_tangent(1);
        s.id = "E" + std::to_string(i + 1);
        specs.push_back(std::move(s));
        geo.push_back(curves[i]);
    }
    return Network(build_graph(specs), std::move(geo));
}

inline int run_construct_tracks(double h, const std::string& out, std::ostream& os) {
    DiscreteCurve c = make_train_tracks(h);
    Network n = chain_to_network({c});
    os.precision(12);
    os << "theta " << std::acos(1.0 - 0.5 * h) << "\n"
       << "energy " << elastic_energy(n).total << "\n";
    if (!out.empty()) write_text_file(out, network_to_json(n).dump(2) + "\n");
    return 0;
}

inline int run_construct_fan(double r, double a, const std::string& out, std::ostream& os) {
    const auto arcs = make_collapsing_fan(r, a);
    Network n = chain_to_network({arcs[0], arcs[2], arcs[1].reversed()});
    os.precision(12);
    os << "energy " << elastic_energy(n).total << "\n";
    if (!out.empty()) write_text_file(out, network_to_json(n).dump(2) + "\n");
    return 0;
}

inline int run_construct_desing(const std::string& path, double eps, const std::string& out,
                                std::ostream& os) {
    Network n = network_from_json(load_json_file(path));
    Network reg = desingularize(n, eps);
    os.precision(12);
    os << "energy " << elastic_energy(reg).total << "\n"
       << "verdict " << to_string(classify_network(reg).kind) << "\n";
    if (!out.empty()) write_text_file(out, network_to_json(reg).dump(2) + "\n");
    return 0;
}

inline int run_render(const std::string& path, const std::string& out, double scale,
                      std::ostream& os) {
    Network n = network_from_json(load_json_file(path));
    write_text_file(out, render_svg(n, scale));
    os << "wrote " << out << "\n";
    return 0;
}

/// Entry point shared by the binary and the tests.
inline int run(const std::vector<std::string>& args, std::ostream& os = std::cout,
               std::ostream& err = std::cerr) {
    CLI::App app{"elastic networks with assigned angles: classification, "
                 "relaxed-energy minimization, analysis, constructions"};
    app.require_subcommand(1);

    std::string in_path, out_path, prefix;
    bool square_angle = false;
    auto* classify = app.add_subcommand("classify", "classify a graph or network file");
    classify->add_option("file", in_path)->required();
    classify->add_flag("--square-angle", square_angle,
                       "also run the right-angle straightness criterion");
    classify->add_option("-o,--output", out_path, "write the JSON report here");

    double alpha = 1.0, beta = 1.0;
    std::string fixed_csv;
    MinimizeOptions mopts;
    auto* minimize = app.add_subcommand("minimize", "minimize the relaxed elastic energy");
    minimize->add_option("file", in_path)->required();
    minimize->add_option("--alpha", alpha, "curvature weight")->capture_default_str();
    minimize->add_option("--beta", beta, "length weight")->capture_default_str();
    minimize->add_option("--fixed-lengths", fixed_csv,
                         "comma-separated lengths; switches to the fixed-length problem");
    minimize->add_option("--samples", mopts.samples, "tangent samples per curve")
        ->capture_default_str();
    minimize->add_option("--seed", mopts.seed, "random seed")->capture_default_str();
    minimize->add_option("--restarts", mopts.restarts, "number of restarts")
        ->capture_default_str();
    minimize->add_option("--max-iter", mopts.max_iter, "iteration budget per restart")
        ->capture_default_str();
    minimize->add_option("--tol-c", mopts.tol_c, "closure tolerance")->capture_default_str();
    minimize->add_option("--tol-g", mopts.tol_g, "gradient tolerance")->capture_default_str();
    minimize->add_option("-o,--output", prefix, "output prefix for network/CSV/summary");

    auto* analyze = app.add_subcommand("analyze", "energy breakdown and criticality residuals");
    analyze->add_option("file", in_path)->required();
    analyze->add_option("-o,--output", prefix, "output prefix for the CSV reports");

    auto* construct = app.add_subcommand("construct", "reference curve constructions");
    construct->require_subcommand(1);
    double track_h = 0.02, fan_r = 0.01, fan_a = 0.01, desing_eps = 0.05;
    auto* tracks = construct->add_subcommand("train-tracks", "two-arc track connector");
    tracks->set_help_flag("--help", "print help");  // frees --h for the offset
    tracks->add_option("--h", track_h, "vertical offset")->required();
    tracks->add_option("-o,--output", out_path, "network file to write");
    auto* fan = construct->add_subcommand("fan", "three collapsing arcs");
    fan->add_option("--r", fan_r, "central radius")->required();
    fan->add_option("--a", fan_a, "half-angle")->required();
    fan->add_option("-o,--output", out_path, "network file to write");
    auto* desing = construct->add_subcommand("desingularize", "regularize a degenerate network");
    desing->add_option("file", in_path)->required();
    desing->add_option("--eps", desing_eps, "scale parameter")->required();
    desing->add_option("-o,--output", out_path, "network file to write");

    double scale = 200.0;
    auto* render = app.add_subcommand("render", "render a network file to SVG");
    render->add_option("file", in_path)->required();
    render->add_option("-o,--output", out_path, "SVG file")->required();
    render->add_option("--scale", scale, "pixels per unit")->capture_default_str();

    std::vector<std::string> argv_rev(args.rbegin(), args.rend());
    try {
        app.parse(argv_rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            os << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (app.got_subcommand(classify))
            return run_classify(in_path, square_angle, out_path, os);
        if (app.got_subcommand(minimize)) {
            std::vector<double> fixed;
            if (!fixed_csv.empty()) {
                std::stringstream ss(fixed_csv);
                std::string tok;
                while (std::getline(ss, tok, ',')) fixed.push_back(std::stod(tok));
            }
            return run_minimize(in_path, alpha, beta, fixed, mopts, prefix, os);
        }
        if (app.got_subcommand(analyze)) return run_analyze(in_path, prefix, os);
        if (app.got_subcommand(construct)) {
            if (construct->got_subcommand(tracks))
                return run_construct_tracks(track_h, out_path, os);
            if (construct->got_subcommand(fan))
                return run_construct_fan(fan_r, fan_a, out_path, os);
            return run_construct_desing(in_path, desing_eps, out_path, os);
        }
        return run_render(in_path, out_path, scale, os);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace elnet::cli

#endif
