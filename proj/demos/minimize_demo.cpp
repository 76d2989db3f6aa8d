// Minimize the relaxed energy on a graph file, report the result, and write
// the minimizer plus an SVG rendering next to the input.
#include <cstdio>

#include "elnet/analysis.hpp"
#include "elnet/io.hpp"
#include "elnet/optimize.hpp"
#include "elnet/svg.hpp"

using namespace elnet;

int main(int argc, char** argv) {
    const std::string path = argc > 1 ? argv[1] : "data/theta.graph.json";
    const AngledGraph g = graph_from_json(load_json_file(path));

    MinimizeOptions opts;
    const MinimizeResult res = minimize_relaxed(g, 1.0, 1.0, opts);
    std::printf("energy        %.9f\n", res.energy);
    std::printf("converged     %s (residual %.2e, %d iterations)\n",
                res.converged ? "yes" : "no", res.closure_residual, res.iterations);
    for (int e = 0; e < g.num_edges(); ++e)
        std::printf("length %-4s   %.9f\n", g.edge_id(e).c_str(), res.lengths[e]);
    if (res.verdict) std::printf("classified    %s\n", to_string(res.verdict->kind));

    if (res.network) {
        const ELReport rep = el_residual(*res.network);
        std::printf("EL residuals  interior %.2e, junction %.2e\n", rep.interior_sup,
                    rep.junction_sup);
        write_text_file("minimizer.network.json",
                        network_to_json(*res.network).dump(2) + "\n");
        write_text_file("minimizer.svg", render_svg(*res.network));
        std::printf("wrote minimizer.network.json and minimizer.svg\n");
    }
    return res.converged ? 0 : 2;
}
