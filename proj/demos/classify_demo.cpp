// Classify the shipped example inputs and print their verdicts and strata.
#include <cstdio>

#include "elnet/classify.hpp"
#include "elnet/io.hpp"

using namespace elnet;

int main(int argc, char** argv) {
    const std::string dir = argc > 1 ? argv[1] : "data";
    for (const char* name : {"theta.network.json", "fan_limit.network.json",
                             "collapsed_cycle.network.json"}) {
        const std::string path = dir + "/" + name;
        Network n = network_from_json(load_json_file(path));
        const Verdict v = classify_network(n);
        std::printf("%-30s %s\n", name, to_string(v.kind));
        for (const auto& r : v.reasons) std::printf("  %s\n", r.c_str());
        if (v.strata && v.strata->verdict != StratifyVerdict::NotStratified) {
            std::printf("  singular part stratified in %d step(s):", v.strata->step);
            for (const auto& layer : v.strata->strata) {
                std::printf(" {");
                for (std::size_t k = 0; k < layer.size(); ++k)
                    std::printf("%s%s", k ? "," : "", n.graph().edge_id(layer[k]).c_str());
                std::printf("}");
            }
            std::printf("\n");
        }
    }
    return 0;
}
