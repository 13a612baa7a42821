#include "designs/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace designs {

using nlohmann::json;

std::string serialize_jsonl(const MultiHypergraph& g) {
    std::ostringstream out;
    out << json{{"n", g.vertex_count()}, {"r", g.uniformity()}}.dump() << "\n";
    std::vector<const EdgeInstance*> sorted;
    sorted.reserve(g.edge_count());
    for (const auto& e : g.instances()) sorted.push_back(&e);
    std::sort(sorted.begin(), sorted.end(),
              [](const EdgeInstance* a, const EdgeInstance* b) { return a->iid < b->iid; });
    for (const auto* e : sorted)
        out << json{{"iid", e->iid}, {"verts", e->verts}}.dump() << "\n";
    return out.str();
}

MultiHypergraph parse_jsonl(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    MultiHypergraph g;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line);
        if (!have_header) {
            g = MultiHypergraph(j.at("n").get<int>(), j.at("r").get<int>());
            have_header = true;
            continue;
        }
        g.add_edge_with_iid(j.at("iid").get<Iid>(), j.at("verts").get<std::vector<VertexId>>());
    }
    if (!have_header) throw Error("hypergraph stream missing header record");
    return g;
}

MultiHypergraph load_jsonl_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_jsonl(buf.str());
}

void save_jsonl_file(const MultiHypergraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << serialize_jsonl(g);
}

}  // namespace designs
