#pragma once

#include <iosfwd>
#include <string>

#include "designs/hypergraph.hpp"

namespace designs {

// JSON-lines format: header record {"n":..,"r":..}, then one record per
// instance {"iid":..,"verts":[..]} in ascending iid order.  Deterministic;
// parse(serialize(g)) == g.
std::string serialize_jsonl(const MultiHypergraph& g);
MultiHypergraph parse_jsonl(const std::string& text);
MultiHypergraph load_jsonl_file(const std::string& path);
void save_jsonl_file(const MultiHypergraph& g, const std::string& path);

}  // namespace designs
