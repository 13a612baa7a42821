#include "designs/hypergraph.hpp"

#include <algorithm>

namespace designs {

void MultiHypergraph::check_verts(const std::vector<VertexId>& verts) const {
    if (static_cast<int>(verts.size()) != r_)
        throw InvalidArityError("edge arity " + std::to_string(verts.size()) +
                                " does not match uniformity " + std::to_string(r_));
    for (std::size_t i = 0; i < verts.size(); ++i) {
        if (verts[i] < 0 || verts[i] >= n_)
            throw Error("vertex " + std::to_string(verts[i]) + " outside universe [0," +
                        std::to_string(n_) + ")");
        if (i > 0 && verts[i] <= verts[i - 1])
            throw Error("edge vertices must be strictly increasing");
    }
}

const EdgeInstance& MultiHypergraph::instance(Iid iid) const {
    auto it = by_iid_.find(iid);
    if (it == by_iid_.end()) throw Error("unknown instance id " + std::to_string(iid));
    return edges_[it->second];
}

Iid MultiHypergraph::add_edge(std::vector<VertexId> verts) {
    Iid iid = next_iid_;
    add_edge_with_iid(iid, std::move(verts));
    return iid;
}

void MultiHypergraph::add_edge_with_iid(Iid iid, std::vector<VertexId> verts) {
    check_verts(verts);
    if (by_iid_.count(iid))
        throw IidCollisionError("instance id " + std::to_string(iid) + " already present");
    by_iid_[iid] = edges_.size();
    support_index_[verts].push_back(iid);
    edges_.push_back(EdgeInstance{iid, std::move(verts)});
    next_iid_ = std::max(next_iid_, iid + 1);
}

void MultiHypergraph::remove_edges(const IidSet& iids) {
    if (iids.empty()) return;
    std::vector<EdgeInstance> kept;
    kept.reserve(edges_.size());
    for (auto& e : edges_)
        if (!iid_contains(iids, e.iid)) kept.push_back(std::move(e));
    edges_ = std::move(kept);
    support_index_.clear();
    by_iid_.clear();
    for (std::size_t i = 0; i < edges_.size(); ++i) {
        by_iid_[edges_[i].iid] = i;
        support_index_[edges_[i].verts].push_back(edges_[i].iid);
    }
}

void MultiHypergraph::grow_universe(int new_n) {
    if (new_n < n_) throw Error("cannot shrink vertex universe");
    n_ = new_n;
}

MultiHypergraph MultiHypergraph::complete(int n, int r) {
    MultiHypergraph g(n, r);
    std::vector<VertexId> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    for (auto& s : k_subsets(all, r)) g.add_edge(s);
    return g;
}

bool MultiHypergraph::operator==(const MultiHypergraph& other) const {
    if (n_ != other.n_ || r_ != other.r_ || edges_.size() != other.edges_.size()) return false;
    for (const auto& e : edges_) {
        if (!other.has_instance(e.iid)) return false;
        if (other.instance(e.iid).verts != e.verts) return false;
    }
    return true;
}

IidSet iid_union(const IidSet& a, const IidSet& b) {
    IidSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

IidSet iid_difference(const IidSet& a, const IidSet& b) {
    IidSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

IidSet iid_intersection(const IidSet& a, const IidSet& b) {
    IidSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool iid_contains(const IidSet& s, Iid x) { return std::binary_search(s.begin(), s.end(), x); }

bool iid_subset(const IidSet& a, const IidSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool iid_disjoint(const IidSet& a, const IidSet& b) {
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib)
            ++ia;
        else if (*ib < *ia)
            ++ib;
        else
            return false;
    }
    return true;
}

void iid_sort_unique(IidSet& s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
}

IidSet all_iids(const MultiHypergraph& g) {
    IidSet out;
    out.reserve(g.edge_count());
    for (const auto& e : g.instances()) out.push_back(e.iid);
    iid_sort_unique(out);
    return out;
}

MultiHypergraph link(const MultiHypergraph& g, const std::vector<VertexId>& s) {
    if (static_cast<int>(s.size()) >= g.uniformity() && g.uniformity() > 0)
        throw InvalidArityError("link set size must be smaller than uniformity");
    std::vector<VertexId> ss(s);
    std::sort(ss.begin(), ss.end());
    MultiHypergraph out(g.vertex_count(), g.uniformity() - static_cast<int>(ss.size()));
    for (const auto& e : g.instances()) {
        if (!std::includes(e.verts.begin(), e.verts.end(), ss.begin(), ss.end())) continue;
        std::vector<VertexId> rest;
        std::set_difference(e.verts.begin(), e.verts.end(), ss.begin(), ss.end(),
                            std::back_inserter(rest));
        out.add_edge_with_iid(e.iid, rest);
    }
    return out;
}

MultiHypergraph join(const std::vector<VertexId>& s, const MultiHypergraph& l) {
    std::vector<VertexId> ss(s);
    std::sort(ss.begin(), ss.end());
    MultiHypergraph out(l.vertex_count(), l.uniformity() + static_cast<int>(ss.size()));
    for (const auto& e : l.instances()) {
        std::vector<VertexId> merged;
        std::set_union(e.verts.begin(), e.verts.end(), ss.begin(), ss.end(),
                       std::back_inserter(merged));
        if (merged.size() != e.verts.size() + ss.size())
            throw InvalidJoinError("join set overlaps an edge of the link part");
        out.add_edge_with_iid(e.iid, merged);
    }
    return out;
}

long long degree(const MultiHypergraph& g, const std::vector<VertexId>& s) {
    std::vector<VertexId> ss(s);
    std::sort(ss.begin(), ss.end());
    long long count = 0;
    for (const auto& e : g.instances())
        if (std::includes(e.verts.begin(), e.verts.end(), ss.begin(), ss.end())) ++count;
    return count;
}

long long max_degree(const MultiHypergraph& g, int k) {
    if (k == 0) return static_cast<long long>(g.edge_count());
    std::map<std::vector<VertexId>, long long> counts;
    for (const auto& e : g.instances())
        for (auto& sub : k_subsets(e.verts, k)) ++counts[sub];
    long long best = 0;
    for (auto& [_, c] : counts) best = std::max(best, c);
    return best;
}

long long multiplicity(const MultiHypergraph& g, const std::vector<VertexId>& support) {
    std::vector<VertexId> ss(support);
    std::sort(ss.begin(), ss.end());
    auto it = g.support_index().find(ss);
    return it == g.support_index().end() ? 0 : static_cast<long long>(it->second.size());
}

long long max_multiplicity(const MultiHypergraph& g) {
    long long best = 0;
    for (const auto& [_, iids] : g.support_index())
        best = std::max(best, static_cast<long long>(iids.size()));
    return best;
}

bool is_flat(const MultiHypergraph& g, const std::vector<VertexId>& y, int i) {
    std::vector<VertexId> ys(y);
    std::sort(ys.begin(), ys.end());
    for (const auto& e : g.instances()) {
        int outside = 0;
        for (VertexId v : e.verts)
            if (!std::binary_search(ys.begin(), ys.end(), v)) ++outside;
        if (outside > i) return false;
    }
    return true;
}

MultiHypergraph union_of(const MultiHypergraph& a, const MultiHypergraph& b) {
    if (a.uniformity() != b.uniformity())
        throw InvalidArityError("union requires matching uniformity");
    MultiHypergraph out(std::max(a.vertex_count(), b.vertex_count()), a.uniformity());
    for (const auto& e : a.instances()) out.add_edge_with_iid(e.iid, e.verts);
    for (const auto& e : b.instances()) out.add_edge_with_iid(e.iid, e.verts);
    return out;
}

bool are_edge_disjoint(const MultiHypergraph& a, const MultiHypergraph& b) {
    for (const auto& e : a.instances())
        if (b.has_instance(e.iid)) return false;
    return true;
}

MultiHypergraph subgraph(const MultiHypergraph& g, const IidSet& iids) {
    MultiHypergraph out(g.vertex_count(), g.uniformity());
    for (Iid iid : iids) out.add_edge_with_iid(iid, g.instance(iid).verts);
    return out;
}

std::vector<VertexId> support_vertices(const MultiHypergraph& g) {
    std::vector<VertexId> out;
    for (const auto& e : g.instances()) out.insert(out.end(), e.verts.begin(), e.verts.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<VertexId> support_vertices(const MultiHypergraph& g, const IidSet& iids) {
    std::vector<VertexId> out;
    for (Iid iid : iids) {
        const auto& v = g.instance(iid).verts;
        out.insert(out.end(), v.begin(), v.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::map<Iid, Iid> append_remapped(MultiHypergraph& dst, const MultiHypergraph& src,
                                   const std::vector<VertexId>& vertex_map) {
    if (static_cast<int>(vertex_map.size()) != src.vertex_count())
        throw Error("vertex map size mismatch");
    std::map<Iid, Iid> iid_map;
    for (const auto& e : src.instances()) {
        std::vector<VertexId> verts;
        verts.reserve(e.verts.size());
        for (VertexId v : e.verts) verts.push_back(vertex_map[v]);
        std::sort(verts.begin(), verts.end());
        iid_map[e.iid] = dst.add_edge(std::move(verts));
    }
    return iid_map;
}

std::vector<std::vector<VertexId>> k_subsets(const std::vector<VertexId>& verts, int k) {
    std::vector<std::vector<VertexId>> out;
    if (k < 0 || k > static_cast<int>(verts.size())) return out;
    std::vector<int> idx(k);
    for (int i = 0; i < k; ++i) idx[i] = i;
    const int n = static_cast<int>(verts.size());
    while (true) {
        std::vector<VertexId> sub(k);
        for (int i = 0; i < k; ++i) sub[i] = verts[idx[i]];
        out.push_back(std::move(sub));
        int i = k - 1;
        while (i >= 0 && idx[i] == n - k + i) --i;
        if (i < 0) break;
        ++idx[i];
        for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    return out;
}

}  // namespace designs
