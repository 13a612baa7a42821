#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace designs {

using VertexId = int;
using Iid = std::uint64_t;

// Sorted, duplicate-free set of edge-instance ids.
using IidSet = std::vector<Iid>;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidArityError : Error {
    using Error::Error;
};
struct InvalidJoinError : Error {
    using Error::Error;
};
struct IidCollisionError : Error {
    using Error::Error;
};
struct EmbeddingFailure : Error {
    using Error::Error;
};
struct CompositionError : Error {
    using Error::Error;
};

struct EdgeInstance {
    Iid iid = 0;
    std::vector<VertexId> verts;  // strictly increasing, no repeats
};

// r-uniform multi-hypergraph over the dense vertex universe [0, n).
// Every edge instance carries a unique id; parallel instances share a
// support but keep distinct ids, so edge-disjointness and decomposition
// certificates are well-defined as id partitions.
class MultiHypergraph {
public:
    MultiHypergraph() = default;
    MultiHypergraph(int n, int r) : n_(n), r_(r) {
        if (n < 0 || r < 0) throw Error("hypergraph: negative dimensions");
    }

    int vertex_count() const { return n_; }
    int uniformity() const { return r_; }
    std::size_t edge_count() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }

    const std::vector<EdgeInstance>& instances() const { return edges_; }
    const EdgeInstance& instance(Iid iid) const;
    bool has_instance(Iid iid) const { return by_iid_.count(iid) > 0; }

    // Supports in sorted order with their instance lists (ids ascending).
    const std::map<std::vector<VertexId>, IidSet>& support_index() const { return support_index_; }

    Iid add_edge(std::vector<VertexId> verts);
    void add_edge_with_iid(Iid iid, std::vector<VertexId> verts);
    void remove_edges(const IidSet& iids);
    void grow_universe(int new_n);

    Iid next_iid() const { return next_iid_; }
    void reserve_iids(Iid base) { next_iid_ = std::max(next_iid_, base); }

    static MultiHypergraph complete(int n, int r);

    bool operator==(const MultiHypergraph& other) const;

private:
    int n_ = 0;
    int r_ = 0;
    std::vector<EdgeInstance> edges_;
    std::map<std::vector<VertexId>, IidSet> support_index_;
    std::unordered_map<Iid, std::size_t> by_iid_;
    Iid next_iid_ = 0;

    void check_verts(const std::vector<VertexId>& verts) const;
};

// --- instance-set helpers -------------------------------------------------

IidSet iid_union(const IidSet& a, const IidSet& b);
IidSet iid_difference(const IidSet& a, const IidSet& b);
IidSet iid_intersection(const IidSet& a, const IidSet& b);
bool iid_contains(const IidSet& s, Iid x);
bool iid_subset(const IidSet& a, const IidSet& b);
bool iid_disjoint(const IidSet& a, const IidSet& b);
void iid_sort_unique(IidSet& s);
IidSet all_iids(const MultiHypergraph& g);

// --- core operations ------------------------------------------------------

// Link graph g(S): edges containing S, with S removed.  Output instances
// keep their source instance id.
MultiHypergraph link(const MultiHypergraph& g, const std::vector<VertexId>& s);

// S ⊎ L: prepend S to every edge of L.  Inverse of link on its image.
MultiHypergraph join(const std::vector<VertexId>& s, const MultiHypergraph& l);

// Number of instances whose support contains S (|S| <= r).
long long degree(const MultiHypergraph& g, const std::vector<VertexId>& s);

// Max of degree over all k-sets; edge-local enumeration.
long long max_degree(const MultiHypergraph& g, int k);

long long multiplicity(const MultiHypergraph& g, const std::vector<VertexId>& support);

long long max_multiplicity(const MultiHypergraph& g);

// Every edge has at most i vertices outside y.
bool is_flat(const MultiHypergraph& g, const std::vector<VertexId>& y, int i);

MultiHypergraph union_of(const MultiHypergraph& a, const MultiHypergraph& b);
bool are_edge_disjoint(const MultiHypergraph& a, const MultiHypergraph& b);

// Sub-multigraph keeping exactly the given instances (ids preserved).
MultiHypergraph subgraph(const MultiHypergraph& g, const IidSet& iids);

// Vertices actually touched by edges.
std::vector<VertexId> support_vertices(const MultiHypergraph& g);
std::vector<VertexId> support_vertices(const MultiHypergraph& g, const IidSet& iids);

// Append all instances of src to dst, remapping vertices through map
// (map.size() == src.vertex_count()); returns old iid -> new iid.
std::map<Iid, Iid> append_remapped(MultiHypergraph& dst, const MultiHypergraph& src,
                                   const std::vector<VertexId>& vertex_map);

std::vector<std::vector<VertexId>> k_subsets(const std::vector<VertexId>& verts, int k);

}  // namespace designs
