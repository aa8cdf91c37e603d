#pragma once

// Undirected simple graphs in compressed adjacency form, plus the two
// sampling structures the graph simulator is built on.

#include "cewc/errors.hpp"
#include "cewc/random.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace cewc {

/// Undirected, connected, loop-free graph. Arc `a` in [offset(v), offset(v+1))
/// points from v to target(a); reverse(a) is the arc pointing back.
class Graph {
public:
    using Vertex = std::int32_t;
    using Arc = std::int64_t;

    /// Builds from per-vertex neighbour lists; they must be symmetric.
    static Graph from_adjacency(const std::vector<std::vector<Vertex>>& adj)
    {
        const auto m = static_cast<Vertex>(adj.size());
        if (m < 2) throw invalid_params("graph needs at least two vertices");
        std::vector<std::pair<Vertex, Vertex>> edges;
        for (Vertex v = 0; v < m; ++v) {
            for (Vertex u : adj[v]) {
                if (u < 0 || u >= m) throw invalid_params("neighbour index out of range");
                if (u == v) throw invalid_params("self-loop at vertex " + std::to_string(v));
                const auto& back = adj[u];
                if (std::find(back.begin(), back.end(), v) == back.end())
                    throw invalid_params("adjacency is not symmetric: " + std::to_string(v) + " -> " + std::to_string(u));
                if (v < u) edges.emplace_back(v, u);
            }
        }
        return from_edges(m, edges);
    }

    /// Builds from undirected edges; duplicates (in either orientation) merge.
    static Graph from_edges(Vertex vertex_count, std::vector<std::pair<Vertex, Vertex>> edges)
    {
        if (vertex_count < 2) throw invalid_params("graph needs at least two vertices");
        for (auto& [u, v] : edges) {
            if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count)
                throw invalid_params("edge endpoint out of range");
            if (u == v) throw invalid_params("self-loop at vertex " + std::to_string(u));
            if (u > v) std::swap(u, v);
        }
        std::sort(edges.begin(), edges.end());
        edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

        Graph g;
        g.offset_.assign(static_cast<std::size_t>(vertex_count) + 1, 0);
        for (const auto& [u, v] : edges) {
            ++g.offset_[u + 1];
            ++g.offset_[v + 1];
        }
        std::partial_sum(g.offset_.begin(), g.offset_.end(), g.offset_.begin());
        g.target_.resize(static_cast<std::size_t>(g.offset_.back()));
        g.reverse_.resize(g.target_.size());
        std::vector<Arc> fill(g.offset_.begin(), g.offset_.end() - 1);
        for (const auto& [u, v] : edges) {
            const Arc a = fill[u]++;
            const Arc b = fill[v]++;
            g.target_[a] = v;
            g.target_[b] = u;
            g.reverse_[a] = b;
            g.reverse_[b] = a;
        }
        if (!g.connected()) throw invalid_params("graph is not connected");
        return g;
    }

    /// Edge list: one "u v" pair of 0-based indices per line. Blank lines and
    /// lines starting with '#' are skipped. Vertex count is max index + 1.
    static Graph parse_edge_list(std::istream& in)
    {
        std::vector<std::pair<Vertex, Vertex>> edges;
        Vertex max_index = -1;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto first = line.find_first_not_of(" \t\r");
            if (first == std::string::npos || line[first] == '#') continue;
            std::istringstream ls(line);
            long long u = -1;
            long long v = -1;
            std::string rest;
            if (!(ls >> u >> v) || (ls >> rest))
                throw invalid_params("edge list line " + std::to_string(lineno) + ": expected two vertex indices");
            if (u < 0 || v < 0 || u > INT32_MAX - 1 || v > INT32_MAX - 1)
                throw invalid_params("edge list line " + std::to_string(lineno) + ": index out of range");
            edges.emplace_back(static_cast<Vertex>(u), static_cast<Vertex>(v));
            max_index = std::max({max_index, static_cast<Vertex>(u), static_cast<Vertex>(v)});
        }
        return from_edges(max_index + 1, std::move(edges));
    }

    static Graph load_edge_list(const std::string& path)
    {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open graph file: " + path);
        return parse_edge_list(in);
    }

    Vertex vertex_count() const noexcept { return static_cast<Vertex>(offset_.size() - 1); }
    Arc arc_count() const noexcept { return static_cast<Arc>(target_.size()); }
    Arc edge_count() const noexcept { return arc_count() / 2; }
    Arc offset(Vertex v) const noexcept { return offset_[v]; }
    Arc degree(Vertex v) const noexcept { return offset_[v + 1] - offset_[v]; }
    Vertex target(Arc a) const noexcept { return target_[a]; }
    Arc reverse(Arc a) const noexcept { return reverse_[a]; }

    std::vector<Vertex> neighbors(Vertex v) const
    {
        return {target_.begin() + offset_[v], target_.begin() + offset_[v + 1]};
    }

private:
    bool connected() const
    {
        std::vector<char> seen(static_cast<std::size_t>(vertex_count()), 0);
        std::vector<Vertex> stack{0};
        seen[0] = 1;
        Vertex reached = 1;
        while (!stack.empty()) {
            const Vertex v = stack.back();
            stack.pop_back();
            for (Arc a = offset_[v]; a < offset_[v + 1]; ++a) {
                if (!seen[target_[a]]) {
                    seen[target_[a]] = 1;
                    ++reached;
                    stack.push_back(target_[a]);
                }
            }
        }
        return reached == vertex_count();
    }

    std::vector<Arc> offset_;
    std::vector<Vertex> target_;
    std::vector<Arc> reverse_;
};

inline Graph complete_graph(std::int64_t m)
{
    if (m < 2) throw invalid_params("complete graph needs m >= 2");
    if (m > 200'000) throw resource_limit("complete graph with more than 2e5 vertices is too large to store");
    std::vector<std::pair<Graph::Vertex, Graph::Vertex>> edges;
    edges.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
    for (Graph::Vertex u = 0; u < m; ++u)
        for (Graph::Vertex v = u + 1; v < m; ++v) edges.emplace_back(u, v);
    return Graph::from_edges(static_cast<Graph::Vertex>(m), std::move(edges));
}

/// Set of small integer keys with O(1) insert, erase and uniform sampling.
class IndexedSet {
public:
    explicit IndexedSet(std::size_t capacity = 0) : pos_(capacity, npos) {}

    bool contains(std::size_t key) const noexcept { return key < pos_.size() && pos_[key] != npos; }
    std::size_t size() const noexcept { return items_.size(); }
    bool empty() const noexcept { return items_.empty(); }
    const std::vector<std::size_t>& items() const noexcept { return items_; }

    void insert(std::size_t key)
    {
        if (key >= pos_.size()) pos_.resize(key + 1, npos);
        if (pos_[key] != npos) return;
        pos_[key] = items_.size();
        items_.push_back(key);
    }

    void erase(std::size_t key)
    {
        if (!contains(key)) return;
        const std::size_t at = pos_[key];
        const std::size_t last = items_.back();
        items_[at] = last;
        pos_[last] = at;
        items_.pop_back();
        pos_[key] = npos;
    }

    template <BitGenerator G>
    std::size_t sample(G& g) const
    {
        return items_[uniform_index(g, items_.size())];
    }

private:
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::vector<std::size_t> items_;
    std::vector<std::size_t> pos_;
};

/// Fenwick tree over non-negative integer weights; samples an index with
/// probability proportional to its weight.
class WeightTree {
public:
    explicit WeightTree(std::size_t size = 0) : tree_(size + 1, 0), weight_(size, 0)
    {
        top_ = 1;
        while (top_ * 2 <= size) top_ *= 2;
    }

    std::size_t size() const noexcept { return weight_.size(); }
    std::int64_t total() const noexcept { return total_; }
    std::int64_t weight(std::size_t i) const noexcept { return weight_[i]; }

    void add(std::size_t i, std::int64_t delta)
    {
        weight_[i] += delta;
        total_ += delta;
        for (std::size_t k = i + 1; k < tree_.size(); k += k & (~k + 1)) tree_[k] += delta;
    }

    void set(std::size_t i, std::int64_t w) { add(i, w - weight_[i]); }

    /// Index i such that prefix(i) <= target < prefix(i) + weight(i).
    std::size_t find(std::int64_t target) const
    {
        std::size_t pos = 0;
        for (std::size_t step = top_; step > 0; step >>= 1) {
            const std::size_t next = pos + step;
            if (next < tree_.size() && tree_[next] <= target) {
                pos = next;
                target -= tree_[next];
            }
        }
        return pos;
    }

    template <BitGenerator G>
    std::size_t sample(G& g) const
    {
        return find(static_cast<std::int64_t>(uniform_index(g, static_cast<std::uint64_t>(total_))));
    }

private:
    std::vector<std::int64_t> tree_;
    std::vector<std::int64_t> weight_;
    std::int64_t total_ = 0;
    std::size_t top_ = 1;
};

} // namespace cewc
