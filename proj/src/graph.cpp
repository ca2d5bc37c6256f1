#include "erspar/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <queue>
#include <sstream>

namespace erspar {

WeightedGraph::WeightedGraph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n < 1) throw OutOfRange("graph: vertex count must be positive");
    for (auto& e : edges_) {
        if (e.u == e.v) throw SelfLoop("graph: self-loop at vertex " + std::to_string(e.u));
        if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
            throw IndexOutOfRange("graph: edge endpoint out of range");
        if (!(e.w > 0.0))
            throw NonPositiveWeight("graph: non-positive weight on edge (" +
                                    std::to_string(e.u) + "," + std::to_string(e.v) + ")");
        if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges_.begin(), edges_.end(), [](const Edge& a, const Edge& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    for (size_t i = 1; i < edges_.size(); ++i)
        if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
            throw DuplicateEdge("graph: duplicate edge (" + std::to_string(edges_[i].u) + "," +
                                std::to_string(edges_[i].v) + ")");
}

double WeightedGraph::min_weight() const {
    if (edges_.empty()) throw EmptyGraph("min_weight: graph has no edges");
    double m = edges_[0].w;
    for (const auto& e : edges_) m = std::min(m, e.w);
    return m;
}

double WeightedGraph::max_weight() const {
    if (edges_.empty()) throw EmptyGraph("max_weight: graph has no edges");
    double m = edges_[0].w;
    for (const auto& e : edges_) m = std::max(m, e.w);
    return m;
}

bool WeightedGraph::operator==(const WeightedGraph& o) const {
    if (n_ != o.n_ || edges_.size() != o.edges_.size()) return false;
    for (size_t i = 0; i < edges_.size(); ++i)
        if (edges_[i].u != o.edges_[i].u || edges_[i].v != o.edges_[i].v ||
            edges_[i].w != o.edges_[i].w)
            return false;
    return true;
}

namespace {

bool next_data_line(std::istream& in, std::string& line, int& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        size_t pos = line.find_first_not_of(" \t\r");
        if (pos == std::string::npos) continue; // blank
        if (line[pos] == '#') continue;         // comment
        return true;
    }
    return false;
}

[[noreturn]] void parse_fail(int lineno, const std::string& what) {
    throw ParseError("line " + std::to_string(lineno) + ": " + what);
}

} // namespace

WeightedGraph parse_edge_list(std::istream& in) {
    std::string line;
    int lineno = 0;
    if (!next_data_line(in, line, lineno)) throw ParseError("empty input");
    long long n = 0, m = 0;
    {
        std::istringstream hs(line);
        std::string extra;
        if (!(hs >> n >> m) || (hs >> extra)) parse_fail(lineno, "expected header \"n m\"");
    }
    if (n < 1) parse_fail(lineno, "vertex count must be positive");
    if (m < 0) parse_fail(lineno, "negative edge count");
    std::vector<Edge> edges;
    edges.reserve(static_cast<size_t>(m));
    for (long long i = 0; i < m; ++i) {
        if (!next_data_line(in, line, lineno))
            throw ParseError("expected " + std::to_string(m) + " edges, got " + std::to_string(i));
        std::istringstream es(line);
        long long u, v;
        double w;
        std::string extra;
        if (!(es >> u >> v >> w) || (es >> extra)) parse_fail(lineno, "expected \"u v w\"");
        if (u < 0 || v < 0 || u >= n || v >= n)
            parse_fail(lineno, "vertex index out of range");
        if (u == v) throw SelfLoop("line " + std::to_string(lineno) + ": self-loop");
        if (!(w > 0.0))
            throw NonPositiveWeight("line " + std::to_string(lineno) + ": non-positive weight");
        edges.push_back({static_cast<int>(u), static_cast<int>(v), w});
    }
    return WeightedGraph(static_cast<int>(n), std::move(edges));
}

WeightedGraph parse_edge_list(const std::string& text) {
    std::istringstream in(text);
    return parse_edge_list(in);
}

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

} // namespace

std::string serialize_edge_list(const WeightedGraph& g) {
    std::string out = std::to_string(g.vertex_count());
    out += ' ';
    out += std::to_string(g.edge_count());
    out += '\n';
    for (const auto& e : g.edges()) {
        out += std::to_string(e.u);
        out += ' ';
        out += std::to_string(e.v);
        out += ' ';
        out += format_double(e.w);
        out += '\n';
    }
    return out;
}

SymMatrix laplacian(const WeightedGraph& g) {
    SymMatrix l(g.vertex_count());
    for (const auto& e : g.edges()) {
        l.add(e.u, e.u, e.w);
        l.add(e.v, e.v, e.w);
        l.add(e.u, e.v, -e.w);
    }
    return l;
}

SymMatrix edge_laplacian(int a, int b, int n) {
    if (a == b) throw IndexOutOfRange("edge_laplacian: a == b");
    if (a < 0 || b < 0 || a >= n || b >= n)
        throw IndexOutOfRange("edge_laplacian: vertex out of range");
    SymMatrix l(n);
    l.set(a, a, 1.0);
    l.set(b, b, 1.0);
    l.set(a, b, -1.0);
    return l;
}

namespace {

std::vector<std::vector<int>> adjacency_lists(const WeightedGraph& g) {
    std::vector<std::vector<int>> adj(g.vertex_count());
    for (const auto& e : g.edges()) {
        adj[e.u].push_back(e.v);
        adj[e.v].push_back(e.u);
    }
    return adj;
}

} // namespace

bool is_connected(const WeightedGraph& g) {
    const int n = g.vertex_count();
    if (n <= 1) return true;
    auto adj = adjacency_lists(g);
    std::vector<char> seen(n, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int reached = 1;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                q.push(v);
            }
    }
    return reached == n;
}

std::optional<int> girth(const WeightedGraph& g) {
    const int n = g.vertex_count();
    auto adj = adjacency_lists(g);
    int best = -1;
    std::vector<int> dist(n), parent(n);
    for (int s = 0; s < n; ++s) {
        std::fill(dist.begin(), dist.end(), -1);
        std::fill(parent.begin(), parent.end(), -1);
        std::queue<int> q;
        q.push(s);
        dist[s] = 0;
        while (!q.empty()) {
            int u = q.front();
            q.pop();
            // Cycles through s longer than the best known cannot improve.
            if (best != -1 && 2 * dist[u] >= best) break;
            for (int v : adj[u]) {
                if (dist[v] == -1) {
                    dist[v] = dist[u] + 1;
                    parent[v] = u;
                    q.push(v);
                } else if (v != parent[u]) {
                    const int len = dist[u] + dist[v] + 1;
                    if (best == -1 || len < best) best = len;
                }
            }
        }
    }
    if (best == -1) return std::nullopt;
    return best;
}

double max_weighted_degree(const WeightedGraph& g) {
    if (g.edge_count() == 0) throw EmptyGraph("max_weighted_degree: graph has no edges");
    std::vector<double> deg(g.vertex_count(), 0.0);
    for (const auto& e : g.edges()) {
        deg[e.u] += e.w;
        deg[e.v] += e.w;
    }
    double mx = 0.0;
    for (double d : deg) mx = std::max(mx, d);
    return mx;
}

RoundedMultigraph round_to_multigraph(const WeightedGraph& g) {
    if (!is_connected(g)) throw Disconnected("round_to_multigraph: graph is disconnected");
    const double delta = 1.0 / 6.0;
    const double z = std::min(1.0, g.min_weight());
    const double n = static_cast<double>(g.vertex_count());
    const int t = static_cast<int>(std::ceil(std::log2(2.0 * n * n * n / (delta * z))));
    const double scale = std::ldexp(1.0, t); // 2^t
    std::vector<Edge> edges = g.edges();
    for (auto& e : edges) e.w = std::floor(scale * e.w);
    return RoundedMultigraph{WeightedGraph(g.vertex_count(), std::move(edges)), t};
}

} // namespace erspar
