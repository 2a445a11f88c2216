// graphdyn_rt.h - single-header runtime support for generated OpenMP code.
//
// Provides the dynamic graph storage (CSR plus diff-CSR delta chain with
// sentinel-marked deletions), update-stream loading, per-node and per-edge
// property tables, the atomic helpers the generated code relies on, and
// CSV result dumping.  Header-only; depends on the C++ standard library
// and the OpenMP runtime alone.
//
// File formats:
//   graph:   one edge per line, "src dst [weight]", '#' comments
//   updates: "a src dst [weight]" or "d src dst", '#' comments
//   results: "node,value" CSV per node property
#ifndef GRAPHDYN_RT_H
#define GRAPHDYN_RT_H

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <type_traits>
#include <string>
#include <vector>

namespace gd {

constexpr int64_t kSentinel = std::numeric_limits<int64_t>::max();
constexpr int64_t kInfI64 = std::numeric_limits<int64_t>::max();
constexpr double kInfF64 = std::numeric_limits<double>::infinity();

[[noreturn]] inline void die(const std::string& msg) {
    std::fprintf(stderr, "graphdyn_rt: %s\n", msg.c_str());
    std::exit(3);
}

inline int64_t sat_add(int64_t a, int64_t b) {
    if (a >= kInfI64 || b >= kInfI64) return kInfI64;
    return a + b;
}

inline int64_t sat_sub(int64_t a, int64_t b) {
    if (a >= kInfI64 || b >= kInfI64) return kInfI64;
    return a - b;
}

inline double sat_add(double a, double b) { return a + b; }
inline double sat_sub(double a, double b) { return a - b; }

// ---------------------------------------------------------------------------
// atomics: compare-exchange retry loops over the guard cell
// ---------------------------------------------------------------------------

template <typename T>
inline bool atomic_min(T* cell, typename std::common_type<T>::type val) {
    T cur = __atomic_load_n(cell, __ATOMIC_RELAXED);
    while (val < cur) {
        if (__atomic_compare_exchange_n(cell, &cur, val, true, __ATOMIC_ACQ_REL,
                                        __ATOMIC_RELAXED))
            return true;
    }
    return false;
}

template <typename T>
inline bool atomic_max(T* cell, typename std::common_type<T>::type val) {
    T cur = __atomic_load_n(cell, __ATOMIC_RELAXED);
    while (val > cur) {
        if (__atomic_compare_exchange_n(cell, &cur, val, true, __ATOMIC_ACQ_REL,
                                        __ATOMIC_RELAXED))
            return true;
    }
    return false;
}

inline bool atomic_min(double* cell, double val) {
    auto* raw = reinterpret_cast<uint64_t*>(cell);
    uint64_t cur = __atomic_load_n(raw, __ATOMIC_RELAXED);
    double curd;
    std::memcpy(&curd, &cur, 8);
    while (val < curd) {
        uint64_t want;
        std::memcpy(&want, &val, 8);
        if (__atomic_compare_exchange_n(raw, &cur, want, true, __ATOMIC_ACQ_REL,
                                        __ATOMIC_RELAXED))
            return true;
        std::memcpy(&curd, &cur, 8);
    }
    return false;
}

inline bool atomic_max(double* cell, double val) {
    auto* raw = reinterpret_cast<uint64_t*>(cell);
    uint64_t cur = __atomic_load_n(raw, __ATOMIC_RELAXED);
    double curd;
    std::memcpy(&curd, &cur, 8);
    while (val > curd) {
        uint64_t want;
        std::memcpy(&want, &val, 8);
        if (__atomic_compare_exchange_n(raw, &cur, want, true, __ATOMIC_ACQ_REL,
                                        __ATOMIC_RELAXED))
            return true;
        std::memcpy(&curd, &cur, 8);
    }
    return false;
}

template <typename T>
inline void atomic_add(T* cell, typename std::common_type<T>::type val) {
    __atomic_fetch_add(cell, val, __ATOMIC_ACQ_REL);
}

template <typename T>
inline void atomic_store(T* cell, typename std::common_type<T>::type val) {
    __atomic_store_n(cell, val, __ATOMIC_RELEASE);
}

inline void atomic_store(double* cell, double val) {
    uint64_t bits;
    std::memcpy(&bits, &val, 8);
    __atomic_store_n(reinterpret_cast<uint64_t*>(cell), bits, __ATOMIC_RELEASE);
}

inline void atomic_add(double* cell, double val) {
    auto* raw = reinterpret_cast<uint64_t*>(cell);
    uint64_t cur = __atomic_load_n(raw, __ATOMIC_RELAXED);
    for (;;) {
        double curd;
        std::memcpy(&curd, &cur, 8);
        double next = curd + val;
        uint64_t want;
        std::memcpy(&want, &next, 8);
        if (__atomic_compare_exchange_n(raw, &cur, want, true, __ATOMIC_ACQ_REL,
                                        __ATOMIC_RELAXED))
            return;
    }
}

// ---------------------------------------------------------------------------
// updates
// ---------------------------------------------------------------------------

struct Update {
    char kind;  // 'a' or 'd'
    int64_t src;
    int64_t dst;
    int64_t weight;
};

struct UpdateBatch {
    std::vector<Update> records;

    std::vector<Update> adds() const {
        std::vector<Update> out;
        for (const Update& u : records)
            if (u.kind == 'a') out.push_back(u);
        return out;
    }
    std::vector<Update> dels() const {
        std::vector<Update> out;
        for (const Update& u : records)
            if (u.kind == 'd') out.push_back(u);
        return out;
    }
};

class UpdateStream {
  public:
    std::vector<Update> records;

    static UpdateStream load(const std::string& path) {
        std::ifstream in(path);
        if (!in) die("cannot open update file " + path);
        UpdateStream s;
        std::string line;
        size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            std::istringstream is(line);
            std::string kind;
            if (!(is >> kind)) continue;
            Update u{};
            u.kind = kind[0];
            if (kind == "a") {
                if (!(is >> u.src >> u.dst)) die("bad add record at line " + std::to_string(lineno));
                if (!(is >> u.weight)) u.weight = 1;
            } else if (kind == "d") {
                if (!(is >> u.src >> u.dst)) die("bad del record at line " + std::to_string(lineno));
                u.weight = 1;
            } else {
                die("unknown update kind at line " + std::to_string(lineno));
            }
            s.records.push_back(u);
        }
        return s;
    }

    size_t size() const { return records.size(); }

    UpdateBatch slice(size_t start, size_t count) const {
        UpdateBatch b;
        size_t end = std::min(records.size(), start + count);
        for (size_t i = start; i < end; ++i) b.records.push_back(records[i]);
        return b;
    }
};

// ---------------------------------------------------------------------------
// graph storage: base CSR + diff-CSR chain
// ---------------------------------------------------------------------------

struct Edge {
    int64_t source;
    int64_t target;
    int64_t weight;
    int32_t segment;  // -1 marks a batch record, not a stored slot
    int64_t index;
};

inline Edge as_edge(const Update& u) { return Edge{u.src, u.dst, u.weight, -1, -1}; }

template <typename Range>
inline std::vector<Edge> collect(const Range& range) {
    std::vector<Edge> out;
    for (Edge e : range) out.push_back(e);
    return out;
}

struct Segment {
    std::vector<int64_t> offsets;  // node_count + 1 entries
    std::vector<int64_t> coords;
    std::vector<int64_t> weights;  // empty when unweighted

    static Segment from_arcs(int64_t n, const std::vector<Edge>& arcs, bool weighted) {
        Segment s;
        s.offsets.assign(static_cast<size_t>(n) + 1, 0);
        for (const Edge& a : arcs) s.offsets[static_cast<size_t>(a.source) + 1]++;
        for (size_t i = 1; i < s.offsets.size(); ++i) s.offsets[i] += s.offsets[i - 1];
        s.coords.assign(arcs.size(), 0);
        if (weighted) s.weights.assign(arcs.size(), 0);
        std::vector<int64_t> cursor(s.offsets.begin(), s.offsets.end() - 1);
        for (const Edge& a : arcs) {
            int64_t i = cursor[a.source]++;
            s.coords[i] = a.target;
            if (weighted) s.weights[i] = a.weight;
        }
        return s;
    }
};

struct RevEntry {
    int64_t src;
    int32_t segment;
    int64_t index;
};

class Graph {
  public:
    int64_t n = 0;
    bool directed = true;
    bool weighted = false;
    bool with_reverse = false;
    int64_t live_edges = 0;
    int64_t merge_interval = 1;
    int64_t version = 0;      // bumps on every structural change
    int64_t merge_epoch = 0;  // bumps on merge: slot identities reset
    std::vector<Segment> segments;                  // [0] is the base
    std::vector<std::pair<int32_t, int64_t>> claims;  // slots reused by inserts
    std::vector<std::vector<RevEntry>> rev;

    static Graph load(const std::string& path, bool directed, bool with_reverse,
                      int64_t merge_interval = 1, int64_t node_count = -1) {
        std::ifstream in(path);
        if (!in) die("cannot open graph file " + path);
        std::vector<Edge> edges;
        std::string line;
        size_t lineno = 0;
        int64_t max_id = -1;
        int seen_weighted = -1;
        while (std::getline(in, line)) {
            ++lineno;
            auto hash = line.find('#');
            if (hash != std::string::npos) line.resize(hash);
            std::istringstream is(line);
            int64_t s, d, w;
            if (!(is >> s >> d)) {
                std::string rest;
                if (is.clear(), is >> rest) die("malformed edge at line " + std::to_string(lineno));
                continue;
            }
            bool has_w = static_cast<bool>(is >> w);
            if (!has_w) w = 1;
            if (seen_weighted == -1) seen_weighted = has_w ? 1 : 0;
            else if (seen_weighted != (has_w ? 1 : 0))
                die("mixed weighted/unweighted lines at line " + std::to_string(lineno));
            if (s < 0 || d < 0) die("negative node id at line " + std::to_string(lineno));
            edges.push_back(Edge{s, d, w, 0, 0});
            max_id = std::max(max_id, std::max(s, d));
        }
        Graph g;
        g.n = node_count >= 0 ? node_count : max_id + 1;
        if (g.n <= max_id) die("node_count too small for graph file");
        g.directed = directed;
        g.weighted = seen_weighted == 1;
        g.with_reverse = with_reverse;
        g.merge_interval = merge_interval;
        std::vector<Edge> arcs;
        for (const Edge& e : edges) {
            arcs.push_back(e);
            if (!directed) arcs.push_back(Edge{e.target, e.source, e.weight, 0, 0});
        }
        std::stable_sort(arcs.begin(), arcs.end(),
                         [](const Edge& a, const Edge& b) { return a.source < b.source; });
        g.segments.push_back(Segment::from_arcs(g.n, arcs, g.weighted));
        g.live_edges = static_cast<int64_t>(arcs.size());
        if (with_reverse) g.rebuild_reverse();
        return g;
    }

    int64_t num_nodes() const { return n; }

    // -- neighbor iteration (skips sentinel slots across all segments) ------

    struct NeighborIter {
        const Graph* g;
        int64_t v;
        size_t seg;
        int64_t i;
        int64_t end;

        void settle() {
            while (seg < g->segments.size()) {
                const Segment& s = g->segments[seg];
                while (i < end && s.coords[i] == kSentinel) ++i;
                if (i < end) return;
                ++seg;
                if (seg < g->segments.size()) {
                    i = g->segments[seg].offsets[v];
                    end = g->segments[seg].offsets[v + 1];
                }
            }
            i = 0;  // normalize: exhausted iterators must equal end()
            end = 0;
        }
        bool operator!=(const NeighborIter& other) const { return seg != other.seg || i != other.i; }
        void operator++() {
            ++i;
            settle();
        }
        Edge operator*() const {
            const Segment& s = g->segments[seg];
            int64_t w = s.weights.empty() ? 1 : s.weights[i];
            return Edge{v, s.coords[i], w, static_cast<int32_t>(seg), i};
        }
    };

    struct NeighborRange {
        NeighborIter b, e;
        NeighborIter begin() const { return b; }
        NeighborIter end() const { return e; }
    };

    NeighborRange neighbors(int64_t v) const {
        NeighborIter b{this, v, 0, segments[0].offsets[v], segments[0].offsets[v + 1]};
        b.settle();
        NeighborIter e{this, v, segments.size(), 0, 0};
        return NeighborRange{b, e};
    }

    std::vector<Edge> in_edges(int64_t v) const {
        if (!with_reverse) die("graph loaded without reverse adjacency");
        std::vector<Edge> out;
        for (const RevEntry& r : rev[v]) {
            const Segment& s = segments[r.segment];
            int64_t w = s.weights.empty() ? 1 : s.weights[r.index];
            out.push_back(Edge{r.src, v, w, r.segment, r.index});
        }
        return out;
    }

    int64_t degree(int64_t v) const {
        int64_t d = 0;
        for (const Segment& s : segments)
            for (int64_t i = s.offsets[v]; i < s.offsets[v + 1]; ++i)
                if (s.coords[i] != kSentinel) ++d;
        return d;
    }

    // -- structural updates --------------------------------------------------

    void check_node(int64_t v, const Update& u) const {
        if (v < 0 || v >= n)
            die("update record references node " + std::to_string(v) + " outside graph (" +
                std::to_string(u.src) + " -> " + std::to_string(u.dst) + ")");
    }

    // applies the batch's delete records; misses are silent no-ops
    void update_del(const UpdateBatch& batch) {
        for (const Update& u : batch.records) {
            if (u.kind != 'd') continue;
            check_node(u.src, u);
            check_node(u.dst, u);
            bool found = remove_arc(u.src, u.dst);
            if (found && !directed) {
                if (u.src != u.dst) remove_arc(u.dst, u.src);
                else remove_arc(u.src, u.dst);
            }
        }
        ++version;
    }

    // applies the batch's add records; spills into one new delta if needed
    void update_add(const UpdateBatch& batch) {
        std::vector<Edge> leftovers;
        for (const Update& u : batch.records) {
            if (u.kind != 'a') continue;
            check_node(u.src, u);
            check_node(u.dst, u);
            insert_arc(u.src, u.dst, u.weight, leftovers);
            if (!directed) insert_arc(u.dst, u.src, u.weight, leftovers);
        }
        if (!leftovers.empty()) {
            segments.push_back(Segment::from_arcs(n, leftovers, weighted));
            int32_t seg = static_cast<int32_t>(segments.size()) - 1;
            if (with_reverse) {
                const Segment& s = segments[seg];
                for (int64_t v = 0; v < n; ++v)
                    for (int64_t i = s.offsets[v]; i < s.offsets[v + 1]; ++i)
                        rev[s.coords[i]].push_back(RevEntry{v, seg, i});
            }
        }
        ++version;
    }

    void merge_if_due(int64_t batch_index) {
        if ((batch_index + 1) % merge_interval == 0) merge();
    }

    void merge() {
        std::vector<Edge> arcs;
        for (int64_t v = 0; v < n; ++v)
            for (Edge e : neighbors(v)) arcs.push_back(e);
        Segment base = Segment::from_arcs(n, arcs, weighted);
        segments.clear();
        segments.push_back(std::move(base));
        live_edges = static_cast<int64_t>(arcs.size());
        claims.clear();
        ++version;
        ++merge_epoch;
        if (with_reverse) rebuild_reverse();
    }

  private:
    bool remove_arc(int64_t src, int64_t dst) {
        for (size_t seg = 0; seg < segments.size(); ++seg) {
            Segment& s = segments[seg];
            for (int64_t i = s.offsets[src]; i < s.offsets[src + 1]; ++i) {
                if (s.coords[i] == dst) {
                    s.coords[i] = kSentinel;
                    --live_edges;
                    if (with_reverse) drop_rev(dst, static_cast<int32_t>(seg), i);
                    return true;
                }
            }
        }
        return false;
    }

    void insert_arc(int64_t src, int64_t dst, int64_t w, std::vector<Edge>& leftovers) {
        ++live_edges;
        for (size_t seg = 0; seg < segments.size(); ++seg) {
            Segment& s = segments[seg];
            for (int64_t i = s.offsets[src]; i < s.offsets[src + 1]; ++i) {
                if (s.coords[i] == kSentinel) {
                    s.coords[i] = dst;
                    if (!s.weights.empty()) s.weights[i] = w;
                    claims.emplace_back(static_cast<int32_t>(seg), i);
                    if (with_reverse) rev[dst].push_back(RevEntry{src, static_cast<int32_t>(seg), i});
                    return;
                }
            }
        }
        leftovers.push_back(Edge{src, dst, w, 0, 0});
    }

    void drop_rev(int64_t dst, int32_t seg, int64_t idx) {
        auto& lst = rev[dst];
        for (size_t k = 0; k < lst.size(); ++k) {
            if (lst[k].segment == seg && lst[k].index == idx) {
                lst.erase(lst.begin() + static_cast<long>(k));
                return;
            }
        }
    }

    void rebuild_reverse() {
        rev.assign(static_cast<size_t>(n), {});
        for (size_t seg = 0; seg < segments.size(); ++seg) {
            const Segment& s = segments[seg];
            for (int64_t v = 0; v < n; ++v)
                for (int64_t i = s.offsets[v]; i < s.offsets[v + 1]; ++i)
                    if (s.coords[i] != kSentinel)
                        rev[s.coords[i]].push_back(RevEntry{v, static_cast<int32_t>(seg), i});
        }
    }
};

// ---------------------------------------------------------------------------
// property tables
// ---------------------------------------------------------------------------

template <typename T>
struct NodeProp {
    std::vector<T> data;
    T def{};

    void attach(int64_t n, T value) {
        def = value;
        data.assign(static_cast<size_t>(n), value);
    }
    void ensure(int64_t n) {
        if (data.empty()) data.assign(static_cast<size_t>(n), def);
    }
    T& operator[](int64_t v) { return data[static_cast<size_t>(v)]; }
    const T& operator[](int64_t v) const { return data[static_cast<size_t>(v)]; }
};

template <typename T>
inline bool any(const NodeProp<T>& p) {
    for (const T& x : p.data)
        if (x) return true;
    return false;
}

template <typename T>
inline void swap_clear(NodeProp<T>& base, NodeProp<T>& nxt) {
    base.data = nxt.data;
    std::fill(nxt.data.begin(), nxt.data.end(), nxt.def);
}

// Per-slot edge attributes, kept aligned with the graph's segments.  A merge
// resets everything; an insert that claims a vacant slot resets that cell.
template <typename T>
struct EdgeProp {
    const Graph* g = nullptr;
    T def{};
    std::vector<std::vector<T>> segs;
    int64_t seen_version = -1;
    int64_t seen_epoch = -1;
    size_t seen_claims = 0;

    void attach(const Graph& graph, T value) {
        g = &graph;
        def = value;
        rebuild();
    }
    void rebuild() {
        segs.clear();
        for (const Segment& s : g->segments) segs.emplace_back(s.coords.size(), def);
        seen_version = g->version;
        seen_epoch = g->merge_epoch;
        seen_claims = g->claims.size();
    }
    void sync() {
        if (!g || g->version == seen_version) return;
        if (g->merge_epoch != seen_epoch) {
            rebuild();
            return;
        }
        for (size_t k = seen_claims; k < g->claims.size(); ++k) {
            auto [seg, idx] = g->claims[k];
            segs[seg][idx] = def;
        }
        seen_claims = g->claims.size();
        while (segs.size() < g->segments.size())
            segs.emplace_back(g->segments[segs.size()].coords.size(), def);
        seen_version = g->version;
    }
    T& operator[](const Edge& e) {
        sync();
        if (e.segment < 0) die("edge property read on a batch record");
        return segs[e.segment][e.index];
    }
};

// ---------------------------------------------------------------------------
// flag flooding: level-synchronous BFS over weak components
// ---------------------------------------------------------------------------

template <typename T>
inline int64_t propagate_flags(const Graph& g, NodeProp<T>& flag) {
    std::vector<int64_t> frontier;
    for (int64_t v = 0; v < g.n; ++v)
        if (flag[v]) frontier.push_back(v);
    int64_t rounds = 0;
    while (!frontier.empty()) {
        ++rounds;
        std::vector<int64_t> next;
        #pragma omp parallel
        {
            std::vector<int64_t> mine;
            #pragma omp for schedule(dynamic) nowait
            for (int64_t k = 0; k < static_cast<int64_t>(frontier.size()); ++k) {
                int64_t v = frontier[k];
                for (Edge e : g.neighbors(v)) {
                    T expected = 0;
                    if (!flag[e.target] &&
                        __atomic_compare_exchange_n(&flag[e.target], &expected, T(1), true,
                                                    __ATOMIC_ACQ_REL, __ATOMIC_RELAXED))
                        mine.push_back(e.target);
                }
                if (g.directed) {
                    for (const Edge& e : g.in_edges(v)) {
                        T expected = 0;
                        if (!flag[e.source] &&
                            __atomic_compare_exchange_n(&flag[e.source], &expected, T(1), true,
                                                        __ATOMIC_ACQ_REL, __ATOMIC_RELAXED))
                            mine.push_back(e.source);
                    }
                }
            }
            #pragma omp critical
            next.insert(next.end(), mine.begin(), mine.end());
        }
        frontier = std::move(next);
    }
    return rounds;
}

// ---------------------------------------------------------------------------
// results and arguments
// ---------------------------------------------------------------------------

inline void ensure_parent_dir(const std::string& path) {
    std::error_code ec;
    auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent, ec);
}

template <typename T>
inline void dump_prop(const std::string& path, const NodeProp<T>& prop) {
    ensure_parent_dir(path);
    std::ofstream out(path);
    if (!out) die("cannot write " + path);
    out << "node,value\n";
    for (size_t v = 0; v < prop.data.size(); ++v) {
        if constexpr (std::is_floating_point<T>::value) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", static_cast<double>(prop.data[v]));
            out << v << "," << buf << "\n";
        } else {
            out << v << "," << static_cast<long long>(prop.data[v]) << "\n";
        }
    }
}

inline void dump_scalars(const std::string& path,
                         const std::vector<std::pair<std::string, std::string>>& rows) {
    ensure_parent_dir(path);
    std::ofstream out(path);
    if (!out) die("cannot write " + path);
    out << "name,value\n";
    for (const auto& [k, v] : rows) out << k << "," << v << "\n";
}

class Args {
  public:
    Args(int argc, char** argv) {
        for (int i = 1; i < argc; ++i) args_.emplace_back(argv[i]);
    }
    bool has(const std::string& flag) const {
        for (const auto& a : args_)
            if (a == flag) return true;
        return false;
    }
    std::string get(const std::string& flag, const std::string& def = "") const {
        for (size_t i = 0; i + 1 < args_.size(); ++i)
            if (args_[i] == flag) return args_[i + 1];
        if (def.empty()) die("missing required flag " + flag);
        return def;
    }
    int64_t geti(const std::string& flag, int64_t def) const {
        for (size_t i = 0; i + 1 < args_.size(); ++i)
            if (args_[i] == flag) return std::stoll(args_[i + 1]);
        return def;
    }
    double getf(const std::string& flag, double def) const {
        for (size_t i = 0; i + 1 < args_.size(); ++i)
            if (args_[i] == flag) return std::stod(args_[i + 1]);
        return def;
    }

  private:
    std::vector<std::string> args_;
};

}  // namespace gd

#endif  // GRAPHDYN_RT_H
