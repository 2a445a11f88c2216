// generated by graphdyn omp backend v0.1.0
#include "graphdyn_rt.h"
#include <omp.h>

void staticSSSP(gd::Graph& g, gd::NodeProp<int64_t>& dist, gd::NodeProp<int64_t>& parent, int64_t src);
void decrementalSSSP(gd::Graph& g, gd::NodeProp<int64_t>& dist, gd::NodeProp<int64_t>& parent, gd::NodeProp<uint8_t>& modified, int64_t src);
void incrementalSSSP(gd::Graph& g, gd::NodeProp<int64_t>& dist, gd::NodeProp<int64_t>& parent, gd::NodeProp<uint8_t>& modified, int64_t src);
void dynamicSSSP(gd::Graph& g, gd::NodeProp<int64_t>& dist, gd::NodeProp<int64_t>& parent, const gd::UpdateStream& updateList, int64_t batchsize, int64_t src);

void staticSSSP(gd::Graph& g, gd::NodeProp<int64_t>& dist, gd::NodeProp<int64_t>& parent, int64_t src) {
    gd::NodeProp<uint8_t> modified;
    modified.attach(g.num_nodes(), 0);
    gd::NodeProp<uint8_t> modified_nxt;
    modified_nxt.attach(g.num_nodes(), 0);
    dist.attach(g.num_nodes(), (int64_t)(gd::kInfI64));
    parent.attach(g.num_nodes(), (int64_t)(-(1)));
    modified.attach(g.num_nodes(), (uint8_t)(false));
    modified_nxt.attach(g.num_nodes(), (uint8_t)(false));
    dist[src] = 0;
    modified[src] = true;
    bool finished = false;
    {
        int64_t _fp1 = 0;
        const int64_t _fp1_cap = 10 * g.num_nodes();
        while (true) {
            bool _fp1_done = !gd::any(modified);
            finished = _fp1_done;
            if (_fp1_done) break;
            if (_fp1 >= _fp1_cap) gd::die("fixed point diverged");
            #pragma omp parallel for schedule(dynamic)
            for (int64_t v = 0; v < g.num_nodes(); ++v) {
                if (!((modified[v] == true))) continue;
                for (gd::Edge e : g.neighbors(v)) {
                    {
                        auto _c2 = gd::sat_add(dist[v], e.weight);
                        auto _c3 = true;
                        if (gd::atomic_min(&(dist[e.target]), (int64_t)(_c2))) {
                            gd::atomic_store(&(modified_nxt[e.target]), (uint8_t)(_c3));
                        }
                    }
                }
            }
            gd::swap_clear(modified, modified_nxt);
            ++_fp1;
        }
    }
    #pragma omp parallel for schedule(dynamic)
    for (int64_t v = 0; v < g.num_nodes(); ++v) {
        if (((v != src) && (dist[v] < gd::kInfI64))) {
            parent[v] = -(1);
            for (gd::Edge e : g.in_edges(v)) {
                if ((gd::sat_add(dist[e.source], e.weight) == dist[v])) {
                    if (((parent[v] == -(1)) || (e.source < parent[v]))) {
                        parent[v] = e.source;
                    }
                }
            }
        }
    }
}

void decrementalSSSP(gd::Graph& g, gd::NodeProp<int64_t>& dist, gd::NodeProp<int64_t>& parent, gd::NodeProp<uint8_t>& modified, int64_t src) {
    gd::NodeProp<uint8_t> modified_nxt;
    modified_nxt.attach(g.num_nodes(), 0);
    gd::NodeProp<uint8_t> stale;
    stale.attach(g.num_nodes(), 0);
    gd::NodeProp<uint8_t> changed;
    changed.attach(g.num_nodes(), 0);
    modified_nxt.attach(g.num_nodes(), (uint8_t)(false));
    stale.attach(g.num_nodes(), (uint8_t)(false));
    changed.attach(g.num_nodes(), (uint8_t)(false));
    dist[src] = 0;
    #pragma omp parallel for schedule(dynamic)
    for (int64_t v = 0; v < g.num_nodes(); ++v) {
        if (!((modified[v] == true))) continue;
        stale[v] = true;
    }
    bool finished = false;
    {
        int64_t _fp4 = 0;
        const int64_t _fp4_cap = 10 * g.num_nodes();
        while (true) {
            bool _fp4_done = !gd::any(modified);
            finished = _fp4_done;
            if (_fp4_done) break;
            if (_fp4 >= _fp4_cap) gd::die("fixed point diverged");
            #pragma omp parallel for schedule(dynamic)
            for (int64_t v = 0; v < g.num_nodes(); ++v) {
                if (!((modified[v] == true))) continue;
                for (gd::Edge e : g.neighbors(v)) {
                    if ((parent[e.target] == v)) {
                        gd::atomic_store(&(dist[e.target]), (int64_t)(gd::kInfI64));
                        gd::atomic_store(&(parent[e.target]), (int64_t)(-(1)));
                        gd::atomic_store(&(stale[e.target]), (uint8_t)(true));
                        gd::atomic_store(&(modified_nxt[e.target]), (uint8_t)(true));
                    }
                }
            }
            gd::swap_clear(modified, modified_nxt);
            ++_fp4;
        }
    }
    dist[src] = 0;
    #pragma omp parallel for schedule(dynamic)
    for (int64_t v = 0; v < g.num_nodes(); ++v) {
        if (!((stale[v] == true))) continue;
        modified[v] = true;
    }
    bool settled = false;
    {
        int64_t _fp5 = 0;
        const int64_t _fp5_cap = 10 * g.num_nodes();
        while (true) {
            bool _fp5_done = !gd::any(modified);
            settled = _fp5_done;
            if (_fp5_done) break;
            if (_fp5 >= _fp5_cap) gd::die("fixed point diverged");
            #pragma omp parallel for schedule(dynamic)
            for (int64_t v = 0; v < g.num_nodes(); ++v) {
                if (!((modified[v] == true))) continue;
                for (gd::Edge e : g.in_edges(v)) {
                    {
                        auto _c6 = gd::sat_add(dist[e.source], e.weight);
                        auto _c7 = true;
                        if (gd::atomic_min(&(dist[v]), (int64_t)(_c6))) {
                            gd::atomic_store(&(changed[v]), (uint8_t)(_c7));
                        }
                    }
                }
            }
            #pragma omp parallel for schedule(dynamic)
            for (int64_t v = 0; v < g.num_nodes(); ++v) {
                if (!((changed[v] == true))) continue;
                changed[v] = false;
                for (gd::Edge e : g.neighbors(v)) {
                    if (stale[e.target]) {
                        gd::atomic_store(&(modified_nxt[e.target]), (uint8_t)(true));
                    }
                }
            }
            gd::swap_clear(modified, modified_nxt);
            ++_fp5;
        }
    }
    #pragma omp parallel for schedule(dynamic)
    for (int64_t v = 0; v < g.num_nodes(); ++v) {
        if (!((stale[v] == true))) continue;
        if (((v != src) && (dist[v] < gd::kInfI64))) {
            parent[v] = -(1);
            for (gd::Edge e : g.in_edges(v)) {
                if ((gd::sat_add(dist[e.source], e.weight) == dist[v])) {
                    if (((parent[v] == -(1)) || (e.source < parent[v]))) {
                        parent[v] = e.source;
                    }
                }
            }
        }
    }
}

void incrementalSSSP(gd::Graph& g, gd::NodeProp<int64_t>& dist, gd::NodeProp<int64_t>& parent, gd::NodeProp<uint8_t>& modified, int64_t src) {
    gd::NodeProp<uint8_t> modified_nxt;
    modified_nxt.attach(g.num_nodes(), 0);
    gd::NodeProp<uint8_t> touched;
    touched.attach(g.num_nodes(), 0);
    modified_nxt.attach(g.num_nodes(), (uint8_t)(false));
    touched.attach(g.num_nodes(), (uint8_t)(false));
    #pragma omp parallel for schedule(dynamic)
    for (int64_t v = 0; v < g.num_nodes(); ++v) {
        if (!((modified[v] == true))) continue;
        touched[v] = true;
    }
    bool finished = false;
    {
        int64_t _fp8 = 0;
        const int64_t _fp8_cap = 10 * g.num_nodes();
        while (true) {
            bool _fp8_done = !gd::any(modified);
            finished = _fp8_done;
            if (_fp8_done) break;
            if (_fp8 >= _fp8_cap) gd::die("fixed point diverged");
            #pragma omp parallel for schedule(dynamic)
            for (int64_t v = 0; v < g.num_nodes(); ++v) {
                if (!((modified[v] == true))) continue;
                for (gd::Edge e : g.neighbors(v)) {
                    {
                        auto _c9 = gd::sat_add(dist[v], e.weight);
                        auto _c10 = true;
                        auto _c11 = true;
                        if (gd::atomic_min(&(dist[e.target]), (int64_t)(_c9))) {
                            gd::atomic_store(&(modified_nxt[e.target]), (uint8_t)(_c10));
                            gd::atomic_store(&(touched[e.target]), (uint8_t)(_c11));
                        }
                    }
                }
            }
            gd::swap_clear(modified, modified_nxt);
            ++_fp8;
        }
    }
    #pragma omp parallel for schedule(dynamic)
    for (int64_t v = 0; v < g.num_nodes(); ++v) {
        if (!((touched[v] == true))) continue;
        if (((v != src) && (dist[v] < gd::kInfI64))) {
            parent[v] = -(1);
            for (gd::Edge e : g.in_edges(v)) {
                if ((gd::sat_add(dist[e.source], e.weight) == dist[v])) {
                    if (((parent[v] == -(1)) || (e.source < parent[v]))) {
                        parent[v] = e.source;
                    }
                }
            }
        }
    }
}

void dynamicSSSP(gd::Graph& g, gd::NodeProp<int64_t>& dist, gd::NodeProp<int64_t>& parent, const gd::UpdateStream& updateList, int64_t batchsize, int64_t src) {
    gd::NodeProp<uint8_t> activeOnDelete;
    activeOnDelete.attach(g.num_nodes(), 0);
    gd::NodeProp<uint8_t> activeOnAdd;
    activeOnAdd.attach(g.num_nodes(), 0);
    staticSSSP(g, dist, parent, src);
    {
        int64_t _b12_size = batchsize;
        int64_t _b12_index = 0;
        for (size_t _b12 = 0; _b12 < updateList.size(); _b12 += _b12_size, ++_b12_index) {
            gd::UpdateBatch _batch13 = updateList.slice(_b12, _b12_size);
            activeOnDelete.attach(g.num_nodes(), (uint8_t)(false));
            activeOnAdd.attach(g.num_nodes(), (uint8_t)(false));
            auto _recs14 = _batch13.dels();
            #pragma omp parallel for schedule(dynamic)
            for (int64_t _i15 = 0; _i15 < (int64_t)_recs14.size(); ++_i15) {
                gd::Edge e = gd::as_edge(_recs14[_i15]);
                if ((parent[e.target] == e.source)) {
                    gd::atomic_store(&(dist[e.target]), (int64_t)(gd::kInfI64));
                    gd::atomic_store(&(parent[e.target]), (int64_t)(-(1)));
                    gd::atomic_store(&(activeOnDelete[e.target]), (uint8_t)(true));
                }
            }
            g.update_del(_batch13);
            decrementalSSSP(g, dist, parent, activeOnDelete, src);
            auto _recs16 = _batch13.adds();
            #pragma omp parallel for schedule(dynamic)
            for (int64_t _i17 = 0; _i17 < (int64_t)_recs16.size(); ++_i17) {
                gd::Edge e = gd::as_edge(_recs16[_i17]);
                if ((gd::sat_add(dist[e.source], e.weight) < dist[e.target])) {
                    {
                        auto _c18 = gd::sat_add(dist[e.source], e.weight);
                        auto _c19 = true;
                        if (gd::atomic_min(&(dist[e.target]), (int64_t)(_c18))) {
                            gd::atomic_store(&(activeOnAdd[e.target]), (uint8_t)(_c19));
                        }
                    }
                }
            }
            g.update_add(_batch13);
            incrementalSSSP(g, dist, parent, activeOnAdd, src);
            g.merge_if_due(_b12_index);
        }
    }
}

int main(int argc, char** argv) {
    gd::Args args(argc, argv);
    omp_set_num_threads((int)args.geti("--threads", 1));
    gd::Graph _g = gd::Graph::load(args.get("--graph"), !args.has("--undirected"), true, args.geti("--merge-interval", 1));
    gd::NodeProp<int64_t> dist;
    dist.attach(_g.num_nodes(), 0);
    gd::NodeProp<int64_t> parent;
    parent.attach(_g.num_nodes(), 0);
    gd::UpdateStream updateList = gd::UpdateStream::load(args.get("--updates"));
    int64_t batchsize = (int64_t)args.geti("--batchsize", 0);
    if (batchsize <= 0) batchsize = (int64_t)updateList.size();
    int64_t src = (int64_t)args.geti("--src", 0);
    double _t0 = omp_get_wtime();
    dynamicSSSP(_g, dist, parent, updateList, batchsize, src);
    double _t1 = omp_get_wtime();
    std::string _out = args.get("--out", ".");
    gd::dump_prop(_out + "/dist.csv", dist);
    gd::dump_prop(_out + "/parent.csv", parent);
    std::vector<std::pair<std::string, std::string>> _scalars;
    { char b[64]; std::snprintf(b, sizeof b, "%.6f", _t1 - _t0);
      _scalars.emplace_back("elapsed_seconds", b); }
    gd::dump_scalars(_out + "/scalars.csv", _scalars);
    return 0;
}
