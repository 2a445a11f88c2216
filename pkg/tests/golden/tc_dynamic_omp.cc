// generated by graphdyn omp backend v0.1.0
#include "graphdyn_rt.h"
#include <omp.h>

int64_t staticTC(gd::Graph& g);
int64_t dynamicTC(gd::Graph& g, const gd::UpdateStream& updateList, int64_t batchsize);

int64_t staticTC(gd::Graph& g) {
    int64_t tcount = 0;
    #pragma omp parallel for schedule(dynamic) reduction(+:tcount)
    for (int64_t v = 0; v < g.num_nodes(); ++v) {
        for (gd::Edge e1 : g.neighbors(v)) {
            if (!((e1.target > v))) continue;
            for (gd::Edge e2 : g.neighbors(e1.target)) {
                if (!((e2.target > e1.target))) continue;
                for (gd::Edge e3 : g.neighbors(v)) {
                    if (!((e3.target == e2.target))) continue;
                    tcount += 1;
                }
            }
        }
    }
    return tcount;
}

int64_t dynamicTC(gd::Graph& g, const gd::UpdateStream& updateList, int64_t batchsize) {
    gd::EdgeProp<uint8_t> delMark;
    delMark.attach(g, 0);
    gd::EdgeProp<int64_t> delRank;
    delRank.attach(g, 0);
    gd::EdgeProp<uint8_t> addMark;
    addMark.attach(g, 0);
    gd::EdgeProp<int64_t> addRank;
    addRank.attach(g, 0);
    int64_t tcount = 0;
    tcount = staticTC(g);
    {
        int64_t _b1_size = batchsize;
        int64_t _b1_index = 0;
        for (size_t _b1 = 0; _b1 < updateList.size(); _b1 += _b1_size, ++_b1_index) {
            gd::UpdateBatch _batch2 = updateList.slice(_b1, _b1_size);
            delMark.attach(g, (uint8_t)(false));
            delRank.attach(g, (int64_t)(0));
            addMark.attach(g, (uint8_t)(false));
            addRank.attach(g, (int64_t)(0));
            auto _recs3 = _batch2.dels();
            #pragma omp parallel for schedule(dynamic)
            for (int64_t _i4 = 0; _i4 < (int64_t)_recs3.size(); ++_i4) {
                gd::Edge e = gd::as_edge(_recs3[_i4]);
                int64_t r = 0;
                if ((e.source < e.target)) {
                    r = gd::sat_add((e.source * g.num_nodes()), e.target);
                } else {
                    r = gd::sat_add((e.target * g.num_nodes()), e.source);
                }
                for (gd::Edge e2 : g.neighbors(e.source)) {
                    if (!((e2.target == e.target))) continue;
                    gd::atomic_store(&(delMark[e2]), (uint8_t)(true));
                    gd::atomic_store(&(delRank[e2]), (int64_t)(r));
                }
                for (gd::Edge e2 : g.neighbors(e.target)) {
                    if (!((e2.target == e.source))) continue;
                    gd::atomic_store(&(delMark[e2]), (uint8_t)(true));
                    gd::atomic_store(&(delRank[e2]), (int64_t)(r));
                }
            }
            auto _recs5 = _batch2.dels();
            #pragma omp parallel for schedule(dynamic) reduction(+:tcount)
            for (int64_t _i6 = 0; _i6 < (int64_t)_recs5.size(); ++_i6) {
                gd::Edge e = gd::as_edge(_recs5[_i6]);
                int64_t r = 0;
                if ((e.source < e.target)) {
                    r = gd::sat_add((e.source * g.num_nodes()), e.target);
                } else {
                    r = gd::sat_add((e.target * g.num_nodes()), e.source);
                }
                for (gd::Edge e2 : g.neighbors(e.source)) {
                    if (!((e2.target != e.target))) continue;
                    for (gd::Edge e3 : g.neighbors(e.target)) {
                        if (!((e3.target == e2.target))) continue;
                        bool skip = false;
                        if (((delMark[e2] == true) && (delRank[e2] < r))) {
                            skip = true;
                        }
                        if (((delMark[e3] == true) && (delRank[e3] < r))) {
                            skip = true;
                        }
                        if (!(skip)) {
                            tcount -= 1;
                        }
                    }
                }
            }
            g.update_del(_batch2);
            g.update_add(_batch2);
            auto _recs7 = _batch2.adds();
            #pragma omp parallel for schedule(dynamic)
            for (int64_t _i8 = 0; _i8 < (int64_t)_recs7.size(); ++_i8) {
                gd::Edge e = gd::as_edge(_recs7[_i8]);
                int64_t r = 0;
                if ((e.source < e.target)) {
                    r = gd::sat_add((e.source * g.num_nodes()), e.target);
                } else {
                    r = gd::sat_add((e.target * g.num_nodes()), e.source);
                }
                for (gd::Edge e2 : g.neighbors(e.source)) {
                    if (!((e2.target == e.target))) continue;
                    gd::atomic_store(&(addMark[e2]), (uint8_t)(true));
                    gd::atomic_store(&(addRank[e2]), (int64_t)(r));
                }
                for (gd::Edge e2 : g.neighbors(e.target)) {
                    if (!((e2.target == e.source))) continue;
                    gd::atomic_store(&(addMark[e2]), (uint8_t)(true));
                    gd::atomic_store(&(addRank[e2]), (int64_t)(r));
                }
            }
            auto _recs9 = _batch2.adds();
            #pragma omp parallel for schedule(dynamic) reduction(+:tcount)
            for (int64_t _i10 = 0; _i10 < (int64_t)_recs9.size(); ++_i10) {
                gd::Edge e = gd::as_edge(_recs9[_i10]);
                int64_t r = 0;
                if ((e.source < e.target)) {
                    r = gd::sat_add((e.source * g.num_nodes()), e.target);
                } else {
                    r = gd::sat_add((e.target * g.num_nodes()), e.source);
                }
                for (gd::Edge e2 : g.neighbors(e.source)) {
                    if (!((e2.target != e.target))) continue;
                    for (gd::Edge e3 : g.neighbors(e.target)) {
                        if (!((e3.target == e2.target))) continue;
                        bool skip = false;
                        if (((addMark[e2] == true) && (addRank[e2] < r))) {
                            skip = true;
                        }
                        if (((addMark[e3] == true) && (addRank[e3] < r))) {
                            skip = true;
                        }
                        if (!(skip)) {
                            tcount += 1;
                        }
                    }
                }
            }
            g.merge_if_due(_b1_index);
        }
    }
    return tcount;
}

int main(int argc, char** argv) {
    gd::Args args(argc, argv);
    omp_set_num_threads((int)args.geti("--threads", 1));
    gd::Graph _g = gd::Graph::load(args.get("--graph"), !args.has("--undirected"), false, args.geti("--merge-interval", 1));
    gd::UpdateStream updateList = gd::UpdateStream::load(args.get("--updates"));
    int64_t batchsize = (int64_t)args.geti("--batchsize", 0);
    if (batchsize <= 0) batchsize = (int64_t)updateList.size();
    double _t0 = omp_get_wtime();
    int64_t _result = dynamicTC(_g, updateList, batchsize);
    double _t1 = omp_get_wtime();
    std::string _out = args.get("--out", ".");
    std::vector<std::pair<std::string, std::string>> _scalars;
    _scalars.emplace_back("return", std::to_string((long long)_result));
    { char b[64]; std::snprintf(b, sizeof b, "%.6f", _t1 - _t0);
      _scalars.emplace_back("elapsed_seconds", b); }
    gd::dump_scalars(_out + "/scalars.csv", _scalars);
    return 0;
}
