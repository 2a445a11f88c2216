// generated by graphdyn omp backend v0.1.0
#include "graphdyn_rt.h"
#include <omp.h>

void staticPR(gd::Graph& g, gd::NodeProp<double>& pagerank, gd::NodeProp<int64_t>& outdeg, double damping, double beta, int64_t maxiter);
void incrementalPR(gd::Graph& g, gd::NodeProp<double>& pagerank, gd::NodeProp<uint8_t>& affected, gd::NodeProp<int64_t>& outdeg, double damping, double beta, int64_t maxiter);
void dynamicPR(gd::Graph& g, gd::NodeProp<double>& pagerank, const gd::UpdateStream& updateList, int64_t batchsize, double damping, double beta, int64_t maxiter);

void staticPR(gd::Graph& g, gd::NodeProp<double>& pagerank, gd::NodeProp<int64_t>& outdeg, double damping, double beta, int64_t maxiter) {
    gd::NodeProp<double> rank_new;
    rank_new.attach(g.num_nodes(), 0.0);
    int64_t n = g.num_nodes();
    pagerank.attach(g.num_nodes(), (double)((1.0 / n)));
    outdeg.attach(g.num_nodes(), (int64_t)(0));
    rank_new.attach(g.num_nodes(), (double)(0.0));
    #pragma omp parallel for schedule(dynamic)
    for (int64_t v = 0; v < g.num_nodes(); ++v) {
        int64_t deg = 0;
        for (gd::Edge e : g.neighbors(v)) {
            deg += 1;
        }
        outdeg[v] = deg;
    }
    int64_t iter = 0;
    double diff = (beta + 1.0);
    while (((diff >= beta) && (iter < maxiter))) {
        double dangling = 0.0;
        #pragma omp parallel for schedule(dynamic) reduction(+:dangling)
        for (int64_t v = 0; v < g.num_nodes(); ++v) {
            if (!((outdeg[v] == 0))) continue;
            dangling += pagerank[v];
        }
        diff = 0.0;
        #pragma omp parallel for schedule(dynamic)
        for (int64_t v = 0; v < g.num_nodes(); ++v) {
            double incoming = 0.0;
            for (gd::Edge e : g.in_edges(v)) {
                incoming += (pagerank[e.source] / outdeg[e.source]);
            }
            double newrank = (((1.0 - damping) / n) + (damping * (incoming + (dangling / n))));
            double delta = (newrank - pagerank[v]);
            if ((delta < 0.0)) {
                delta = (0.0 - delta);
            }
            {
                auto _c1 = delta;
                if (gd::atomic_max(&(diff), (double)(_c1))) {
                }
            }
            rank_new[v] = newrank;
        }
        #pragma omp parallel for schedule(dynamic)
        for (int64_t v = 0; v < g.num_nodes(); ++v) {
            pagerank[v] = rank_new[v];
        }
        iter = gd::sat_add(iter, 1);
    }
}

void incrementalPR(gd::Graph& g, gd::NodeProp<double>& pagerank, gd::NodeProp<uint8_t>& affected, gd::NodeProp<int64_t>& outdeg, double damping, double beta, int64_t maxiter) {
    gd::NodeProp<double> rank_new;
    rank_new.attach(g.num_nodes(), 0.0);
    int64_t n = g.num_nodes();
    rank_new.attach(g.num_nodes(), (double)(0.0));
    int64_t iter = 0;
    double diff = (beta + 1.0);
    while (((diff >= beta) && (iter < maxiter))) {
        double dangling = 0.0;
        #pragma omp parallel for schedule(dynamic) reduction(+:dangling)
        for (int64_t v = 0; v < g.num_nodes(); ++v) {
            if (!((outdeg[v] == 0))) continue;
            dangling += pagerank[v];
        }
        diff = 0.0;
        #pragma omp parallel for schedule(dynamic)
        for (int64_t v = 0; v < g.num_nodes(); ++v) {
            if (!((affected[v] == true))) continue;
            double incoming = 0.0;
            for (gd::Edge e : g.in_edges(v)) {
                incoming += (pagerank[e.source] / outdeg[e.source]);
            }
            double newrank = (((1.0 - damping) / n) + (damping * (incoming + (dangling / n))));
            double delta = (newrank - pagerank[v]);
            if ((delta < 0.0)) {
                delta = (0.0 - delta);
            }
            {
                auto _c2 = delta;
                if (gd::atomic_max(&(diff), (double)(_c2))) {
                }
            }
            rank_new[v] = newrank;
        }
        #pragma omp parallel for schedule(dynamic)
        for (int64_t v = 0; v < g.num_nodes(); ++v) {
            if (!((affected[v] == true))) continue;
            pagerank[v] = rank_new[v];
        }
        iter = gd::sat_add(iter, 1);
    }
}

void dynamicPR(gd::Graph& g, gd::NodeProp<double>& pagerank, const gd::UpdateStream& updateList, int64_t batchsize, double damping, double beta, int64_t maxiter) {
    gd::NodeProp<uint8_t> affected;
    affected.attach(g.num_nodes(), 0);
    gd::NodeProp<int64_t> outdeg;
    outdeg.attach(g.num_nodes(), 0);
    staticPR(g, pagerank, outdeg, damping, beta, maxiter);
    {
        int64_t _b3_size = batchsize;
        int64_t _b3_index = 0;
        for (size_t _b3 = 0; _b3 < updateList.size(); _b3 += _b3_size, ++_b3_index) {
            gd::UpdateBatch _batch4 = updateList.slice(_b3, _b3_size);
            affected.attach(g.num_nodes(), (uint8_t)(false));
            auto _recs5 = _batch4.dels();
            #pragma omp parallel for schedule(dynamic)
            for (int64_t _i6 = 0; _i6 < (int64_t)_recs5.size(); ++_i6) {
                gd::Edge e = gd::as_edge(_recs5[_i6]);
                gd::atomic_store(&(affected[e.source]), (uint8_t)(true));
                gd::atomic_store(&(affected[e.target]), (uint8_t)(true));
                gd::atomic_add(&(outdeg[e.source]), (int64_t)(-(1)));
            }
            g.update_del(_batch4);
            auto _recs7 = _batch4.adds();
            #pragma omp parallel for schedule(dynamic)
            for (int64_t _i8 = 0; _i8 < (int64_t)_recs7.size(); ++_i8) {
                gd::Edge e = gd::as_edge(_recs7[_i8]);
                gd::atomic_store(&(affected[e.source]), (uint8_t)(true));
                gd::atomic_store(&(affected[e.target]), (uint8_t)(true));
                gd::atomic_add(&(outdeg[e.source]), (int64_t)((1)));
            }
            g.update_add(_batch4);
            gd::propagate_flags(g, affected);
            incrementalPR(g, pagerank, affected, outdeg, damping, beta, maxiter);
            g.merge_if_due(_b3_index);
        }
    }
}

int main(int argc, char** argv) {
    gd::Args args(argc, argv);
    omp_set_num_threads((int)args.geti("--threads", 1));
    gd::Graph _g = gd::Graph::load(args.get("--graph"), !args.has("--undirected"), true, args.geti("--merge-interval", 1));
    gd::NodeProp<double> pagerank;
    pagerank.attach(_g.num_nodes(), 0.0);
    gd::UpdateStream updateList = gd::UpdateStream::load(args.get("--updates"));
    int64_t batchsize = (int64_t)args.geti("--batchsize", 0);
    if (batchsize <= 0) batchsize = (int64_t)updateList.size();
    double damping = (double)args.getf("--damping", 0.85);
    double beta = (double)args.getf("--beta", 0.001);
    int64_t maxiter = (int64_t)args.geti("--maxiter", 100);
    double _t0 = omp_get_wtime();
    dynamicPR(_g, pagerank, updateList, batchsize, damping, beta, maxiter);
    double _t1 = omp_get_wtime();
    std::string _out = args.get("--out", ".");
    gd::dump_prop(_out + "/pagerank.csv", pagerank);
    std::vector<std::pair<std::string, std::string>> _scalars;
    { char b[64]; std::snprintf(b, sizeof b, "%.6f", _t1 - _t0);
      _scalars.emplace_back("elapsed_seconds", b); }
    gd::dump_scalars(_out + "/scalars.csv", _scalars);
    return 0;
}
