#pragma once

#include "qlin/qp.hpp"
#include "qlin/threading.hpp"

namespace qlin::testing {

// n=2, c=(1,-1), Q=[[0,2],[2,0]]; optimum x=(0,1) value -1
inline ZeroOneQP make_qp_a() {
    ZeroOneQP qp;
    qp.n = 2;
    qp.c = {1.0, -1.0};
    qp.Q = {{0.0, 2.0}, {2.0, 0.0}};
    return qp;
}

// QP-A plus h=0, G=[[0,1],[1,0]], g=2; optimum x=(1,1) value 4
inline ZeroOneQP make_qp_c() {
    ZeroOneQP qp = make_qp_a();
    QuadConstraint qc;
    qc.h = {0.0, 0.0};
    qc.G = {{0.0, 1.0}, {1.0, 0.0}};
    qc.g = 2.0;
    qp.quad_constraint = std::move(qc);
    return qp;
}

// m=2, N=6, lengths=(2,2), one interaction edge with score 5 at ((1,2),(2,3))
inline ThreadingInstance make_t1() {
    ThreadingInstance inst;
    inst.segment_count = 2;
    inst.sequence_length = 6;
    inst.lengths = {2, 2};
    inst.edges = {{1, 2}};
    inst.linear_scores = {{1.0, 0.0, 2.0}, {2.0, 3.0, 1.0}};
    inst.pair_scores[PairKey{1, 2, 2, 3}] = 5.0;
    return inst;
}

}
