#pragma once

#include <span>

#include "clucomp/contingency.hpp"
#include "clucomp/qparam.hpp"

namespace clucomp {

/// Plug-in (non-adjusted) comparison measures: pair-counting indices and
/// generalized q-entropy information measures. All functions are pure and
/// symmetric under table transposition.

/// (k11 + k00) / C(N,2), in [0,1]; 1 iff the partitions are identical.
/// Requires N >= 2.
double rand_index(const ContingencyTable& t);

/// sum a_i^2 + sum b_j^2 - 2 sum n_ij^2 = 2(k10 + k01) = N(N-1)(1 - RI).
double mirkin_index(const ContingencyTable& t);

/// k11 / (k11 + k10 + k01). When all three tallies vanish both partitions
/// are all-singletons, hence identical: defined as 1.
double jaccard(const ContingencyTable& t);

/// Entropy of a probability vector: (1 - sum p^q)/(q-1) for Tsallis,
/// -sum p ln p (nats) for Shannon. Weights must be nonnegative and sum to
/// 1 within 1e-12. Empty cells contribute nothing (0^q := 0, 0 ln 0 := 0).
double tsallis_entropy(std::span<const double> weights, QParam q);

/// Marginal entropies of the two partitions.
double entropy_u(const ContingencyTable& t, QParam q);
double entropy_v(const ContingencyTable& t, QParam q);

/// Entropy of the flattened joint distribution n_ij / N.
double joint_entropy(const ContingencyTable& t, QParam q);

enum class Conditioned { v_given_u, u_given_v };

/// H_q(V|U) = sum_i (a_i/N)^q (1 - sum_j (n_ij/a_i)^q)/(q-1); the Shannon
/// variant is the standard conditional entropy.
double conditional_entropy(const ContingencyTable& t, Conditioned dir,
                           QParam q);

/// MI_q = H_q(U) + H_q(V) - H_q(U,V). May be negative for q < 1; returned
/// unclamped.
double mutual_information(const ContingencyTable& t, QParam q);

/// VI_q = 2 H_q(U,V) - H_q(U) - H_q(V); nonnegative, 0 iff U = V.
double variation_of_information(const ContingencyTable& t, QParam q);

/// MI_q normalized by (H_q(U) + H_q(V))/2; 1 when U = V. Undefined when
/// both partitions are single-cluster.
double nmi(const ContingencyTable& t, QParam q);

}  // namespace clucomp
