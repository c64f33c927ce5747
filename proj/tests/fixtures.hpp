#pragma once

#include "lfc/digraph.hpp"
#include "lfc/matrix.hpp"

// The two four-agent demonstration topologies used across the suite, matching
// the built-in "fig1"/"fig2" scenarios. In topo_a agents 1 and 2 listen to
// each other, agent 4 listens to 2 and 3, agent 3 senses only the leader.
// topo_b is two mutually listening pairs (1,2) and (3,4). Leader weights are
// (1, 0, 1, 0) in both.
inline lfc::LeaderTopology topo_a() {
    return {lfc::WeightedDigraph(4, {{1, 2, 1.0}, {2, 1, 1.0}, {4, 2, 1.0}, {4, 3, 1.0}}),
            {1.0, 0.0, 1.0, 0.0}};
}

inline lfc::LeaderTopology topo_b() {
    return {lfc::WeightedDigraph(4, {{1, 2, 1.0}, {2, 1, 1.0}, {3, 4, 1.0}, {4, 3, 1.0}}),
            {1.0, 0.0, 1.0, 0.0}};
}

// Reference values for the demonstration topologies, frozen from an
// independent solver at full double precision. Tests compare against these
// tightly; the published four-decimal figures are checked separately in the
// acceptance runner.
namespace frozen {

inline const lfc::Matrix p_bar_a = {
    {0.53787878787878785, 0.57575757575757569, 0.043939393939393938, 0.022727272727272728},
    {0.57575757575757569, 1.1666666666666667, 0.10909090909090909, 0.090909090909090912},
    {0.043939393939393938, 0.10909090909090909, 0.58333333333333326, 0.083333333333333329},
    {0.022727272727272728, 0.090909090909090912, 0.083333333333333329, 0.25}};

inline constexpr double mu_bar_a = 0.31390785442074387;
inline constexpr double lambda_bar_a = 0.18351181206839029;
inline constexpr double k_star_a = 1.8552796980277166;      // mu/(2 lambda) + 1
inline constexpr double k_star_alt_a = 2.7105593960554333;  // mu/lambda + 1
inline constexpr double lambda_min_a_k3 = 0.33249745909314843;
inline constexpr double tau_a_k3 = 0.033417276882551854;
inline constexpr double storage_norm_a_k3 = 5.2251598818728553;

inline constexpr double lambda_tilde_ab = 0.50278795904316753;
inline constexpr double mu_tilde_ab = 7.9257420186395464;
inline constexpr double k_star_ab = 8.8817937821369668;      // mu/(2 lambda) + 1
inline constexpr double k_star_alt_ab = 7.8817937821369659;  // mu/(2 lambda)
inline constexpr double lambda_min_ab_k9 = 0.47811154608613687;
inline constexpr double tau_ab_k9 = 0.01744157298900359;

// Smallest eigenvalue of H + H^T per member: topo_a then topo_b.
inline constexpr double sym_min_a = 0.50278795904316753;
inline constexpr double sym_min_b = 0.76393202250021031;  // 3 - sqrt(5)

// Scalar benchmark x'' = -k x' - x with k = 3, x(0) = 1, v(0) = 0: the
// closed-form solution evaluated at t = 5.
inline constexpr double scalar_x5 = 0.173404650240464;
inline constexpr double scalar_v5 = -0.06623389365879348;

} // namespace frozen
