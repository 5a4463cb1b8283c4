#pragma once

#include "fraclap/torus.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <vector>

namespace fraclap {

/// An empirical measure with uniform atom weights 1/n and a function on its atoms.
struct EmpiricalPair {
    EmpiricalPair(SampleSet points, std::vector<double> values);

    SampleSet points;
    std::vector<double> values;
};

struct Assignment {
    std::vector<std::size_t> target;  // row i is matched to column target[i]
    double cost = 0.0;                // sum of matched entries
};

/// Minimum-cost perfect matching on a square cost matrix (Hungarian method
/// with potentials, O(n^3)).
Assignment linear_assignment(const Eigen::MatrixXd& cost);

/// min over permutations pi of (1/n) sum_i [d(x_i, y_pi(i))^2 + (u_i - v_pi(i))^2].
/// No square root is taken. Both sides must have the same number of atoms.
double tl2_distance(const EmpiricalPair& a, const EmpiricalPair& b);

struct TransportMap {
    std::vector<std::size_t> target;  // nearest atom of `to` for each atom of `from`
    double sup_displacement = 0.0;    // max_i d(x_i, T(x_i))
};

/// Nearest-atom map from `from` into `to` (a diagnostic, not an optimal map).
/// Ties go to the lowest index.
TransportMap nearest_transport_map(const SampleSet& from, const SampleSet& to);

}  // namespace fraclap
