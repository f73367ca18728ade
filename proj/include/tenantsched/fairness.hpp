#pragma once

#include <span>

namespace tsched::mdp {

// Jain's fairness index: (sum x)^2 / (n * sum x^2), in [1/n, 1].
// All-zero input is vacuously fair and returns 1.0. Negative entries throw.
double jain_index(std::span<const double> shares);

}  // namespace tsched::mdp
