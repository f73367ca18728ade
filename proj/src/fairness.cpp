#include "tenantsched/fairness.hpp"

#include <stdexcept>
#include <string>

namespace tsched::mdp {

double jain_index(std::span<const double> shares) {
  if (shares.empty()) {
    throw std::invalid_argument("jain_index needs at least one share");
  }
  double sum = 0.0;
  double sum_sq = 0.0;
  for (double x : shares) {
    if (x < 0.0) {
      throw std::invalid_argument("jain_index input must be nonnegative, got " +
                                  std::to_string(x));
    }
    sum += x;
    sum_sq += x * x;
  }
  if (sum_sq == 0.0) return 1.0;  // all zero: vacuously fair
  return (sum * sum) / (static_cast<double>(shares.size()) * sum_sq);
}

}  // namespace tsched::mdp
