#ifndef FARSA_IO_HPP_
#define FARSA_IO_HPP_

#include <memory>
#include <string>
#include <vector>

#include "farsa/core.hpp"
#include "farsa/losses.hpp"
#include "farsa/sparse.hpp"
#include "farsa/types.hpp"

namespace farsa {

// Malformed input: message carries "path:line: what".
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Dataset {
  CsrMatrix features;          // N samples x n features
  std::vector<double> labels;  // raw labels as parsed
};

// LIBSVM format: "<label> <index>:<value> ...", 1-based feature indices
// stored 0-based. Blank lines are skipped; duplicate indices, indices < 1 and
// malformed numbers are rejected with the offending line number. Files ending
// in .gz are decompressed on the fly.
Dataset parse_libsvm(const std::string& path);

// Same parser over an in-memory buffer (`name` only labels error messages).
Dataset parse_libsvm_buffer(const std::string& buffer, const std::string& name);

// Divides every column by its maximum absolute value; all-zero columns are
// left alone. Returns the per-column scale factors applied.
std::vector<double> scale_features(Dataset& data);

// Maps the two distinct raw label values onto {-1, +1}, smaller value to -1;
// anything other than exactly two distinct values is an error.
std::vector<double> map_labels(const std::vector<double>& raw);

// Splits {0, ..., n-1} into num_groups contiguous groups whose sizes differ
// by at most one, any remainder going to the trailing groups (n = 10 over 3
// groups gives sizes 3, 3, 4).
std::vector<std::vector<int>> assign_groups(int n, int num_groups);

// Smallest lambda for which x = 0 solves the problem with weights
// lambda_i = lambda sqrt(|G_i|):  max_i ||grad_{G_i} f(0)|| / sqrt(|G_i|).
double lambda_min(const SmoothLoss& loss, const std::vector<std::vector<int>>& groups);

// A ready-to-solve problem built from a dataset: logistic loss over the
// mapped labels, round(fraction * n) contiguous groups, weights
// lambda_scale * lambda_min * sqrt(|G_i|).
struct ProblemInstance {
  std::shared_ptr<LogisticLoss> loss;
  CompositeObjective objective;
  double lambda_min_value = 0.0;
  double group_fraction = 0.0;
  double lambda_scale = 0.0;
};

ProblemInstance build_instance(const Dataset& data, double group_fraction,
                               double lambda_scale, bool parallel = true);

}  // namespace farsa

#endif  // FARSA_IO_HPP_
