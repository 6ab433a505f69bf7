#ifndef FARSA_KERNELS_HPP_
#define FARSA_KERNELS_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

// Dense BLAS-1 style helpers. These run over solver-sized vectors (n), which
// are small next to the data-sized (N) loops, so they are deliberately serial.

namespace farsa {

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double norm2_sq(const std::vector<double>& a) { return dot(a, a); }

inline double norm2(const std::vector<double>& a) { return std::sqrt(norm2_sq(a)); }

// y += c * x
inline void axpy(double c, const std::vector<double>& x, std::vector<double>& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += c * x[i];
}

inline void scale(double c, std::vector<double>& x) {
  for (double& v : x) v *= c;
}

// Euclidean norm of the sub-vector x restricted to coords.
inline double norm2_on(const std::vector<double>& x, const std::vector<int>& coords) {
  double acc = 0.0;
  for (int j : coords) acc += x[j] * x[j];
  return std::sqrt(acc);
}

inline bool is_zero_on(const std::vector<double>& x, const std::vector<int>& coords) {
  for (int j : coords) {
    if (x[j] != 0.0) return false;
  }
  return true;
}

}  // namespace farsa

#endif  // FARSA_KERNELS_HPP_
