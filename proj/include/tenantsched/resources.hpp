#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tsched {

// One point in the cpu/mem/disk demand-capacity space. Components are
// abstract nonnegative units.
struct ResourceVector {
  static constexpr int kDims = 3;

  double cpu = 0.0;
  double mem = 0.0;
  double disk = 0.0;

  ResourceVector() = default;
  ResourceVector(double cpu_, double mem_, double disk_)
      : cpu(cpu_), mem(mem_), disk(disk_) {}

  double operator[](int dim) const {
    switch (dim) {
      case 0: return cpu;
      case 1: return mem;
      default: return disk;
    }
  }

  double& operator[](int dim) {
    switch (dim) {
      case 0: return cpu;
      case 1: return mem;
      default: return disk;
    }
  }

  static const char* dim_name(int dim) {
    switch (dim) {
      case 0: return "cpu";
      case 1: return "mem";
      default: return "disk";
    }
  }

  ResourceVector& operator+=(const ResourceVector& o) {
    cpu += o.cpu;
    mem += o.mem;
    disk += o.disk;
    return *this;
  }

  // Componentwise subtraction, clamping rounding dust to zero. A genuinely
  // negative result violates the nonnegativity invariant and throws.
  ResourceVector& operator-=(const ResourceVector& o) {
    for (int d = 0; d < kDims; ++d) {
      double v = (*this)[d] - o[d];
      if (v < 0.0) {
        if (v < -1e-6) {
          throw std::logic_error("ResourceVector subtraction went negative on " +
                                 std::string(dim_name(d)));
        }
        v = 0.0;
      }
      (*this)[d] = v;
    }
    return *this;
  }

  ResourceVector operator*(double s) const {
    return {cpu * s, mem * s, disk * s};
  }

  bool fits_within(const ResourceVector& capacity) const {
    return cpu <= capacity.cpu && mem <= capacity.mem && disk <= capacity.disk;
  }

  bool nonnegative() const { return cpu >= 0.0 && mem >= 0.0 && disk >= 0.0; }

  bool any_positive() const { return cpu > 0.0 || mem > 0.0 || disk > 0.0; }
};

inline ResourceVector operator+(ResourceVector a, const ResourceVector& b) {
  a += b;
  return a;
}

}  // namespace tsched
