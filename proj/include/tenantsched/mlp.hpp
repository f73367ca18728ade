#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace tsched::policy {

struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct DenseLayer {
  Matrix w;
  std::vector<double> b;
};

// Shared tanh trunk feeding a linear policy head (one logit per node plus
// Defer) and a linear scalar value head.
struct MLPParams {
  std::vector<DenseLayer> trunk;
  DenseLayer policy_head;
  DenseLayer value_head;
  std::uint64_t seed = 0;

  std::size_t obs_dim() const;
  std::size_t action_dim() const;
  std::size_t hidden_width() const;
};

struct ForwardTrace {
  std::vector<double> input;
  // pre[i] and act[i] are the pre-activation and tanh output of trunk[i].
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> act;
};

struct ForwardResult {
  std::vector<double> logits;
  double value = 0.0;
  ForwardTrace trace;
};

MLPParams init_params(std::size_t obs_dim, std::size_t action_dim,
                      std::size_t hidden_width, std::uint64_t seed);

ForwardResult forward(const MLPParams& params, const std::vector<double>& obs);

// Accumulates into `grads` the gradient of any scalar loss whose output
// cotangents are (d_logits, d_value) for the given forward trace.
void backward(const MLPParams& params, const ForwardTrace& trace,
              const std::vector<double>& d_logits, double d_value,
              MLPParams& grads);

MLPParams zeros_like(const MLPParams& params);

// Visits every parameter of `a` paired with the same-position parameter of
// `b`; the fixed order also defines the checkpoint layout.
void for_each_param(MLPParams& a, MLPParams& b,
                    const std::function<void(double&, double&)>& fn);
void for_each_param(MLPParams& a, const std::function<void(double&)>& fn);
void for_each_param(const MLPParams& a, const std::function<void(double)>& fn);

void save_checkpoint(const MLPParams& params, std::ostream& out);
void save_checkpoint_file(const MLPParams& params, const std::string& path);
MLPParams load_checkpoint(std::istream& in);
MLPParams load_checkpoint_file(const std::string& path);

}  // namespace tsched::policy
