#include "tenantsched/mlp.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tenantsched/rng.hpp"
#include "tenantsched/text.hpp"

namespace tsched::policy {

namespace {

void check_layer(const DenseLayer& l, const char* name) {
  if (l.w.rows == 0 || l.w.cols == 0 || l.w.data.size() != l.w.rows * l.w.cols ||
      l.b.size() != l.w.rows) {
    throw std::invalid_argument(std::string("malformed layer ") + name);
  }
}

// y = w·x + b
void affine(const DenseLayer& l, const std::vector<double>& x,
            std::vector<double>& y) {
  if (x.size() != l.w.cols) {
    throw std::invalid_argument("layer input dimension mismatch");
  }
  y.assign(l.w.rows, 0.0);
  for (std::size_t r = 0; r < l.w.rows; ++r) {
    double acc = l.b[r];
    const double* wr = l.w.data.data() + r * l.w.cols;
    for (std::size_t c = 0; c < l.w.cols; ++c) acc += wr[c] * x[c];
    y[r] = acc;
  }
}

// Given dL/dy, accumulates dL/dw and dL/db and returns dL/dx.
void affine_backward(const DenseLayer& l, const std::vector<double>& x,
                     const std::vector<double>& dy, DenseLayer& grad,
                     std::vector<double>& dx) {
  dx.assign(l.w.cols, 0.0);
  for (std::size_t r = 0; r < l.w.rows; ++r) {
    const double g = dy[r];
    grad.b[r] += g;
    double* gw = grad.w.data.data() + r * l.w.cols;
    const double* wr = l.w.data.data() + r * l.w.cols;
    for (std::size_t c = 0; c < l.w.cols; ++c) {
      gw[c] += g * x[c];
      dx[c] += g * wr[c];
    }
  }
}

DenseLayer xavier_layer(std::size_t out, std::size_t in, Rng& rng) {
  DenseLayer l;
  l.w = Matrix(out, in);
  l.b.assign(out, 0.0);
  const double bound = std::sqrt(6.0 / static_cast<double>(in + out));
  for (double& v : l.w.data) v = rng.uniform(-bound, bound);
  return l;
}

}  // namespace

std::size_t MLPParams::obs_dim() const {
  return trunk.empty() ? policy_head.w.cols : trunk.front().w.cols;
}

std::size_t MLPParams::action_dim() const { return policy_head.w.rows; }

std::size_t MLPParams::hidden_width() const {
  return trunk.empty() ? 0 : trunk.back().w.rows;
}

MLPParams init_params(std::size_t obs_dim, std::size_t action_dim,
                      std::size_t hidden_width, std::uint64_t seed) {
  if (obs_dim == 0 || action_dim == 0 || hidden_width == 0) {
    throw std::invalid_argument("network dimensions must be at least 1");
  }
  Rng rng(Rng::derive(seed, 0));
  MLPParams p;
  p.seed = seed;
  p.trunk.push_back(xavier_layer(hidden_width, obs_dim, rng));
  p.trunk.push_back(xavier_layer(hidden_width, hidden_width, rng));
  p.policy_head = xavier_layer(action_dim, hidden_width, rng);
  for (double& v : p.policy_head.w.data) v *= 0.01;
  p.value_head = xavier_layer(1, hidden_width, rng);
  return p;
}

ForwardResult forward(const MLPParams& params, const std::vector<double>& obs) {
  for (const DenseLayer& l : params.trunk) check_layer(l, "trunk");
  check_layer(params.policy_head, "policy head");
  check_layer(params.value_head, "value head");
  if (params.value_head.w.rows != 1) {
    throw std::invalid_argument("value head must produce one scalar");
  }
  if (obs.size() != params.obs_dim()) {
    throw std::invalid_argument("observation dimension mismatch");
  }

  ForwardResult out;
  out.trace.input = obs;
  const std::vector<double>* x = &out.trace.input;
  for (const DenseLayer& l : params.trunk) {
    std::vector<double> pre;
    affine(l, *x, pre);
    std::vector<double> act(pre.size());
    for (std::size_t i = 0; i < pre.size(); ++i) act[i] = std::tanh(pre[i]);
    out.trace.pre.push_back(std::move(pre));
    out.trace.act.push_back(std::move(act));
    x = &out.trace.act.back();
  }
  affine(params.policy_head, *x, out.logits);
  std::vector<double> v;
  affine(params.value_head, *x, v);
  out.value = v[0];
  return out;
}

void backward(const MLPParams& params, const ForwardTrace& trace,
              const std::vector<double>& d_logits, double d_value,
              MLPParams& grads) {
  if (d_logits.size() != params.action_dim()) {
    throw std::invalid_argument("logit cotangent dimension mismatch");
  }
  if (trace.pre.size() != params.trunk.size() ||
      trace.act.size() != params.trunk.size()) {
    throw std::invalid_argument("trace does not match network depth");
  }
  if (grads.trunk.size() != params.trunk.size()) {
    throw std::invalid_argument("gradient shape mismatch");
  }

  const std::vector<double>& top =
      params.trunk.empty() ? trace.input : trace.act.back();

  std::vector<double> d_top_policy, d_top_value;
  affine_backward(params.policy_head, top, d_logits, grads.policy_head,
                  d_top_policy);
  std::vector<double> dv{d_value};
  affine_backward(params.value_head, top, dv, grads.value_head, d_top_value);

  std::vector<double> d_act(d_top_policy.size());
  for (std::size_t i = 0; i < d_act.size(); ++i) {
    d_act[i] = d_top_policy[i] + d_top_value[i];
  }

  for (std::size_t li = params.trunk.size(); li-- > 0;) {
    std::vector<double> d_pre(d_act.size());
    for (std::size_t i = 0; i < d_act.size(); ++i) {
      const double t = trace.act[li][i];
      d_pre[i] = d_act[i] * (1.0 - t * t);
    }
    const std::vector<double>& x = li == 0 ? trace.input : trace.act[li - 1];
    std::vector<double> dx;
    affine_backward(params.trunk[li], x, d_pre, grads.trunk[li], dx);
    d_act = std::move(dx);
  }
}

MLPParams zeros_like(const MLPParams& params) {
  MLPParams z;
  z.seed = params.seed;
  for (const DenseLayer& l : params.trunk) {
    DenseLayer zl;
    zl.w = Matrix(l.w.rows, l.w.cols);
    zl.b.assign(l.b.size(), 0.0);
    z.trunk.push_back(std::move(zl));
  }
  z.policy_head.w = Matrix(params.policy_head.w.rows, params.policy_head.w.cols);
  z.policy_head.b.assign(params.policy_head.b.size(), 0.0);
  z.value_head.w = Matrix(params.value_head.w.rows, params.value_head.w.cols);
  z.value_head.b.assign(params.value_head.b.size(), 0.0);
  return z;
}

namespace {

void visit_layer(DenseLayer& a, DenseLayer& b,
                 const std::function<void(double&, double&)>& fn) {
  if (a.w.rows != b.w.rows || a.w.cols != b.w.cols || a.b.size() != b.b.size()) {
    throw std::invalid_argument("parameter shape mismatch");
  }
  for (std::size_t i = 0; i < a.w.data.size(); ++i) fn(a.w.data[i], b.w.data[i]);
  for (std::size_t i = 0; i < a.b.size(); ++i) fn(a.b[i], b.b[i]);
}

}  // namespace

void for_each_param(MLPParams& a, MLPParams& b,
                    const std::function<void(double&, double&)>& fn) {
  if (a.trunk.size() != b.trunk.size()) {
    throw std::invalid_argument("parameter shape mismatch");
  }
  for (std::size_t i = 0; i < a.trunk.size(); ++i) {
    visit_layer(a.trunk[i], b.trunk[i], fn);
  }
  visit_layer(a.policy_head, b.policy_head, fn);
  visit_layer(a.value_head, b.value_head, fn);
}

void for_each_param(MLPParams& a, const std::function<void(double&)>& fn) {
  for_each_param(a, a, [&fn](double& x, double&) { fn(x); });
}

void for_each_param(const MLPParams& a, const std::function<void(double)>& fn) {
  auto visit = [&fn](const DenseLayer& l) {
    for (double v : l.w.data) fn(v);
    for (double v : l.b) fn(v);
  };
  for (const DenseLayer& l : a.trunk) visit(l);
  visit(a.policy_head);
  visit(a.value_head);
}

namespace {

constexpr const char* kCheckpointHeader = "tenantsched-checkpoint v1";

void write_layer(std::ostream& out, const char* name, const DenseLayer& l) {
  out << "layer " << name << ' ' << l.w.rows << ' ' << l.w.cols << "\n";
  out << "w";
  for (double v : l.w.data) out << ' ' << format_double(v);
  out << "\nb";
  for (double v : l.b) out << ' ' << format_double(v);
  out << "\n";
}

DenseLayer read_layer(std::istream& in, const std::string& expect_name) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("checkpoint truncated");
  std::istringstream hdr(line);
  std::string tag, name;
  std::size_t rows = 0, cols = 0;
  if (!(hdr >> tag >> name >> rows >> cols) || tag != "layer" ||
      name != expect_name || rows == 0 || cols == 0) {
    throw std::runtime_error("checkpoint layer header corrupt: " + line);
  }
  DenseLayer l;
  l.w = Matrix(rows, cols);
  l.b.assign(rows, 0.0);

  auto read_values = [&in](const char* tag_name, std::vector<double>& dst) {
    std::string vline;
    if (!std::getline(in, vline)) throw std::runtime_error("checkpoint truncated");
    auto fields = split(trim(vline), ' ');
    if (fields.empty() || fields[0] != tag_name ||
        fields.size() != dst.size() + 1) {
      throw std::runtime_error(std::string("checkpoint ") + tag_name +
                               " row corrupt");
    }
    for (std::size_t i = 0; i < dst.size(); ++i) {
      auto v = parse_double(fields[i + 1]);
      if (!v) throw std::runtime_error("checkpoint value corrupt");
      dst[i] = *v;
    }
  };
  read_values("w", l.w.data);
  read_values("b", l.b);
  return l;
}

}  // namespace

void save_checkpoint(const MLPParams& params, std::ostream& out) {
  out << kCheckpointHeader << "\n";
  out << "seed " << params.seed << "\n";
  out << "trunk_layers " << params.trunk.size() << "\n";
  for (std::size_t i = 0; i < params.trunk.size(); ++i) {
    write_layer(out, ("trunk" + std::to_string(i)).c_str(), params.trunk[i]);
  }
  write_layer(out, "policy", params.policy_head);
  write_layer(out, "value", params.value_head);
}

void save_checkpoint_file(const MLPParams& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint '" + path + "'");
  save_checkpoint(params, out);
  if (!out.flush()) {
    throw std::runtime_error("failed writing checkpoint '" + path + "'");
  }
}

MLPParams load_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCheckpointHeader) {
    throw std::runtime_error("not a recognized checkpoint file");
  }
  MLPParams p;
  std::string tag;
  if (!std::getline(in, line)) throw std::runtime_error("checkpoint truncated");
  {
    std::istringstream row(line);
    if (!(row >> tag >> p.seed) || tag != "seed") {
      throw std::runtime_error("checkpoint seed row corrupt");
    }
  }
  std::size_t n_trunk = 0;
  if (!std::getline(in, line)) throw std::runtime_error("checkpoint truncated");
  {
    std::istringstream row(line);
    if (!(row >> tag >> n_trunk) || tag != "trunk_layers") {
      throw std::runtime_error("checkpoint trunk count row corrupt");
    }
  }
  for (std::size_t i = 0; i < n_trunk; ++i) {
    p.trunk.push_back(read_layer(in, "trunk" + std::to_string(i)));
  }
  p.policy_head = read_layer(in, "policy");
  p.value_head = read_layer(in, "value");
  return p;
}

MLPParams load_checkpoint_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open checkpoint '" + path + "'");
  return load_checkpoint(in);
}

}  // namespace tsched::policy
