#ifndef NLCPS_NET_HPP
#define NLCPS_NET_HPP

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "nlcps/common.hpp"
#include "nlcps/rng.hpp"

namespace nlcps {

// Small dense MLP with ReLU hidden layers and a linear scalar output,
// trained per-example on squared error with Adam. Everything is 64-bit; the
// network is tiny (~100k parameters), so reproducibility and gradient-check
// fidelity matter more than speed.

inline const std::vector<int>& reward_net_layers() {
  static const std::vector<int> kLayers = {3, 256, 256, 128, 1};
  return kLayers;
}

/// Weight layout: weights[l][i * out + j] connects input unit i to output
/// unit j of layer l. Input-major storage keeps the forward inner loop over
/// independent accumulators, which the compiler can vectorize without
/// reordering sums.
struct NetworkWeights {
  std::vector<int> layer_sizes;
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;

  [[nodiscard]] std::size_t layer_count() const { return weights.size(); }
};

/// Gradients (or Adam moments) with the same shape as the weights.
struct ParamBlock {
  std::vector<std::vector<double>> weights;
  std::vector<std::vector<double>> biases;
};

struct AdamState {
  ParamBlock first_moment;
  ParamBlock second_moment;
  std::int64_t timestep = 0;
  double learning_rate = 3e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

inline NetworkWeights make_network(const std::vector<int>& layer_sizes) {
  if (layer_sizes.size() < 2) {
    throw ValidationError("network: need at least an input and an output layer");
  }
  for (int n : layer_sizes) {
    if (n < 1) {
      throw ValidationError("network: layer sizes must be positive");
    }
  }
  if (layer_sizes.back() != 1) {
    throw ValidationError("network: output layer must be scalar");
  }
  NetworkWeights net;
  net.layer_sizes = layer_sizes;
  for (std::size_t l = 0; l + 1 < layer_sizes.size(); ++l) {
    net.weights.emplace_back(
        static_cast<std::size_t>(layer_sizes[l]) * static_cast<std::size_t>(layer_sizes[l + 1]), 0.0);
    net.biases.emplace_back(static_cast<std::size_t>(layer_sizes[l + 1]), 0.0);
  }
  return net;
}

inline ParamBlock make_param_block(const NetworkWeights& net) {
  ParamBlock block;
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    block.weights.emplace_back(net.weights[l].size(), 0.0);
    block.biases.emplace_back(net.biases[l].size(), 0.0);
  }
  return block;
}

inline AdamState make_adam(const NetworkWeights& net, double learning_rate = 3e-4) {
  AdamState adam;
  adam.first_moment = make_param_block(net);
  adam.second_moment = make_param_block(net);
  adam.learning_rate = learning_rate;
  return adam;
}

/// He-scaled normal initialization (stddev sqrt(2/fan_in) per layer, biases
/// zero), bit-reproducible from the seed.
inline NetworkWeights init_weights(std::uint64_t seed,
                                   const std::vector<int>& layer_sizes = reward_net_layers()) {
  NetworkWeights net = make_network(layer_sizes);
  Rng rng(derive_seed(seed, "he-init"));
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    const double stddev = std::sqrt(2.0 / static_cast<double>(layer_sizes[l]));
    for (double& w : net.weights[l]) {
      w = rng.normal(0.0, stddev);
    }
  }
  return net;
}

namespace detail {

inline void check_input(const NetworkWeights& net, std::span<const double> input) {
  if (static_cast<int>(input.size()) != net.layer_sizes.front()) {
    throw ValidationError("forward: input length does not match network input layer");
  }
  for (double v : input) {
    if (!std::isfinite(v)) {
      throw ValidationError("forward: non-finite input");
    }
  }
}

// z[j] = b[j] + sum_i a[i] * W[i*out + j]
inline void dense_forward(const std::vector<double>& w, const std::vector<double>& b,
                          const std::vector<double>& a, std::vector<double>& z) {
  const std::size_t in = a.size();
  const std::size_t out = b.size();
  z = b;
  for (std::size_t i = 0; i < in; ++i) {
    const double ai = a[i];
    const double* row = w.data() + i * out;
    for (std::size_t j = 0; j < out; ++j) {
      z[j] += ai * row[j];
    }
  }
}

}  // namespace detail

/// Activations of every layer for one input; preactivations are kept for
/// backpropagation. activations[0] is the input, activations.back() the
/// scalar output.
struct ForwardTrace {
  std::vector<std::vector<double>> activations;
  std::vector<std::vector<double>> preactivations;
};

inline ForwardTrace forward_trace(const NetworkWeights& net, std::span<const double> input) {
  detail::check_input(net, input);
  ForwardTrace trace;
  trace.activations.emplace_back(input.begin(), input.end());
  const std::size_t layers = net.layer_count();
  for (std::size_t l = 0; l < layers; ++l) {
    std::vector<double> z;
    detail::dense_forward(net.weights[l], net.biases[l], trace.activations.back(), z);
    trace.preactivations.push_back(z);
    if (l + 1 < layers) {
      for (double& v : z) {
        v = v > 0.0 ? v : 0.0;  // ReLU
      }
    }
    trace.activations.push_back(std::move(z));
  }
  return trace;
}

/// Scalar reward prediction for one feature triple.
inline double forward(const NetworkWeights& net, std::span<const double> input) {
  detail::check_input(net, input);
  const std::size_t layers = net.layer_count();
  std::vector<double> a(input.begin(), input.end());
  std::vector<double> z;
  for (std::size_t l = 0; l < layers; ++l) {
    detail::dense_forward(net.weights[l], net.biases[l], a, z);
    if (l + 1 < layers) {
      for (double& v : z) {
        v = v > 0.0 ? v : 0.0;
      }
    }
    a.swap(z);
  }
  return a[0];
}

namespace detail {

/// Backpropagation through a completed forward trace. Returns the gradient
/// of (prediction - target)^2 for every weight and bias.
inline ParamBlock backprop(const NetworkWeights& net, const ForwardTrace& trace,
                           double prediction, double target) {
  ParamBlock grads = make_param_block(net);
  std::vector<double> delta = {2.0 * (prediction - target)};
  for (std::size_t l = net.layer_count(); l-- > 0;) {
    const std::vector<double>& a_in = trace.activations[l];
    const std::size_t in = a_in.size();
    const std::size_t out = delta.size();
    std::vector<double>& gw = grads.weights[l];
    for (std::size_t i = 0; i < in; ++i) {
      const double ai = a_in[i];
      double* row = gw.data() + i * out;
      for (std::size_t j = 0; j < out; ++j) {
        row[j] = ai * delta[j];
      }
    }
    grads.biases[l] = delta;
    if (l > 0) {
      const std::vector<double>& z_prev = trace.preactivations[l - 1];
      std::vector<double> delta_prev(in, 0.0);
      for (std::size_t i = 0; i < in; ++i) {
        if (z_prev[i] > 0.0) {  // ReLU gate: gradient flows only where z > 0
          const double* row = net.weights[l].data() + i * out;
          double acc = 0.0;
          for (std::size_t j = 0; j < out; ++j) {
            acc += row[j] * delta[j];
          }
          delta_prev[i] = acc;
        }
      }
      delta.swap(delta_prev);
    }
  }
  return grads;
}

}  // namespace detail

/// Full backpropagated gradient of (f(input) - target)^2 with respect to
/// every weight and bias.
inline ParamBlock gradient(const NetworkWeights& net, std::span<const double> input,
                           double target) {
  if (!std::isfinite(target)) {
    throw ValidationError("gradient: non-finite target");
  }
  const ForwardTrace trace = forward_trace(net, input);
  return detail::backprop(net, trace, trace.activations.back()[0], target);
}

namespace detail {

inline void adam_apply(std::vector<double>& params, const std::vector<double>& grads,
                       std::vector<double>& m, std::vector<double>& v, const AdamState& adam,
                       double bc1, double bc2) {
  const double b1 = adam.beta1;
  const double b2 = adam.beta2;
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double g = grads[k];
    m[k] = b1 * m[k] + (1.0 - b1) * g;
    v[k] = b2 * v[k] + (1.0 - b2) * g * g;
    params[k] -= adam.learning_rate * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + adam.epsilon);
  }
}

}  // namespace detail

/// One Adam step on the squared error of a single (features, target) pair.
/// Returns the loss before the update.
inline double train_step(NetworkWeights& net, AdamState& adam, std::span<const double> input,
                         double target) {
  if (!std::isfinite(target)) {
    throw ValidationError("train_step: non-finite target");
  }
  const ForwardTrace trace = forward_trace(net, input);
  const double prediction = trace.activations.back()[0];
  const double loss = (prediction - target) * (prediction - target);
  const ParamBlock grads = detail::backprop(net, trace, prediction, target);

  adam.timestep += 1;
  const double bc1 = 1.0 - std::pow(adam.beta1, static_cast<double>(adam.timestep));
  const double bc2 = 1.0 - std::pow(adam.beta2, static_cast<double>(adam.timestep));
  for (std::size_t l = 0; l < net.layer_count(); ++l) {
    detail::adam_apply(net.weights[l], grads.weights[l], adam.first_moment.weights[l],
                       adam.second_moment.weights[l], adam, bc1, bc2);
    detail::adam_apply(net.biases[l], grads.biases[l], adam.first_moment.biases[l],
                       adam.second_moment.biases[l], adam, bc1, bc2);
  }
  return loss;
}

}  // namespace nlcps

#endif  // NLCPS_NET_HPP
