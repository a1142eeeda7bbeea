#include "godet/layers.hpp"

#include <string>

namespace godet {

Tensor apply_activation(const Tensor& x, Activation act) {
  switch (act) {
    case Activation::none: return x;
    case Activation::relu: return relu(x);
    case Activation::sigmoid: return sigmoid(x);
    case Activation::tanh: return tanh_op(x);
  }
  throw ConfigError("unknown activation");
}

Tensor gcn_layer_forward(const CsrMatrix& adj, const Tensor& h, const Tensor& w, const Tensor& b,
                         Activation act) {
  return apply_activation(add_bias(spmm_ad(adj, matmul(h, w)), b), act);
}

std::vector<Tensor> Network::params() const {
  std::vector<Tensor> out;
  out.reserve(layers.size() * 2);
  for (const auto& l : layers) {
    out.push_back(l.weight);
    out.push_back(l.bias);
  }
  return out;
}

std::size_t Network::param_count() const {
  std::size_t n = 0;
  for (const auto& l : layers) n += l.spec.in_dim * l.spec.out_dim + l.spec.out_dim;
  return n;
}

Tensor Network::forward(const Tensor& input, const CsrMatrix* adj) const {
  Tensor h = input;
  for (const auto& l : layers) {
    if (l.spec.kind == LayerKind::gcn) {
      if (!adj) throw ContractError("gcn layer requires an adjacency operator");
      h = gcn_layer_forward(*adj, h, l.weight, l.bias, l.spec.activation);
    } else {
      h = apply_activation(add_bias(matmul(h, l.weight), l.bias), l.spec.activation);
    }
  }
  return h;
}

Network build_network(const std::vector<LayerSpec>& specs, Pcg32& rng) {
  Network net;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& s = specs[i];
    if (s.in_dim < 1 || s.out_dim < 1) throw ConfigError("layer dims must be >= 1");
    if (i > 0 && specs[i - 1].out_dim != s.in_dim)
      throw ConfigError("layer dims do not chain: " + std::to_string(specs[i - 1].out_dim) +
                        " -> " + std::to_string(s.in_dim));
    Layer l;
    l.spec = s;
    l.weight = Tensor::parameter(glorot_uniform(s.in_dim, s.out_dim, rng));
    l.bias = Tensor::parameter(Matrix(1, s.out_dim));
    net.layers.push_back(std::move(l));
  }
  return net;
}

std::pair<Network, Network> build_autoencoder(const std::vector<LayerSpec>& encoder,
                                              const std::vector<LayerSpec>& decoder, Pcg32& rng) {
  if (encoder.empty() || decoder.empty()) throw ConfigError("empty layer spec list");
  if (encoder.back().out_dim != decoder.front().in_dim)
    throw ConfigError("encoder output dim != decoder input dim");
  Network enc = build_network(encoder, rng);
  Network dec = build_network(decoder, rng);
  return {std::move(enc), std::move(dec)};
}

std::vector<LayerSpec> encoder_specs(LayerKind kind, std::size_t in_dim, std::size_t hidden,
                                     std::size_t embed) {
  return {{kind, in_dim, hidden, Activation::relu}, {kind, hidden, embed, Activation::none}};
}

std::vector<LayerSpec> decoder_specs(LayerKind kind, std::size_t embed, std::size_t hidden,
                                     std::size_t out_dim, Activation out_act) {
  return {{kind, embed, hidden, Activation::relu}, {kind, hidden, out_dim, out_act}};
}

}  // namespace godet
