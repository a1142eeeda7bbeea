#pragma once

#include <vector>

#include "godet/rng.hpp"
#include "godet/tensor.hpp"

namespace godet {

enum class LayerKind { dense, gcn };
enum class Activation { none, relu, sigmoid, tanh };

struct LayerSpec {
  LayerKind kind;
  std::size_t in_dim;
  std::size_t out_dim;
  Activation activation;
};

struct Layer {
  LayerSpec spec;
  Tensor weight;  // in_dim x out_dim
  Tensor bias;    // 1 x out_dim
};

/// Ordered layer stack; consecutive dims must chain.
struct Network {
  std::vector<Layer> layers;

  std::vector<Tensor> params() const;
  std::size_t param_count() const;

  /// adj is required iff any layer is a gcn layer.
  Tensor forward(const Tensor& input, const CsrMatrix* adj = nullptr) const;
};

Tensor apply_activation(const Tensor& x, Activation act);

/// sigma(A_hat * H * W + b) with full provenance.
Tensor gcn_layer_forward(const CsrMatrix& adj, const Tensor& h, const Tensor& w,
                         const Tensor& b, Activation act);

/// Glorot-initialized network; deterministic under the rng seed.
Network build_network(const std::vector<LayerSpec>& specs, Pcg32& rng);

/// Encoder/decoder pair; encoder output dim must equal decoder input dim.
std::pair<Network, Network> build_autoencoder(const std::vector<LayerSpec>& encoder,
                                              const std::vector<LayerSpec>& decoder, Pcg32& rng);

/// Default 2-layer encoder (in -> hidden -> embed, relu then none) and
/// mirrored decoder with a per-detector output activation.
std::vector<LayerSpec> encoder_specs(LayerKind kind, std::size_t in_dim, std::size_t hidden,
                                     std::size_t embed);
std::vector<LayerSpec> decoder_specs(LayerKind kind, std::size_t embed, std::size_t hidden,
                                     std::size_t out_dim, Activation out_act);

}  // namespace godet
