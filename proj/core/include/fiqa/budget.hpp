#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace fiqa::budget {

// Layer vocabulary for sequential model specs. Channel/feature counts are
// declared per layer and validated against the propagated shape, so a spec
// that drifts out of sync with itself fails loudly.

struct Conv2D {
  std::int64_t in_ch = 0;
  std::int64_t out_ch = 0;
  std::int64_t kernel_h = 1;
  std::int64_t kernel_w = 1;
  std::int64_t stride_h = 1;
  std::int64_t stride_w = 1;
  std::int64_t pad_h = 0;
  std::int64_t pad_w = 0;
  std::int64_t groups = 1;
  bool has_bias = true;
};

struct Linear {
  std::int64_t in_features = 0;
  std::int64_t out_features = 0;
  bool has_bias = true;
};

struct BatchNorm {
  std::int64_t channels = 0;
};

enum class ActivationKind { relu, relu6, hswish, sigmoid, gelu };

struct Activation {
  ActivationKind kind = ActivationKind::relu;
};

enum class PoolKind { max, avg };

struct Pool {
  PoolKind kind = PoolKind::max;
  std::int64_t kernel = 1;
  std::int64_t stride = 1;
};

struct GlobalAvgPool {};

// Element-wise add with the enclosing block's input. Shape-preserving;
// counted as one op per element.
struct ResidualAdd {};

struct Flatten {};

using LayerSpec = std::variant<Conv2D, Linear, BatchNorm, Activation, Pool,
                               GlobalAvgPool, ResidualAdd, Flatten>;

// Name of the layer kind as it appears in spec files and reports.
std::string layer_kind_name(const LayerSpec& layer);

struct InputShape {
  std::int64_t channels = 0;
  std::int64_t height = 0;
  std::int64_t width = 0;
};

struct ModelSpec {
  std::string name;
  InputShape input;
  std::vector<LayerSpec> layers;
};

// A propagated tensor shape: spatial (c,h,w) before Flatten, a flat
// feature count after.
struct TensorShape {
  bool spatial = true;
  std::int64_t channels = 0;
  std::int64_t height = 0;
  std::int64_t width = 0;
  std::int64_t features = 0;

  static TensorShape make_spatial(std::int64_t c, std::int64_t h,
                                  std::int64_t w) {
    return TensorShape{true, c, h, w, 0};
  }
  static TensorShape make_flat(std::int64_t f) {
    return TensorShape{false, 0, 0, 0, f};
  }

  std::int64_t element_count() const {
    return spatial ? channels * height * width : features;
  }
  std::string to_string() const;  // "8x32x32" or "1280"

  friend bool operator==(const TensorShape&, const TensorShape&) = default;
};

// Output shape after each layer, in layer order. Spatial dims follow
// floor((dim + 2*pad - kernel)/stride) + 1. Throws ShapeMismatch or
// NonPositiveDim naming the offending layer index.
std::vector<TensorShape> propagate_shapes(const ModelSpec& m);

// Trainable parameter count. Conv2D: (in/groups)*out*kh*kw (+out bias);
// Linear: in*out (+out bias); BatchNorm: 2*channels; everything else 0.
std::int64_t count_params(const ModelSpec& m);

// Multiply-accumulate count per layer; 1 MAC = 1 FLOP throughout.
std::int64_t count_macs(const ModelSpec& m);

// Total MACs divided by 1e9.
double count_flops(const ModelSpec& m);

struct LayerReport {
  std::size_t index = 0;
  std::string kind;
  TensorShape out_shape;
  std::int64_t params = 0;
  std::int64_t macs = 0;
};

// The challenge compute constraint.
struct BudgetLimits {
  double flops_limit = 0.5;    // GFLOPs
  double params_limit = 5.0;   // millions of parameters

  bool flops_ok(double gflops) const { return gflops <= flops_limit; }
  bool params_ok(double params_millions) const {
    return params_millions <= params_limit;
  }
};

struct BudgetReport {
  double gflops = 0.0;
  double params_millions = 0.0;
  double flops_limit = 0.5;
  double params_limit = 5.0;
  bool flops_ok = false;
  bool params_ok = false;
  std::vector<LayerReport> per_layer;

  bool within_budget() const { return flops_ok && params_ok; }
};

BudgetReport check_budget(const ModelSpec& m, BudgetLimits limits = {});

// Parses the JSON model-spec format. Unknown layer kinds raise UnknownKind
// listing the supported ones; missing or ill-typed fields raise ParseError.
ModelSpec parse_model_json(const std::string& text);
ModelSpec load_model_file(const std::string& path);

}  // namespace fiqa::budget
