#include "fiqa/budget.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fiqa/errors.hpp"

namespace fiqa::budget {

namespace {

using nlohmann::json;

[[noreturn]] void shape_error(std::size_t index, const LayerSpec& layer,
                              const std::string& what) {
  throw ShapeMismatch("layer " + std::to_string(index) + " (" +
                      layer_kind_name(layer) + "): " + what);
}

std::int64_t conv_out_dim(std::int64_t dim, std::int64_t pad,
                          std::int64_t kernel, std::int64_t stride) {
  return (dim + 2 * pad - kernel) / stride + 1;
}

struct LayerCost {
  std::int64_t params = 0;
  std::int64_t macs = 0;
};

// Applies one layer to `shape`, returning its parameter and MAC cost.
// Shape errors throw; `index` only feeds the message.
LayerCost apply_layer(const LayerSpec& layer, std::size_t index,
                      TensorShape& shape) {
  LayerCost cost;

  if (const auto* conv = std::get_if<Conv2D>(&layer)) {
    if (!shape.spatial) shape_error(index, layer, "requires spatial input");
    if (conv->in_ch < 1 || conv->out_ch < 1 || conv->kernel_h < 1 ||
        conv->kernel_w < 1 || conv->stride_h < 1 || conv->stride_w < 1 ||
        conv->groups < 1 || conv->pad_h < 0 || conv->pad_w < 0) {
      shape_error(index, layer, "invalid field (all dims >= 1, pads >= 0)");
    }
    if (conv->in_ch % conv->groups != 0 || conv->out_ch % conv->groups != 0) {
      shape_error(index, layer, "in_ch and out_ch must be divisible by groups");
    }
    if (conv->in_ch != shape.channels) {
      shape_error(index, layer,
                  "declared in_ch " + std::to_string(conv->in_ch) +
                      " but incoming channels are " +
                      std::to_string(shape.channels));
    }
    const std::int64_t oh =
        conv_out_dim(shape.height, conv->pad_h, conv->kernel_h, conv->stride_h);
    const std::int64_t ow =
        conv_out_dim(shape.width, conv->pad_w, conv->kernel_w, conv->stride_w);
    if (oh < 1 || ow < 1) {
      throw NonPositiveDim("layer " + std::to_string(index) +
                           " (conv2d): output dims " + std::to_string(oh) +
                           "x" + std::to_string(ow));
    }
    const std::int64_t ch_per_group = conv->in_ch / conv->groups;
    cost.params = ch_per_group * conv->out_ch * conv->kernel_h * conv->kernel_w +
                  (conv->has_bias ? conv->out_ch : 0);
    cost.macs = oh * ow * conv->out_ch * ch_per_group * conv->kernel_h *
                conv->kernel_w;
    shape = TensorShape::make_spatial(conv->out_ch, oh, ow);
    return cost;
  }

  if (const auto* lin = std::get_if<Linear>(&layer)) {
    if (shape.spatial) {
      shape_error(index, layer, "requires flat input; insert a flatten layer");
    }
    if (lin->in_features < 1 || lin->out_features < 1) {
      shape_error(index, layer, "features must be >= 1");
    }
    if (lin->in_features != shape.features) {
      shape_error(index, layer,
                  "declared in_features " + std::to_string(lin->in_features) +
                      " but incoming features are " +
                      std::to_string(shape.features));
    }
    cost.params = lin->in_features * lin->out_features +
                  (lin->has_bias ? lin->out_features : 0);
    cost.macs = lin->in_features * lin->out_features;
    shape = TensorShape::make_flat(lin->out_features);
    return cost;
  }

  if (const auto* bn = std::get_if<BatchNorm>(&layer)) {
    if (bn->channels < 1) shape_error(index, layer, "channels must be >= 1");
    const std::int64_t incoming = shape.spatial ? shape.channels : shape.features;
    if (bn->channels != incoming) {
      shape_error(index, layer,
                  "declared channels " + std::to_string(bn->channels) +
                      " but incoming are " + std::to_string(incoming));
    }
    cost.params = 2 * bn->channels;
    cost.macs = 2 * shape.element_count();  // inference scale + shift
    return cost;
  }

  if (std::holds_alternative<Activation>(layer)) {
    cost.macs = shape.element_count();
    return cost;
  }

  if (const auto* pool = std::get_if<Pool>(&layer)) {
    if (!shape.spatial) shape_error(index, layer, "requires spatial input");
    if (pool->kernel < 1 || pool->stride < 1) {
      shape_error(index, layer, "kernel and stride must be >= 1");
    }
    const std::int64_t oh = conv_out_dim(shape.height, 0, pool->kernel, pool->stride);
    const std::int64_t ow = conv_out_dim(shape.width, 0, pool->kernel, pool->stride);
    if (oh < 1 || ow < 1) {
      throw NonPositiveDim("layer " + std::to_string(index) +
                           " (pool): output dims " + std::to_string(oh) + "x" +
                           std::to_string(ow));
    }
    shape = TensorShape::make_spatial(shape.channels, oh, ow);
    cost.macs = pool->kernel * pool->kernel * shape.element_count();
    return cost;
  }

  if (std::holds_alternative<GlobalAvgPool>(layer)) {
    if (!shape.spatial) shape_error(index, layer, "requires spatial input");
    cost.macs = shape.element_count();  // one accumulate per input element
    shape = TensorShape::make_spatial(shape.channels, 1, 1);
    return cost;
  }

  if (std::holds_alternative<ResidualAdd>(layer)) {
    cost.macs = shape.element_count();
    return cost;
  }

  if (std::holds_alternative<Flatten>(layer)) {
    if (!shape.spatial) shape_error(index, layer, "input is already flat");
    shape = TensorShape::make_flat(shape.element_count());
    return cost;
  }

  shape_error(index, layer, "unhandled layer kind");
}

TensorShape initial_shape(const ModelSpec& m) {
  if (m.input.channels < 1 || m.input.height < 1 || m.input.width < 1) {
    throw NonPositiveDim("model input shape must be positive");
  }
  return TensorShape::make_spatial(m.input.channels, m.input.height,
                                   m.input.width);
}

}  // namespace

std::string layer_kind_name(const LayerSpec& layer) {
  struct Namer {
    std::string operator()(const Conv2D&) const { return "conv2d"; }
    std::string operator()(const Linear&) const { return "linear"; }
    std::string operator()(const BatchNorm&) const { return "batchnorm"; }
    std::string operator()(const Activation&) const { return "activation"; }
    std::string operator()(const Pool&) const { return "pool"; }
    std::string operator()(const GlobalAvgPool&) const {
      return "global_avg_pool";
    }
    std::string operator()(const ResidualAdd&) const { return "residual_add"; }
    std::string operator()(const Flatten&) const { return "flatten"; }
  };
  return std::visit(Namer{}, layer);
}

std::string TensorShape::to_string() const {
  if (!spatial) return std::to_string(features);
  return std::to_string(channels) + "x" + std::to_string(height) + "x" +
         std::to_string(width);
}

std::vector<TensorShape> propagate_shapes(const ModelSpec& m) {
  TensorShape shape = initial_shape(m);
  std::vector<TensorShape> shapes;
  shapes.reserve(m.layers.size());
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    apply_layer(m.layers[i], i, shape);
    shapes.push_back(shape);
  }
  return shapes;
}

std::int64_t count_params(const ModelSpec& m) {
  TensorShape shape = initial_shape(m);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    total += apply_layer(m.layers[i], i, shape).params;
  }
  return total;
}

std::int64_t count_macs(const ModelSpec& m) {
  TensorShape shape = initial_shape(m);
  std::int64_t total = 0;
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    total += apply_layer(m.layers[i], i, shape).macs;
  }
  return total;
}

double count_flops(const ModelSpec& m) {
  return static_cast<double>(count_macs(m)) / 1e9;
}

BudgetReport check_budget(const ModelSpec& m, BudgetLimits limits) {
  BudgetReport report;
  report.flops_limit = limits.flops_limit;
  report.params_limit = limits.params_limit;

  TensorShape shape = initial_shape(m);
  std::int64_t total_params = 0;
  std::int64_t total_macs = 0;
  for (std::size_t i = 0; i < m.layers.size(); ++i) {
    const LayerCost cost = apply_layer(m.layers[i], i, shape);
    report.per_layer.push_back(LayerReport{
        i, layer_kind_name(m.layers[i]), shape, cost.params, cost.macs});
    total_params += cost.params;
    total_macs += cost.macs;
  }
  report.gflops = static_cast<double>(total_macs) / 1e9;
  report.params_millions = static_cast<double>(total_params) / 1e6;
  report.flops_ok = limits.flops_ok(report.gflops);
  report.params_ok = limits.params_ok(report.params_millions);
  return report;
}

// ---- JSON parsing -----------------------------------------------------------

namespace {

constexpr const char* kSupportedKinds =
    "conv2d, linear, batchnorm, activation, pool, global_avg_pool, "
    "residual_add, flatten";

std::int64_t require_int(const json& obj, const char* key,
                         const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_number_integer()) {
    throw ParseError(where + ": missing or non-integer field \"" + key + "\"");
  }
  return obj[key].get<std::int64_t>();
}

std::int64_t int_or(const json& obj, const char* key, std::int64_t fallback,
                    const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_number_integer()) {
    throw ParseError(where + ": field \"" + key + "\" must be an integer");
  }
  return obj[key].get<std::int64_t>();
}

// Accepts a scalar or a two-element [h, w] array.
std::pair<std::int64_t, std::int64_t> int_pair_or(const json& obj,
                                                  const char* key,
                                                  std::int64_t fallback,
                                                  const std::string& where) {
  if (!obj.contains(key)) return {fallback, fallback};
  const json& v = obj[key];
  if (v.is_number_integer()) {
    const auto x = v.get<std::int64_t>();
    return {x, x};
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer() &&
      v[1].is_number_integer()) {
    return {v[0].get<std::int64_t>(), v[1].get<std::int64_t>()};
  }
  throw ParseError(where + ": field \"" + std::string(key) +
                   "\" must be an integer or [h, w] pair");
}

bool bool_or(const json& obj, const char* key, bool fallback,
             const std::string& where) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_boolean()) {
    throw ParseError(where + ": field \"" + key + "\" must be a boolean");
  }
  return obj[key].get<bool>();
}

ActivationKind parse_activation_kind(const std::string& name,
                                     const std::string& where) {
  if (name == "relu") return ActivationKind::relu;
  if (name == "relu6") return ActivationKind::relu6;
  if (name == "hswish") return ActivationKind::hswish;
  if (name == "sigmoid") return ActivationKind::sigmoid;
  if (name == "gelu") return ActivationKind::gelu;
  throw UnknownKind(where + ": unknown activation \"" + name +
                    "\"; supported: relu, relu6, hswish, sigmoid, gelu");
}

LayerSpec parse_layer(const json& obj, std::size_t index) {
  const std::string where = "layer " + std::to_string(index);
  if (!obj.is_object() || !obj.contains("kind") || !obj["kind"].is_string()) {
    throw ParseError(where + ": each layer needs a string \"kind\"");
  }
  const std::string kind = obj["kind"].get<std::string>();

  if (kind == "conv2d") {
    Conv2D c;
    c.in_ch = require_int(obj, "in", where);
    c.out_ch = require_int(obj, "out", where);
    if (!obj.contains("kernel")) {
      throw ParseError(where + ": conv2d needs \"kernel\"");
    }
    std::tie(c.kernel_h, c.kernel_w) = int_pair_or(obj, "kernel", 1, where);
    std::tie(c.stride_h, c.stride_w) = int_pair_or(obj, "stride", 1, where);
    std::tie(c.pad_h, c.pad_w) = int_pair_or(obj, "pad", 0, where);
    c.groups = int_or(obj, "groups", 1, where);
    c.has_bias = bool_or(obj, "bias", true, where);
    return c;
  }
  if (kind == "linear") {
    Linear l;
    l.in_features = require_int(obj, "in", where);
    l.out_features = require_int(obj, "out", where);
    l.has_bias = bool_or(obj, "bias", true, where);
    return l;
  }
  if (kind == "batchnorm") {
    return BatchNorm{require_int(obj, "channels", where)};
  }
  if (kind == "activation") {
    if (!obj.contains("fn") || !obj["fn"].is_string()) {
      throw ParseError(where + ": activation needs a string \"fn\"");
    }
    return Activation{parse_activation_kind(obj["fn"].get<std::string>(), where)};
  }
  if (kind == "pool") {
    Pool p;
    if (!obj.contains("op") || !obj["op"].is_string()) {
      throw ParseError(where + ": pool needs \"op\" of max or avg");
    }
    const std::string op = obj["op"].get<std::string>();
    if (op == "max") {
      p.kind = PoolKind::max;
    } else if (op == "avg") {
      p.kind = PoolKind::avg;
    } else {
      throw UnknownKind(where + ": unknown pool op \"" + op +
                        "\"; supported: max, avg");
    }
    p.kernel = require_int(obj, "kernel", where);
    p.stride = int_or(obj, "stride", p.kernel, where);
    return p;
  }
  if (kind == "global_avg_pool") return GlobalAvgPool{};
  if (kind == "residual_add") return ResidualAdd{};
  if (kind == "flatten") return Flatten{};

  throw UnknownKind(where + ": unknown layer kind \"" + kind +
                    "\"; supported kinds: " + kSupportedKinds);
}

}  // namespace

ModelSpec parse_model_json(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("model spec is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ParseError("model spec must be a JSON object");

  ModelSpec spec;
  spec.name = root.value("name", std::string("unnamed"));

  if (!root.contains("input") || !root["input"].is_array() ||
      root["input"].size() != 3) {
    throw ParseError("model spec needs \"input\": [channels, height, width]");
  }
  for (const auto& v : root["input"]) {
    if (!v.is_number_integer()) {
      throw ParseError("\"input\" entries must be integers");
    }
  }
  spec.input.channels = root["input"][0].get<std::int64_t>();
  spec.input.height = root["input"][1].get<std::int64_t>();
  spec.input.width = root["input"][2].get<std::int64_t>();

  if (!root.contains("layers") || !root["layers"].is_array()) {
    throw ParseError("model spec needs a \"layers\" array");
  }
  std::size_t index = 0;
  for (const auto& layer : root["layers"]) {
    spec.layers.push_back(parse_layer(layer, index++));
  }
  return spec;
}

ModelSpec load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open model spec \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_model_json(buf.str());
}

}  // namespace fiqa::budget
