#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "memwall/checked.hpp"
#include "memwall/errors.hpp"
#include "memwall/model_spec.hpp"

namespace memwall {

// ---------------------------------------------------------------------------
// Training memory footprint: weights + gradients + optimizer state +
// activations, and the rematerialization trade between activation storage
// and recompute FLOPs.
// ---------------------------------------------------------------------------
enum class OptimizerKind { sgd, sgd_momentum, adam };

// Extra per-parameter state tensors: none for plain SGD, one velocity tensor
// for momentum, first and second moments for Adam.
inline std::uint64_t state_multiplier(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::sgd: return 0;
        case OptimizerKind::sgd_momentum: return 1;
        case OptimizerKind::adam: return 2;
    }
    throw DomainError("invalid optimizer kind");
}

inline OptimizerKind optimizer_from_name(std::string_view name) {
    if (name == "sgd") return OptimizerKind::sgd;
    if (name == "sgd_momentum") return OptimizerKind::sgd_momentum;
    if (name == "adam") return OptimizerKind::adam;
    throw LookupError("unknown optimizer '" + std::string(name) +
                      "' (expected sgd, sgd_momentum or adam)");
}

inline std::string to_string(OptimizerKind kind) {
    switch (kind) {
        case OptimizerKind::sgd: return "sgd";
        case OptimizerKind::sgd_momentum: return "sgd_momentum";
        case OptimizerKind::adam: return "adam";
    }
    throw DomainError("invalid optimizer kind");
}

struct MemoryFootprint {
    std::uint64_t weights = 0;
    std::uint64_t gradients = 0;
    std::uint64_t optimizer_state = 0;
    std::uint64_t activations = 0;
    std::uint64_t total = 0;
};

// Retained tensors per layer on the linear path (inputs/outputs of the six
// projections plus residual and normalization intermediates), each of shape
// B x S x d. Fixed per-model accounting differs in practice, so this is an
// overridable knob rather than a constant baked into the formulas.
inline constexpr std::uint64_t kLinearTensorsPerLayer = 14;

// Full-storage activation baseline: every layer keeps its linear-path
// tensors plus the h attention score matrices, and one boundary tensor
// survives at the stack output.
inline std::uint64_t activation_bytes(
    const TransformerConfig& config, const Workload& workload,
    std::uint64_t linear_tensors_per_layer = kLinearTensorsPerLayer) {
    const TransformerConfig cfg = validated(config);
    const Workload wl = validated(workload);
    const std::uint64_t b = wl.elem_bytes();
    const std::uint64_t boundary = checked_mul(wl.batch, wl.seq_len, cfg.hidden_dim, b);
    const std::uint64_t scores =
        checked_mul(wl.batch, cfg.num_heads, wl.seq_len, wl.seq_len, b);
    const std::uint64_t per_layer =
        checked_add(checked_mul(linear_tensors_per_layer, boundary), scores);
    return checked_add(checked_mul(cfg.num_layers, per_layer), boundary);
}

// Checkpoint-every-k schedule: keep ceil(L/k) boundary tensors, and during
// the backward pass one segment of k layers is live at full storage.
inline std::uint64_t checkpointed_bytes(
    const TransformerConfig& config, const Workload& workload,
    std::uint64_t every_k,
    std::uint64_t linear_tensors_per_layer = kLinearTensorsPerLayer) {
    const TransformerConfig cfg = validated(config);
    const Workload wl = validated(workload);
    if (every_k < 1 || every_k > cfg.num_layers) {
        throw DomainError("checkpointed_bytes: every_k must be in [1, num_layers]");
    }
    const std::uint64_t b = wl.elem_bytes();
    const std::uint64_t boundary = checked_mul(wl.batch, wl.seq_len, cfg.hidden_dim, b);
    const std::uint64_t scores =
        checked_mul(wl.batch, cfg.num_heads, wl.seq_len, wl.seq_len, b);
    const std::uint64_t per_layer =
        checked_add(checked_mul(linear_tensors_per_layer, boundary), scores);
    const std::uint64_t num_boundaries =
        (cfg.num_layers + every_k - 1) / every_k;  // ceil(L/k)
    return checked_add(checked_mul(num_boundaries, boundary),
                       checked_mul(every_k, per_layer));
}

// Training-FLOP baseline: backward costs 2x forward (two matmuls per forward
// matmul), so forward + backward = 3x forward.
inline constexpr double kTrainingFlopsOverForward = 3.0;

// Extra compute from recomputation: the (k-1)/k non-checkpointed share of
// layers is forwarded a second time, against the 3x-forward training
// baseline. Bounded above by 1/3.
inline double recompute_overhead(const TransformerConfig& config,
                                 std::uint64_t every_k) {
    const TransformerConfig cfg = validated(config);
    if (every_k < 1 || every_k > cfg.num_layers) {
        throw DomainError("recompute_overhead: every_k must be in [1, num_layers]");
    }
    const double k = static_cast<double>(every_k);
    return (k - 1.0) / (k * kTrainingFlopsOverForward);
}

inline MemoryFootprint footprint(
    const TransformerConfig& config, const Workload& workload,
    OptimizerKind optimizer, std::uint64_t param_bytes,
    std::uint64_t state_bytes,
    std::uint64_t linear_tensors_per_layer = kLinearTensorsPerLayer) {
    const TransformerConfig cfg = validated(config);
    if (param_bytes == 0) throw DomainError("footprint: param_bytes must be >= 1");
    const std::uint64_t params = param_count(cfg, /*include_embeddings=*/true);
    MemoryFootprint fp;
    fp.weights = checked_mul(params, param_bytes);
    fp.gradients = checked_mul(params, param_bytes);
    fp.optimizer_state =
        checked_mul(params, state_bytes, state_multiplier(optimizer));
    fp.activations = activation_bytes(cfg, workload, linear_tensors_per_layer);
    fp.total = checked_add(fp.weights, fp.gradients, fp.optimizer_state,
                           fp.activations);
    return fp;
}

// One point of the memory/compute trade-off frontier.
struct CheckpointTradeoff {
    std::uint64_t every_k = 0;
    std::uint64_t activation_bytes = 0;
    double recompute_overhead = 0.0;
};

// The full k -> (stored bytes, overhead) table for k = 1..L. Overhead grows
// monotonically with k while storage is unimodal with its minimum near
// sqrt(L) in the boundary-dominated regime.
inline std::vector<CheckpointTradeoff> checkpoint_tradeoff(
    const TransformerConfig& config, const Workload& workload,
    std::uint64_t linear_tensors_per_layer = kLinearTensorsPerLayer) {
    const TransformerConfig cfg = validated(config);
    std::vector<CheckpointTradeoff> table;
    table.reserve(cfg.num_layers);
    for (std::uint64_t k = 1; k <= cfg.num_layers; ++k) {
        table.push_back({k,
                         checkpointed_bytes(cfg, workload, k,
                                            linear_tensors_per_layer),
                         recompute_overhead(cfg, k)});
    }
    return table;
}

}  // namespace memwall
