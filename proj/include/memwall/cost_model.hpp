#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "memwall/checked.hpp"
#include "memwall/errors.hpp"
#include "memwall/model_spec.hpp"

namespace memwall {

// ---------------------------------------------------------------------------
// FLOP / MOP accounting.
//
// MOPs convention: every kernel reads each input tensor exactly once from
// main memory and writes each output tensor exactly once. No inter-kernel
// reuse is modeled, so the per-kernel traffic is the lower bound that pairs
// with treating on-chip memory as large enough to hold a kernel's operands.
// Multiply and add of a MAC are counted as separate FLOPs.
//
// weight_mops is the slice of mops spent re-reading model parameters; it is
// what separates the encoder (weights read once per pass) from the
// autoregressive decoder (weights read once per generated token).
// ---------------------------------------------------------------------------
struct KernelCost {
    std::string kernel_name;
    std::uint64_t flops = 0;
    std::uint64_t mops = 0;         // bytes
    std::uint64_t weight_mops = 0;  // bytes of mops that are parameter reads
};

struct CostBreakdown {
    std::vector<KernelCost> kernels;
    std::uint64_t total_flops = 0;
    std::uint64_t total_mops = 0;
    std::uint64_t total_weight_mops = 0;
    double arithmetic_intensity = 0.0;  // total_flops / total_mops
};

// FLOPs = 2*m*k*n, MOPs = (m*k + k*n + m*n) * bytes: both operands and the
// result touched exactly once.
inline KernelCost matmul_cost(std::uint64_t m, std::uint64_t k, std::uint64_t n,
                              std::uint64_t bytes_per_elem) {
    if (m == 0 || k == 0 || n == 0 || bytes_per_elem == 0) {
        throw DomainError("matmul_cost: dimensions and element size must be >= 1");
    }
    KernelCost cost;
    cost.kernel_name = "matmul";
    cost.flops = checked_mul(2, m, k, n);
    cost.mops = checked_mul(
        checked_add(checked_mul(m, k), checked_mul(k, n), checked_mul(m, n)),
        bytes_per_elem);
    return cost;
}

// A batch of `batches` independent (m x k)·(k x n) products, each operand
// touched once. Covers per-head attention kernels.
inline KernelCost batched_matmul_cost(std::uint64_t batches, std::uint64_t m,
                                      std::uint64_t k, std::uint64_t n,
                                      std::uint64_t bytes_per_elem) {
    KernelCost cost = matmul_cost(m, k, n, bytes_per_elem);
    if (batches == 0) throw DomainError("batched_matmul_cost: batches must be >= 1");
    cost.flops = checked_mul(cost.flops, batches);
    cost.mops = checked_mul(cost.mops, batches);
    return cost;
}

inline KernelCost elementwise_cost(std::uint64_t n_elems,
                                   std::uint64_t flops_per_elem,
                                   std::uint64_t reads, std::uint64_t writes,
                                   std::uint64_t bytes_per_elem) {
    if (n_elems == 0) {
        throw DomainError("elementwise_cost: n_elems must be >= 1");
    }
    KernelCost cost;
    cost.kernel_name = "elementwise";
    cost.flops = checked_mul(n_elems, flops_per_elem);
    cost.mops = checked_mul(n_elems, checked_add(reads, writes), bytes_per_elem);
    return cost;
}

inline double arithmetic_intensity(std::uint64_t flops, std::uint64_t mops) {
    if (mops == 0) {
        throw DomainError("arithmetic intensity undefined for zero MOPs");
    }
    return static_cast<double>(flops) / static_cast<double>(mops);
}

inline double arithmetic_intensity(const CostBreakdown& cost) {
    return arithmetic_intensity(cost.total_flops, cost.total_mops);
}

namespace detail {

// Accumulates kernels by name in first-seen order so per-step sums stay a
// stable, compact kernel list.
class CostAccumulator {
  public:
    void add(std::string name, const KernelCost& cost,
             std::uint64_t weight_mops = 0) {
        for (auto& k : kernels_) {
            if (k.kernel_name == name) {
                k.flops = checked_add(k.flops, cost.flops);
                k.mops = checked_add(k.mops, cost.mops);
                k.weight_mops = checked_add(k.weight_mops, weight_mops);
                return;
            }
        }
        KernelCost named = cost;
        named.kernel_name = std::move(name);
        named.weight_mops = weight_mops;
        kernels_.push_back(std::move(named));
    }

    // Repeat-count for identical layers: scales the kernel before adding.
    void add_scaled(std::string name, KernelCost cost, std::uint64_t times,
                    std::uint64_t weight_mops = 0) {
        cost.flops = checked_mul(cost.flops, times);
        cost.mops = checked_mul(cost.mops, times);
        add(std::move(name), cost, checked_mul(weight_mops, times));
    }

    CostBreakdown finish() && {
        CostBreakdown out;
        out.kernels = std::move(kernels_);
        for (const auto& k : out.kernels) {
            out.total_flops = checked_add(out.total_flops, k.flops);
            out.total_mops = checked_add(out.total_mops, k.mops);
            out.total_weight_mops = checked_add(out.total_weight_mops, k.weight_mops);
        }
        out.arithmetic_intensity =
            arithmetic_intensity(out.total_flops, out.total_mops);
        return out;
    }

  private:
    std::vector<KernelCost> kernels_;
};

// Elementwise FLOP convention (used only when elementwise_counting is on):
// softmax 5 FLOPs/elem, layer-norm 5, GELU 8, residual add 1; one read and
// one write per tensor touched.
inline constexpr std::uint64_t kSoftmaxFlopsPerElem = 5;
inline constexpr std::uint64_t kLayerNormFlopsPerElem = 5;
inline constexpr std::uint64_t kGeluFlopsPerElem = 8;
inline constexpr std::uint64_t kResidualFlopsPerElem = 1;

// Shared layer body for one pass over `rows` fresh tokens attending to
// `attend_len` positions. rows = S for the encoder pass, 1 for a decoder
// step; attend_len = S or kv_len respectively.
inline void add_layer_kernels(CostAccumulator& acc, const TransformerConfig& cfg,
                              std::uint64_t batch, std::uint64_t rows,
                              std::uint64_t attend_len, std::uint64_t bytes,
                              bool elementwise, std::uint64_t layers) {
    const std::uint64_t d = cfg.hidden_dim;
    const std::uint64_t h = cfg.num_heads;
    const std::uint64_t dh = cfg.head_dim();
    const std::uint64_t ffn = cfg.ffn_dim;
    const std::uint64_t br = checked_mul(batch, rows);

    const std::uint64_t dd_bytes = checked_mul(d, d, bytes);
    KernelCost qkv = matmul_cost(br, d, d, bytes);
    qkv.flops = checked_mul(qkv.flops, 3);
    qkv.mops = checked_mul(qkv.mops, 3);
    acc.add_scaled("qkv_proj", qkv, layers, checked_mul(3, dd_bytes));

    acc.add_scaled("attn_scores",
                   batched_matmul_cost(checked_mul(batch, h), rows, dh,
                                       attend_len, bytes),
                   layers);
    acc.add_scaled("attn_apply",
                   batched_matmul_cost(checked_mul(batch, h), rows, attend_len,
                                       dh, bytes),
                   layers);
    acc.add_scaled("out_proj", matmul_cost(br, d, d, bytes), layers, dd_bytes);
    acc.add_scaled("ffn_up", matmul_cost(br, d, ffn, bytes), layers,
                   checked_mul(d, ffn, bytes));
    acc.add_scaled("ffn_down", matmul_cost(br, ffn, d, bytes), layers,
                   checked_mul(ffn, d, bytes));

    if (elementwise) {
        const std::uint64_t brd = checked_mul(br, d);
        acc.add_scaled("layer_norm",
                       elementwise_cost(checked_mul(2, brd),
                                        kLayerNormFlopsPerElem, 1, 1, bytes),
                       layers);
        acc.add_scaled("softmax",
                       elementwise_cost(checked_mul(batch, h, rows, attend_len),
                                        kSoftmaxFlopsPerElem, 1, 1, bytes),
                       layers);
        acc.add_scaled("gelu",
                       elementwise_cost(checked_mul(br, ffn),
                                        kGeluFlopsPerElem, 1, 1, bytes),
                       layers);
        acc.add_scaled("residual_add",
                       elementwise_cost(checked_mul(2, brd),
                                        kResidualFlopsPerElem, 2, 1, bytes),
                       layers);
    }
}

// Token-embedding gather plus, for the output end, the LM-head projection
// onto the vocabulary. Off by default; the headline counts exclude both.
inline void add_embedding_kernels(CostAccumulator& acc,
                                  const TransformerConfig& cfg,
                                  std::uint64_t batch, std::uint64_t rows,
                                  std::uint64_t bytes) {
    const std::uint64_t row_bytes = checked_mul(batch, rows, cfg.hidden_dim, bytes);
    KernelCost lookup;
    lookup.flops = 0;
    lookup.mops = checked_mul(2, row_bytes);  // gathered rows read + written
    acc.add("embed_lookup", lookup, row_bytes);
    acc.add("lm_head",
            matmul_cost(checked_mul(batch, rows), cfg.hidden_dim,
                        cfg.vocab_size, bytes),
            checked_mul(cfg.hidden_dim, cfg.vocab_size, bytes));
}

}  // namespace detail

// One matrix-matrix pass over all S tokens concurrently. Works for either
// arch_class: a decoder prompt prefill is exactly this pass.
inline CostBreakdown encoder_forward_cost(const TransformerConfig& config,
                                          const Workload& workload) {
    const TransformerConfig cfg = validated(config);
    const Workload wl = validated(workload);
    const std::uint64_t bytes = wl.elem_bytes();

    detail::CostAccumulator acc;
    detail::add_layer_kernels(acc, cfg, wl.batch, wl.seq_len, wl.seq_len, bytes,
                              wl.elementwise_counting, cfg.num_layers);
    if (wl.include_embeddings) {
        detail::add_embedding_kernels(acc, cfg, wl.batch, wl.seq_len, bytes);
    }
    return std::move(acc).finish();
}

// One autoregressive step with kv_len cached entries (the current token
// included). Matrix-vector shaped at batch 1; the cached K and V entries are
// re-read in full and the new pair is written back.
inline CostBreakdown decoder_step_cost(const TransformerConfig& config,
                                       const Workload& workload,
                                       std::uint64_t kv_len) {
    if (kv_len < 1) {
        throw DomainError("decoder_step_cost: kv_len must be >= 1");
    }
    const TransformerConfig cfg = validated(config);
    const Workload wl = validated(workload);
    const std::uint64_t bytes = wl.elem_bytes();

    detail::CostAccumulator acc;
    detail::add_layer_kernels(acc, cfg, wl.batch, 1, kv_len, bytes,
                              wl.elementwise_counting, cfg.num_layers);
    KernelCost kv_write;
    kv_write.flops = 0;
    kv_write.mops = checked_mul(2, wl.batch, cfg.hidden_dim, bytes);
    acc.add_scaled("kv_cache_write", kv_write, cfg.num_layers);
    if (wl.include_embeddings) {
        detail::add_embedding_kernels(acc, cfg, wl.batch, 1, bytes);
    }
    return std::move(acc).finish();
}

// Full generation of workload.seq_len tokens starting from a single token
// and an empty cache: the kernel-wise sum of decoder_step_cost over
// kv_len = 1..S.
inline CostBreakdown decoder_generate_cost(const TransformerConfig& config,
                                           const Workload& workload) {
    const TransformerConfig cfg = validated(config);
    const Workload wl = validated(workload);

    detail::CostAccumulator acc;
    for (std::uint64_t kv = 1; kv <= wl.seq_len; ++kv) {
        const CostBreakdown step = decoder_step_cost(cfg, wl, kv);
        for (const auto& kernel : step.kernels) {
            acc.add(kernel.kernel_name, kernel, kernel.weight_mops);
        }
    }
    return std::move(acc).finish();
}

// Dispatches on the pass type: encoders process all tokens at once, decoders
// generate the sequence token by token.
inline CostBreakdown inference_cost(const TransformerConfig& config,
                                    const Workload& workload,
                                    ArchClass mode) {
    return mode == ArchClass::encoder ? encoder_forward_cost(config, workload)
                                      : decoder_generate_cost(config, workload);
}

}  // namespace memwall
