#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "amlgraph/tensor.hpp"

namespace amlgraph {

/// Insertion-ordered name -> Tensor registry. Handles share storage with the
/// owning model structs, so optimizer steps and checkpoint loads are visible
/// everywhere. Order is stable, which keeps update sweeps and serialized
/// checkpoints deterministic.
class ParamMap {
public:
    Tensor& add(std::string name, const Tensor& t);
    Tensor* find(std::string_view name);
    const Tensor* find(std::string_view name) const;

    const std::vector<std::pair<std::string, Tensor>>& entries() const {
        return entries_;
    }
    std::vector<Tensor> tensors() const;
    std::size_t size() const { return entries_.size(); }

private:
    std::vector<std::pair<std::string, Tensor>> entries_;
};

/// Checkpoint file: JSON object
///   {"format": "amlgraph-params", "version": 1,
///    "meta": {...caller-provided integers...},
///    "params": [{"name":..., "rows":..., "cols":..., "values":[...]}, ...]}
/// Doubles round-trip exactly; writing is deterministic for fixed contents.
void save_checkpoint(const ParamMap& params,
                     const std::vector<std::pair<std::string, std::int64_t>>& meta,
                     const std::filesystem::path& path);

/// Loads values into an already-shaped ParamMap; every file entry must match
/// an existing parameter by name and shape. Returns the meta map.
std::vector<std::pair<std::string, std::int64_t>> load_checkpoint(
    ParamMap& params, const std::filesystem::path& path);

/// Reads only the meta block (to size a model before loading).
std::vector<std::pair<std::string, std::int64_t>> read_checkpoint_meta(
    const std::filesystem::path& path);

}  // namespace amlgraph
