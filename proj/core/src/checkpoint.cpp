#include "amlgraph/checkpoint.hpp"

#include <fstream>

#include <json.hpp>

#include "amlgraph/errors.hpp"

namespace amlgraph {

using nlohmann::ordered_json;

Tensor& ParamMap::add(std::string name, const Tensor& t) {
    if (find(name) != nullptr)
        throw std::invalid_argument("ParamMap: duplicate parameter name " + name);
    entries_.emplace_back(std::move(name), t);
    return entries_.back().second;
}

Tensor* ParamMap::find(std::string_view name) {
    for (auto& [n, t] : entries_)
        if (n == name) return &t;
    return nullptr;
}

const Tensor* ParamMap::find(std::string_view name) const {
    for (const auto& [n, t] : entries_)
        if (n == name) return &t;
    return nullptr;
}

std::vector<Tensor> ParamMap::tensors() const {
    std::vector<Tensor> out;
    out.reserve(entries_.size());
    for (const auto& [n, t] : entries_) out.push_back(t);
    return out;
}

void save_checkpoint(const ParamMap& params,
                     const std::vector<std::pair<std::string, std::int64_t>>& meta,
                     const std::filesystem::path& path) {
    ordered_json doc;
    doc["format"] = "amlgraph-params";
    doc["version"] = 1;
    ordered_json meta_obj = ordered_json::object();
    for (const auto& [k, v] : meta) meta_obj[k] = v;
    doc["meta"] = std::move(meta_obj);
    ordered_json plist = ordered_json::array();
    for (const auto& [name, t] : params.entries()) {
        ordered_json entry;
        entry["name"] = name;
        entry["rows"] = t.rows();
        entry["cols"] = t.cols();
        entry["values"] = t.values();
        plist.push_back(std::move(entry));
    }
    doc["params"] = std::move(plist);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint file " + path.string());
    out << doc.dump() << '\n';
}

namespace {

ordered_json parse_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read checkpoint file " + path.string());
    ordered_json doc;
    try {
        in >> doc;
    } catch (const std::exception& e) {
        throw DataError("malformed checkpoint " + path.string() + ": " + e.what());
    }
    if (doc.value("format", "") != "amlgraph-params")
        throw DataError("not an amlgraph checkpoint: " + path.string());
    if (doc.value("version", 0) != 1)
        throw DataError("unsupported checkpoint version in " + path.string());
    return doc;
}

std::vector<std::pair<std::string, std::int64_t>> meta_of(const ordered_json& doc) {
    std::vector<std::pair<std::string, std::int64_t>> meta;
    for (const auto& [k, v] : doc.at("meta").items())
        meta.emplace_back(k, v.get<std::int64_t>());
    return meta;
}

}  // namespace

std::vector<std::pair<std::string, std::int64_t>> load_checkpoint(
    ParamMap& params, const std::filesystem::path& path) {
    const ordered_json doc = parse_checkpoint(path);
    for (const auto& entry : doc.at("params")) {
        const std::string name = entry.at("name").get<std::string>();
        Tensor* t = params.find(name);
        if (t == nullptr)
            throw DataError("checkpoint parameter " + name + " not present in model");
        const auto rows = entry.at("rows").get<std::size_t>();
        const auto cols = entry.at("cols").get<std::size_t>();
        if (rows != t->rows() || cols != t->cols())
            throw DataError("checkpoint parameter " + name + " has shape (" +
                            std::to_string(rows) + "x" + std::to_string(cols) +
                            "), model expects (" + std::to_string(t->rows()) + "x" +
                            std::to_string(t->cols()) + ")");
        auto values = entry.at("values").get<std::vector<double>>();
        if (values.size() != t->size())
            throw DataError("checkpoint parameter " + name + " has wrong value count");
        t->mutable_values() = std::move(values);
    }
    return meta_of(doc);
}

std::vector<std::pair<std::string, std::int64_t>> read_checkpoint_meta(
    const std::filesystem::path& path) {
    return meta_of(parse_checkpoint(path));
}

}  // namespace amlgraph
