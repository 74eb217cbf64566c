#pragma once

#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "risklabs/nn/tensor.hpp"

namespace risklabs::nn {

/// {"name": {"shape": [rows, cols], "data": [...]}, ...}
inline nlohmann::json params_to_json(const std::vector<Param*>& params) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto* p : params) {
    out[p->name] = {{"shape", {p->value.rows(), p->value.cols()}}, {"data", p->value.values()}};
  }
  return out;
}

/// Loads values into existing parameters; names and shapes must match exactly.
inline void params_from_json(const nlohmann::json& doc, const std::vector<Param*>& params) {
  if (!doc.is_object()) throw InputError("parameter document must be an object");
  std::set<std::string> expected;
  for (auto* p : params) {
    expected.insert(p->name);
    const auto it = doc.find(p->name);
    if (it == doc.end()) throw InputError("parameter '" + p->name + "' missing from model file");
    const auto shape = it->at("shape").get<std::vector<std::size_t>>();
    if (shape.size() != 2 || shape[0] != p->value.rows() || shape[1] != p->value.cols()) {
      throw InputError("parameter '" + p->name + "': stored shape does not match " + p->value.shape());
    }
    auto data = it->at("data").get<Vector>();
    p->value = Tensor2(shape[0], shape[1], std::move(data));
    p->grad = Tensor2(shape[0], shape[1]);
  }
  for (const auto& [name, _] : doc.items()) {
    if (!expected.count(name)) throw InputError("unexpected parameter '" + name + "' in model file");
  }
}

}  // namespace risklabs::nn
