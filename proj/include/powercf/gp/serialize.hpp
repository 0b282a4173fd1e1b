#pragma once

#include <json.hpp>

#include "powercf/gp/model.hpp"

namespace powercf::gp {

/// Kernel terms, hyperparameters, noise, standardization, training data,
/// seed and restart diagnostics.
nlohmann::ordered_json model_to_json(const GpModel& model);
GpModel model_from_json(const nlohmann::ordered_json& doc);

nlohmann::ordered_json kernel_to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const nlohmann::ordered_json& doc);

}  // namespace powercf::gp
