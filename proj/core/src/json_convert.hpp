// Copyright 2026 The signphon Authors
// SPDX-License-Identifier: Apache-2.0

// nlohmann::json conversions shared by the sources; not installed.

#ifndef SIGNPHON_SRC_JSON_CONVERT_HPP
#define SIGNPHON_SRC_JSON_CONVERT_HPP

#include <json.hpp>

#include "signphon/model.hpp"

namespace signphon {

nlohmann::json to_json_value(const ModelConfig& config);
ModelConfig model_config_from_value(const nlohmann::json& value);

}  // namespace signphon

#endif  // SIGNPHON_SRC_JSON_CONVERT_HPP
