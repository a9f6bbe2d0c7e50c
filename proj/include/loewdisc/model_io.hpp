#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "loewdisc/loewner.hpp"
#include "loewdisc/models.hpp"

namespace loewdisc::io {

using AnyModel = std::variant<ContinuousStateSpace, TimeDelayModel, DiscreteStateSpace>;

/// `{"type": "css"|"dss"|"tds", "A": [[...]], ...}` with row-major nested arrays.
AnyModel model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ContinuousStateSpace& g);
nlohmann::json to_json(const TimeDelayModel& g);
nlohmann::json to_json(const DiscreteStateSpace& g);

AnyModel load_model(const std::filesystem::path& path);

/// Converts a continuous model file entry; a discrete model is rejected.
ContinuousModel as_continuous(const AnyModel& m);

/// %.17g
std::string format_number(double v);

/// CSV with header omega,re_node,im_node,re_value,im_value; one row per
/// positive frequency (conjugates are implied). A leading `# h = ...` line
/// carries the sampling period.
std::string dataset_to_csv(const FrequencyDataSet& data);
FrequencyDataSet dataset_from_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace loewdisc::io
