#pragma once

#include <string>

#include <json.hpp>

#include "loopsim/fock.hpp"
#include "loopsim/schedule.hpp"
#include "loopsim/tomography.hpp"

namespace loopsim {

using Json = nlohmann::json;

/// Self-describing container: {dims, data: [[re, im], ...], convention}.
Json state_to_json(const FockState& state);
FockState state_from_json(const Json& j);

void save_state(const std::string& path, const FockState& state);
FockState load_state(const std::string& path);

/// CSV with header phase_deg,sample.
void write_dataset_csv(const std::string& path, const QuadratureDataset& data);
QuadratureDataset read_dataset_csv(const std::string& path);

Json dataset_to_json(const QuadratureDataset& data);

void write_schedule_csv(const std::string& path, const ControlSchedule& schedule);
Json schedule_to_json(const ControlSchedule& schedule);

/// Fixed-precision decimal string (reports are byte-stable across runs).
std::string format_fixed(double v, int decimals);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace loopsim
