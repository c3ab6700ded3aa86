#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "stablehcm/classify.hpp"
#include "stablehcm/envelopes.hpp"
#include "stablehcm/hcm.hpp"

namespace stablehcm::io {

inline constexpr int schema_version = 1;

std::string format_double(double v);

std::string theta_csv(const ThetaFunction& th);
nlohmann::json to_json(const ThetaFunction& th);
ThetaFunction theta_from_json(const nlohmann::json& j);

nlohmann::json to_json(const HcmRepresentation& rep);
HcmRepresentation hcm_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CmProbeReport& rep);
nlohmann::json to_json(const ClassificationReport& rep);
nlohmann::json to_json(const EnvelopeConstants& c);
nlohmann::json to_json(const EnvelopeReport& r);
nlohmann::json to_json(const GgcDiagnostic& d);

// Writes through a temporary sibling and renames, so readers never see partial files.
void atomic_write(const std::filesystem::path& path, const std::string& content);

// Relative paths resolve against $STABLEHCM_OUTPUT_DIR when it is set.
std::filesystem::path resolve_output(const std::string& path);

}  // namespace stablehcm::io
