#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "surrex/fidelity.hpp"
#include "surrex/surrogate.hpp"
#include "surrex/tabular.hpp"

namespace surrex {

using ordered_json = nlohmann::ordered_json;

/// Shortest decimal form that round-trips to the same double.
std::string format_double_shortest(double v);

ordered_json explanation_to_json(const Explanation& explanation);

ordered_json report_to_json(const FidelityReport& report);

/// index, feature columns, local_fid ("skip" for skipped instances).
void write_heatmap_csv(const std::filesystem::path& path, const Dataset& eval_set,
                       const FidelityReport& report);

void write_json_file(const std::filesystem::path& path, const ordered_json& j);
ordered_json read_json_file(const std::filesystem::path& path);

}  // namespace surrex
