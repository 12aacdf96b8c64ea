#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "wsn/errors.hpp"
#include "wsn/scenario.hpp"
#include "wsn/sim.hpp"

namespace wsn::cli {

/// Config rejected by the schema. `pointer()` is a JSON pointer such as
/// "/field/theta" ("" for the document root).
class SchemaError : public Error {
 public:
  SchemaError(std::string pointer, const std::string& what);
  const std::string& pointer() const noexcept { return pointer_; }

 private:
  std::string pointer_;
};

enum class Experiment { kAda, kStdp, kDetect, kSweep };

std::string_view to_string(Experiment experiment);

struct RunConfig {
  Experiment experiment = Experiment::kAda;
  Scenario scenario;
  std::optional<sim::SweepSpec> sweep;  // required iff experiment == kSweep
  std::filesystem::path output_dir = "out";

  bool operator==(const RunConfig&) const = default;
};

/// Parses and fully validates a config document. Omitted keys take the
/// defaults of default_scenario(); unknown keys are rejected.
RunConfig parse_config_text(std::string_view text);

/// Reads `path` and parses it. Throws IoError when unreadable.
RunConfig parse_config(const std::filesystem::path& path);

/// The effective config (every default filled in). Parsing it again yields
/// an equal RunConfig.
std::string effective_config_json(const RunConfig& config);

}  // namespace wsn::cli
