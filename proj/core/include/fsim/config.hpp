#pragma once

#include <string>

#include "fsim/presets.hpp"

namespace fsim {

/// Line-oriented "key = value" configuration. A preset supplies the base case;
/// every other key overrides one field. Unknown keys are rejected with the
/// nearest valid key suggested; malformed lines report their line number.
BenchmarkCase parse_config_text(const std::string& text);
BenchmarkCase parse_config(const std::string& path);

} // namespace fsim
