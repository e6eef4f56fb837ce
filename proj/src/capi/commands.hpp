#pragma once

#include "capi/report.hpp"

#include <string>
#include <string_view>

namespace diagarcs {

// command is one of count, predict, compare, vmvt, arcs, weyl, series, sint;
// config is a JSON object of that command's options.
Report run_command(std::string_view command, std::string_view config_json);

}  // namespace diagarcs
