#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace oscbus::runner {

const std::vector<std::string>& preset_names();

/// Source text of a preset; throws ConfigError for unknown names.
const std::string& preset_text(const std::string& name);

/// The preset as a document whose values carry no line numbers.
Document preset_document(const std::string& name);

}  // namespace oscbus::runner
