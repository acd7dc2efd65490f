#pragma once

#include <optional>
#include <vector>

#include "rtrace/spec_lang.hpp"

namespace rtrace {

/// The built-in component library, parsed from embedded sources: the Muller
/// C-element, a wire, a fork, an alternating merge, an input-choice select,
/// a two-output arbiter and the delay-sensitive counterexample.
const std::vector<ComponentDef>& builtin_library();

/// Original source text of a built-in component.
std::optional<std::string> builtin_source(const std::string& name);

std::optional<ComponentDef> find_builtin(const std::string& name);

}  // namespace rtrace
