#pragma once

namespace posthoc {

inline constexpr const char* kEngineVersion = "0.1.0";

}  // namespace posthoc
