#pragma once

namespace citefilter {

inline constexpr const char* version = "0.1.0";

}  // namespace citefilter
