#pragma once

namespace treecut {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace treecut
