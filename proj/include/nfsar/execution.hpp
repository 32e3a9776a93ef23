#pragma once

namespace nfsar {

/// Kernel dispatch: the serial path is the reference the OpenMP path is tested
/// against.
enum class Execution { serial, parallel };

}  // namespace nfsar
