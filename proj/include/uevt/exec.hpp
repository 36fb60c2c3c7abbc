#pragma once

namespace uevt {

// Selects between the OpenMP kernel and its serial reference. Both must
// produce bit-identical output.
enum class Exec { serial, parallel };

}  // namespace uevt
