#include "dzm/version.hpp"

namespace dzm {
const char* version() { return DZM_VERSION; }
}  // namespace dzm
