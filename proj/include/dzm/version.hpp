#pragma once

namespace dzm {
const char* version();
}
