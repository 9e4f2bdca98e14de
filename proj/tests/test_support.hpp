#pragma once

#include "vekua/random.hpp"

namespace vekua::testing {
using namespace vekua::rnd;
}  // namespace vekua::testing
