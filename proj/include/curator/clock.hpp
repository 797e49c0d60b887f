#pragma once

#include <functional>

#include "curator/domain.hpp"

namespace curator {

using Clock = std::function<Instant()>;

Clock system_clock();

}  // namespace curator
