#include "curator/clock.hpp"

namespace curator {

Clock system_clock() {
  return [] { return std::chrono::time_point_cast<std::chrono::milliseconds>(std::chrono::system_clock::now()); };
}

}  // namespace curator
