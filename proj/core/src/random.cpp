#include "sailhelm/random.hpp"

#include "sailhelm/errors.hpp"

namespace sailhelm {

double ScriptedUniform::uniform01() {
  if (draws_.empty()) throw UsageError("scripted random source exhausted");
  const double u = draws_.front();
  draws_.pop_front();
  return u;
}

}  // namespace sailhelm
