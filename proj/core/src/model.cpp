#include "sdde/model.hpp"

#include <cmath>

#include "sdde/error.hpp"

namespace sdde {

void SddeModel::validate() const {
  if (dim_state == 0 || dim_noise == 0) throw DomainError("model '" + name + "' has zero dimension");
  if (!drift || !diffusion) throw DomainError("model '" + name + "' needs drift and diffusion");
  if (!(holder.alpha > 0.0)) throw DomainError("model '" + name + "': declared alpha must be > 0");
  if (!(holder.beta > 0.5)) throw DomainError("model '" + name + "': declared beta must be > 1/2");
  if (!(holder.constant > 0.0)) throw DomainError("model '" + name + "': declared C must be > 0");
}

}  // namespace sdde
