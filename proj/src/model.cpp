#include "telegraph/model.hpp"

#include <cmath>
#include <string>

#include "telegraph/errors.hpp"

namespace telegraph {

void ModelParams::validate() const {
  if (!std::isfinite(lambda) || !std::isfinite(mu) || !std::isfinite(alpha) || !std::isfinite(x)) {
    throw DomainError("model parameters must be finite");
  }
  if (!(mu > 0.0)) throw DomainError("mu must be > 0 (got " + std::to_string(mu) + ")");
  if (!(mu < lambda)) {
    throw DomainError("require 0 < mu < lambda (got lambda=" + std::to_string(lambda) +
                      ", mu=" + std::to_string(mu) + ")");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("alpha must lie in (0,1] (got " + std::to_string(alpha) + ")");
  }
  if (!(x >= 0.0)) throw DomainError("initial state x must be >= 0 (got " + std::to_string(x) + ")");
}

MgfDomain MgfDomain::of(const ModelParams& p) {
  p.validate();
  const double d = std::sqrt(p.lambda) - std::sqrt(p.mu);
  return {d * d / 2.0, d * d};
}

}  // namespace telegraph
