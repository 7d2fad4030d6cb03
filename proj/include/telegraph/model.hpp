#pragma once

namespace telegraph {

/// Parameters of the telegraph process with an elastic boundary at 0.
///
/// Upward phases last Exp(lambda), downward phases Exp(mu), the motion
/// has unit speed and starts upward from x. Each boundary visit absorbs
/// with probability alpha. The standing assumption 0 < mu < lambda makes
/// every stopping time proper with finite moments.
struct ModelParams {
  double lambda = 2.0;
  double mu = 0.5;
  double alpha = 1.0;
  double x = 0.0;

  /// Throws DomainError unless 0 < mu < lambda, 0 < alpha <= 1, x >= 0
  /// and all fields are finite.
  void validate() const;

  bool pure_absorption() const { return alpha == 1.0; }

  ModelParams with_x(double x_new) const {
    ModelParams p = *this;
    p.x = x_new;
    return p;
  }
  ModelParams with_alpha(double a) const {
    ModelParams p = *this;
    p.alpha = a;
    return p;
  }
};

/// Abscissae of convergence of the moment generating functions.
struct MgfDomain {
  double bound_c;  // C_0, C_x, A_0, A_x
  double bound_t;  // T_x

  static MgfDomain of(const ModelParams& p);
};

}  // namespace telegraph
