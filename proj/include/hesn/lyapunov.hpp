#pragma once

#include "hesn/galerkin.hpp"
#include "hesn/integrator.hpp"

#include <cstdint>
#include <vector>

namespace hesn {

struct LyapunovOptions {
  double transient = 200.0;   // attractor approach before the perturbation is seeded
  double alignment = 50.0;    // growth discarded while the separation aligns
  double initial_separation = 1e-8;
  IntegratorOptions integrator;
};

struct LyapunovResult {
  double exponent = 0.0;
  bool converged = true;
  // Running estimate after each renormalization past the alignment phase.
  std::vector<double> running;
};

/// Benettin two-trajectory estimate of the leading exponent. The separation
/// norm covers the modal state and the stored flame-velocity history, and
/// both are rescaled at each renormalization.
LyapunovResult lyapunov_leading(const ModelParams& params, double dt, double t_total,
                                double renorm_interval, std::uint64_t seed,
                                const LyapunovOptions& options = {});

}  // namespace hesn
