#pragma once

#include "mwfpi/core_model.hpp"

namespace mwfpi {

/// First and second moments in reduced units (position in sigma_b,
/// wavenumber in 1/sigma_b). Widths are standard deviations.
struct PacketMoments {
  double mean_position = 0;
  double mean_wavenumber = 0;
  double position_width = 0;
  double wavenumber_width = 0;
};

/// psi_0(x) = (2 pi dx^2)^{-1/4} exp(-(x-x0)^2/(4 dx^2) + i k0 (x-x0)), normalized
/// on the grid. Throws PacketTooWide when the packet does not fit.
WaveFunction gaussian_packet(const PacketSpec& spec, const GridPtr& grid);

/// Closed-form |psi~_0(k)|^2 of the packet above.
double gaussian_momentum_density(const PacketSpec& spec, double k);

/// Interference term exp(-2 k0^2 dx^2) between the +k0 and -k0 branches.
double superposition_overlap(double width, double k0);

/// psi ∝ [e^{i k0 x} + e^{-i k0 x}] g(x; width) centered at x = 0, normalized
/// analytically including the cross term. The packet's 3-sigma envelope must
/// stay inside the barrier centers of the cavity.
WaveFunction symmetric_superposition(double width, double k0, const GridPtr& grid, const Cavity& cavity);

PacketMoments moments(const WaveFunction& psi);

}  // namespace mwfpi
