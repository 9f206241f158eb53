#pragma once

#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "spinfridge/linalg.hpp"

namespace spinfridge {

using Vec3 = Eigen::Vector3d;

/// Dipolar constant J0 = 2 pi * 52 MHz nm^3, in rad/s * nm^3.
inline constexpr double kDipolarJ0 = 2.0 * std::numbers::pi * 52.0e6;

/// Quantization frame of one spin.
struct SpinFrame {
  Vec3 x = Vec3::UnitX();
  Vec3 y = Vec3::UnitY();
  Vec3 z = Vec3::UnitZ();

  /// Frame with z along `axis`; x is `reference` projected onto the plane
  /// perpendicular to z (Gram-Schmidt), y = z cross x. The transverse pair is
  /// a gauge choice: g and h mix under rotations about z.
  static SpinFrame from_axis(const Vec3& axis, const Vec3& reference = Vec3::UnitX());

  /// Throws DomainError unless orthonormal (1e-12) and right-handed.
  void validate() const;
};

struct DipolarPair {
  SpinFrame frame1;
  SpinFrame frame2;
  /// Unit vector from spin 1 to spin 2.
  Vec3 rhat = Vec3::UnitZ();
  /// Separation in nm.
  double r = 1.0;
  double j0 = kDipolarJ0;

  void validate() const;
  /// Spin labels exchanged: frames swapped, rhat reversed.
  DipolarPair exchanged() const;
};

struct DipolarCoefficients {
  double g_plus = 0.0;
  double g_minus = 0.0;
  double h_plus = 0.0;
  double h_minus = 0.0;
  double q = 0.0;

  /// |g+ + i h-|, unchanged by rotating either transverse frame about its axis
  /// by the same angle.
  double flip_flop_magnitude() const;
};

/// B(a, b) = 3 (rhat.a)(rhat.b) - a.b combinations g+-, h+-, q.
DipolarCoefficients dipolar_coefficients(const DipolarPair& pair);

/// Angular frequencies (rad/s).
struct NvP1Coupling {
  /// -(J0 / r^3) q
  double ising_strength = 0.0;
  /// ising / 4
  double hhcp_flipflop_strength = 0.0;
};
NvP1Coupling nv_p1_coupling(const DipolarPair& pair);

/// Pseudo-spin-1/2 NV-NV Hamiltonian after the secular approximation, in
/// rad/s: xx_yy (XX + YY) + zz ZZ + xy_antisym (XY - YX).
struct NvNvHamiltonian {
  double xx_yy_coeff = 0.0;
  double zz_coeff = 0.0;
  double xy_antisym_coeff = 0.0;
  /// -(J0 / 3 r^3)(4 g+ + q): isotropic strength after axis cycling.
  double heisenberg_strength = 0.0;
  /// Gauge-invariant variant with |g+ + i h-| in place of g+.
  double heisenberg_strength_invariant = 0.0;
};
NvNvHamiltonian nv_nv_effective_hamiltonian(const DipolarPair& pair);

/// Two-spin operator of the pair Hamiltonian above (4 x 4).
Matrix nv_pair_operator(const NvNvHamiltonian& h);

struct WahuhaCheck {
  /// || U_cycle - exp(-i H_eff T) ||_2 with T = 3 tau.
  double trotter_error = 0.0;
  /// Spectral norm of the antisymmetric bond part of i log(U_cycle) / T.
  double h_minus_residual = 0.0;
  /// Spectral norm of i log(U_cycle) / T - H_eff.
  double average_hamiltonian_error = 0.0;
  double cycle_time = 0.0;
};

/// Three-spin chain with alternating orientation (bond 2 uses the exchanged
/// pair). Each of the three axis-cycled segments lasts tau and is split into
/// two halves with opposite sign of the antisymmetric term (the pi-pulse
/// flip). Throws DomainError when ||H|| * 3 tau >= pi.
WahuhaCheck wahuha_average_check(const DipolarPair& pair, double tau);

/// Probability (3/4)(1/2)^{N-1} of a uniform alternating chain.
struct ChainYield {
  std::string decimal;
  double value = 0.0;
};
ChainYield chain_yield(int n);

/// Chain geometry: field and chain along [-1 1 -1], NV axes [111] and
/// [1 -1 -1], separation r. `field_gauge` fixes the transverse frames by the
/// chain direction (symmetric for all three NV orientations) instead of lab x.
DipolarPair alternating_chain_pair(double r_nm = 25.0, bool field_gauge = true);

/// Rad/s to kHz.
inline double to_khz(double omega) { return omega / (2.0 * std::numbers::pi * 1e3); }

}  // namespace spinfridge
