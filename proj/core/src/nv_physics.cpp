#include "spinfridge/nv_physics.hpp"

#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "spinfridge/errors.hpp"

namespace spinfridge {

namespace {

constexpr double kFrameTol = 1e-12;

double dipolar_form(const Vec3& rhat, const Vec3& a, const Vec3& b) { return 3.0 * rhat.dot(a) * rhat.dot(b) - a.dot(b); }

double prefactor(const DipolarPair& pair) {
  pair.validate();
  return pair.j0 / (pair.r * pair.r * pair.r);
}

const Matrix& pauli_of(int axis) {
  static const std::array<Matrix, 3> ops{pauli::x(), pauli::y(), pauli::z()};
  return ops[static_cast<std::size_t>(axis)];
}

Matrix two_site(int n, int i, int j, const Matrix& a, const Matrix& b) {
  return embed_site_operator(a, i, n) * embed_site_operator(b, j, n);
}

Matrix hermitian_exp(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  Vector phase(solver.eigenvalues().size());
  for (Eigen::Index k = 0; k < phase.size(); ++k) phase(k) = std::exp(Complex{0.0, -solver.eigenvalues()(k) * t});
  return solver.eigenvectors() * phase.asDiagonal() * solver.eigenvectors().adjoint();
}

double hermitian_norm(const Matrix& h) { return hermitian_eigenvalues(h).cwiseAbs().maxCoeff(); }

}  // namespace

SpinFrame SpinFrame::from_axis(const Vec3& axis, const Vec3& reference) {
  if (axis.norm() == 0.0) throw DomainError("frame axis must be nonzero");
  SpinFrame f;
  f.z = axis.normalized();
  Vec3 x = reference - reference.dot(f.z) * f.z;
  if (x.norm() < 1e-9) {
    const Vec3 alt = std::abs(f.z.dot(Vec3::UnitY())) < 0.9 ? Vec3::UnitY() : Vec3::UnitZ();
    x = alt - alt.dot(f.z) * f.z;
  }
  f.x = x.normalized();
  f.y = f.z.cross(f.x);
  return f;
}

void SpinFrame::validate() const {
  const double err = std::max({std::abs(x.norm() - 1.0), std::abs(y.norm() - 1.0), std::abs(z.norm() - 1.0),
                               std::abs(x.dot(y)), std::abs(y.dot(z)), std::abs(z.dot(x))});
  if (err > kFrameTol) throw DomainError("spin frame is not orthonormal");
  if (x.cross(y).dot(z) < 0.0) throw DomainError("spin frame is not right-handed");
}

void DipolarPair::validate() const {
  frame1.validate();
  frame2.validate();
  if (std::abs(rhat.norm() - 1.0) > kFrameTol) throw DomainError("separation direction must be a unit vector");
  if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("separation must be positive");
}

DipolarPair DipolarPair::exchanged() const { return {frame2, frame1, -rhat, r, j0}; }

double DipolarCoefficients::flip_flop_magnitude() const { return std::hypot(g_plus, h_minus); }

DipolarCoefficients dipolar_coefficients(const DipolarPair& pair) {
  pair.validate();
  const Vec3& r = pair.rhat;
  const SpinFrame& a = pair.frame1;
  const SpinFrame& b = pair.frame2;
  const double bxx = dipolar_form(r, a.x, b.x);
  const double byy = dipolar_form(r, a.y, b.y);
  const double bxy = dipolar_form(r, a.x, b.y);
  const double byx = dipolar_form(r, a.y, b.x);
  DipolarCoefficients c;
  c.g_plus = 0.5 * (bxx + byy);
  c.g_minus = 0.5 * (bxx - byy);
  c.h_plus = 0.5 * (bxy + byx);
  c.h_minus = 0.5 * (bxy - byx);
  c.q = dipolar_form(r, a.z, b.z);
  return c;
}

NvP1Coupling nv_p1_coupling(const DipolarPair& pair) {
  const double pre = prefactor(pair);
  const DipolarCoefficients c = dipolar_coefficients(pair);
  NvP1Coupling out;
  out.ising_strength = -pre * c.q;
  out.hhcp_flipflop_strength = out.ising_strength / 4.0;
  return out;
}

NvNvHamiltonian nv_nv_effective_hamiltonian(const DipolarPair& pair) {
  const double pre = prefactor(pair);
  const DipolarCoefficients c = dipolar_coefficients(pair);
  NvNvHamiltonian h;
  h.xx_yy_coeff = -pre * 2.0 * c.g_plus;
  h.zz_coeff = -pre * c.q;
  h.xy_antisym_coeff = -pre * 2.0 * c.h_minus;
  h.heisenberg_strength = -pre / 3.0 * (4.0 * c.g_plus + c.q);
  h.heisenberg_strength_invariant = -pre / 3.0 * (4.0 * c.flip_flop_magnitude() + c.q);
  return h;
}

Matrix nv_pair_operator(const NvNvHamiltonian& h) {
  const Matrix x = pauli::x(), y = pauli::y(), z = pauli::z();
  return h.xx_yy_coeff * (kron(x, x) + kron(y, y)) + h.zz_coeff * kron(z, z) +
         h.xy_antisym_coeff * (kron(x, y) - kron(y, x));
}

WahuhaCheck wahuha_average_check(const DipolarPair& pair, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw DomainError("segment time must be positive");
  constexpr int n = 3;
  const std::array<NvNvHamiltonian, 2> bonds{nv_nv_effective_hamiltonian(pair),
                                             nv_nv_effective_hamiltonian(pair.exchanged())};
  const std::array<std::array<int, 3>, 3> cycle{{{0, 1, 2}, {1, 2, 0}, {2, 0, 1}}};

  auto segment = [&](const std::array<int, 3>& axes, double sign) {
    const auto dim = Eigen::Index{1} << n;
    Matrix h = Matrix::Zero(dim, dim);
    for (int b = 0; b < 2; ++b) {
      const NvNvHamiltonian& c = bonds[static_cast<std::size_t>(b)];
      const Matrix& sa = pauli_of(axes[0]);
      const Matrix& sb = pauli_of(axes[1]);
      const Matrix& sc = pauli_of(axes[2]);
      h += c.xx_yy_coeff * (two_site(n, b, b + 1, sa, sa) + two_site(n, b, b + 1, sb, sb));
      h += c.zz_coeff * two_site(n, b, b + 1, sc, sc);
      h += sign * c.xy_antisym_coeff * (two_site(n, b, b + 1, sa, sb) - two_site(n, b, b + 1, sb, sa));
    }
    return h;
  };

  const double period = 3.0 * tau;
  const auto dim = Eigen::Index{1} << n;
  Matrix u = Matrix::Identity(dim, dim);
  double norm = 0.0;
  for (const auto& axes : cycle) {
    for (double sign : {1.0, -1.0}) {
      const Matrix h = segment(axes, sign);
      norm = std::max(norm, hermitian_norm(h));
      u = hermitian_exp(h, 0.5 * tau) * u;
    }
  }

  Matrix h_eff = Matrix::Zero(dim, dim);
  for (int b = 0; b < 2; ++b) {
    for (int a = 0; a < 3; ++a) {
      h_eff += bonds[static_cast<std::size_t>(b)].heisenberg_strength * two_site(n, b, b + 1, pauli_of(a), pauli_of(a));
    }
  }
  norm = std::max(norm, hermitian_norm(h_eff));
  if (norm * period >= std::numbers::pi) {
    throw DomainError("segment time too long: matrix logarithm branch is ambiguous");
  }

  WahuhaCheck out;
  out.cycle_time = period;
  out.trotter_error = operator_norm(u - hermitian_exp(h_eff, period));

  Eigen::ComplexSchur<Matrix> schur(u);
  const Matrix& q = schur.matrixU();
  const Matrix& t = schur.matrixT();
  Vector energy(dim);
  for (Eigen::Index k = 0; k < dim; ++k) energy(k) = -std::arg(t(k, k)) / period;
  Matrix h_avg = q * energy.asDiagonal() * q.adjoint();
  h_avg = 0.5 * (h_avg + h_avg.adjoint()).eval();
  out.average_hamiltonian_error = operator_norm(h_avg - h_eff);

  Matrix residual = Matrix::Zero(dim, dim);
  const std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {1, 2}, {2, 0}}};
  for (int b = 0; b < 2; ++b) {
    for (const auto& p : pairs) {
      const Matrix a = two_site(n, b, b + 1, pauli_of(p[0]), pauli_of(p[1])) -
                       two_site(n, b, b + 1, pauli_of(p[1]), pauli_of(p[0]));
      const double coeff = (a.adjoint() * h_avg).trace().real() / (a.adjoint() * a).trace().real();
      residual += coeff * a;
    }
  }
  out.h_minus_residual = operator_norm(residual);
  return out;
}

ChainYield chain_yield(int n) {
  if (n < 1) throw DomainError("chain length must be >= 1");
  if (n > 1000) throw DomainError("chain length too large");
  // 3 / 2^{n+1} = 3 * 5^{n+1} / 10^{n+1}; digits little-endian
  std::vector<int> digits{3};
  for (int k = 0; k <= n; ++k) {
    int carry = 0;
    for (int& d : digits) {
      const int v = d * 5 + carry;
      d = v % 10;
      carry = v / 10;
    }
    while (carry > 0) {
      digits.push_back(carry % 10);
      carry /= 10;
    }
  }
  const std::size_t places = static_cast<std::size_t>(n) + 1;
  while (digits.size() < places) digits.push_back(0);
  std::string frac;
  for (std::size_t i = places; i-- > 0;) frac.push_back(static_cast<char>('0' + digits[i]));
  std::string whole = "0";
  if (digits.size() > places) {
    whole.clear();
    for (std::size_t i = digits.size(); i-- > places;) whole.push_back(static_cast<char>('0' + digits[i]));
  }
  while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
  ChainYield y;
  y.decimal = whole + "." + frac;
  y.value = 0.75 * std::pow(0.5, n - 1);
  return y;
}

DipolarPair alternating_chain_pair(double r_nm, bool field_gauge) {
  const Vec3 chain = Vec3(-1.0, 1.0, -1.0).normalized();
  const Vec3 ref = field_gauge ? chain : Vec3::UnitX();
  DipolarPair p;
  p.frame1 = SpinFrame::from_axis(Vec3(1.0, 1.0, 1.0), ref);
  p.frame2 = SpinFrame::from_axis(Vec3(1.0, -1.0, -1.0), ref);
  p.rhat = chain;
  p.r = r_nm;
  return p;
}

}  // namespace spinfridge
