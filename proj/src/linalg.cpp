#include "nvsync/linalg.hpp"

#include <cmath>

namespace nvsync {

double wrap_phase(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

MatX kron(const MatX& a, const MatX& b) {
  MatX out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

double unitarity_error(const MatX& u) {
  return (u.adjoint() * u - MatX::Identity(u.cols(), u.cols())).norm();
}

double phase_aligned_distance(const MatX& a, const MatX& b) {
  const cplx ov = (b.adjoint() * a).trace();
  const cplx ph = std::abs(ov) > 0 ? ov / std::abs(ov) : cplx{1.0, 0.0};
  return (a - ph * b).norm();
}

Mat2 expm_herm2(const Mat2& h, double t) {
  // h = h0 + hx X + hy Y + hz Z with Pauli matrices
  const double h0 = 0.5 * (h(0, 0).real() + h(1, 1).real());
  const double hz = 0.5 * (h(0, 0).real() - h(1, 1).real());
  const double hx = 0.5 * (h(0, 1).real() + h(1, 0).real());
  const double hy = 0.5 * (h(1, 0).imag() - h(0, 1).imag());
  const double r = std::sqrt(hx * hx + hy * hy + hz * hz);
  const double c = std::cos(r * t);
  // sin(r t)/r, stable for r -> 0
  const double s = std::abs(r * t) > 1e-8 ? std::sin(r * t) / r : t * (1.0 - (r * t) * (r * t) / 6.0);
  Mat2 u;
  u(0, 0) = cplx{c, -s * hz};
  u(1, 1) = cplx{c, s * hz};
  u(0, 1) = -kI * s * cplx{hx, -hy};
  u(1, 0) = -kI * s * cplx{hx, hy};
  return std::exp(cplx{0.0, -h0 * t}) * u;
}

MatX expm_herm(const MatX& h, double t) {
  Eigen::SelfAdjointEigenSolver<MatX> es(0.5 * (h + h.adjoint()));
  const Eigen::VectorXd& ev = es.eigenvalues();
  Eigen::VectorXcd ph(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i) ph(i) = std::exp(cplx{0.0, -ev(i) * t});
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

Mat2 rot_z(double theta) {
  Mat2 u = Mat2::Zero();
  u(0, 0) = std::exp(cplx{0.0, -theta / 2});
  u(1, 1) = std::exp(cplx{0.0, theta / 2});
  return u;
}

Mat2 rot_x(double theta) { return rot_phi(theta, 0.0); }

Mat2 rot_phi(double theta, double phi) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  Mat2 u;
  u(0, 0) = c;
  u(1, 1) = c;
  u(0, 1) = -kI * s * std::exp(cplx{0.0, -phi});
  u(1, 0) = -kI * s * std::exp(cplx{0.0, phi});
  return u;
}

}  // namespace nvsync
