#pragma once

#include <complex>
#include <numbers>

#include <Eigen/Dense>

namespace nvsync {

using cplx = std::complex<double>;
inline constexpr cplx kI{0.0, 1.0};
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Mat2 = Eigen::Matrix<cplx, 2, 2>;
using Mat3 = Eigen::Matrix<cplx, 3, 3>;
using Mat4 = Eigen::Matrix<cplx, 4, 4>;
using Mat6 = Eigen::Matrix<cplx, 6, 6>;
using MatX = Eigen::MatrixXcd;

// Hz <-> rad/s at the API boundary
inline constexpr double from_hz(double f) { return kTwoPi * f; }
inline constexpr double to_hz(double w) { return w / kTwoPi; }

double wrap_phase(double phi);  // into [0, 2pi)

MatX kron(const MatX& a, const MatX& b);

// ||U^dag U - 1||_F
double unitarity_error(const MatX& u);

// min over theta of ||a - e^{i theta} b||_F
double phase_aligned_distance(const MatX& a, const MatX& b);

// exp(-i t h) for 2x2 Hermitian h, closed form
Mat2 expm_herm2(const Mat2& h, double t);

// exp(-i t h) for Hermitian h of any size (eigendecomposition)
MatX expm_herm(const MatX& h, double t);

// Rz(theta) = exp(-i theta Iz), Rx(theta) = exp(-i theta Ix),
// Rphi(theta, phi) = exp(-i theta (cos phi Ix + sin phi Iy))
Mat2 rot_z(double theta);
Mat2 rot_x(double theta);
Mat2 rot_phi(double theta, double phi);

}  // namespace nvsync
