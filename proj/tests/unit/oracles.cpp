#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

namespace oracle {

namespace {

Matrix pauli(char c) {
  Matrix m = Matrix::Zero(2, 2);
  const std::complex<double> i{0.0, 1.0};
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    case 'Z': m << 1, 0, 0, -1; break;
  }
  return m;
}

}  // namespace

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c) out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

Matrix majorana(int n_gen, int j) {
  const int factors = (n_gen + 1) / 2;
  const int q = (j - 1) / 2;
  const char flip = (j % 2 == 1) ? 'X' : 'Y';
  Matrix out = Matrix::Identity(1, 1);
  for (int f = factors - 1; f >= 0; --f) out = kron(out, pauli(f < q ? 'Z' : f == q ? flip : 'I'));
  return out;
}

Matrix partial_trace_expect(const Matrix& x, int factors, int keep) {
  const Eigen::Index lo = Eigen::Index{1} << keep;
  const Eigen::Index hi = Eigen::Index{1} << (factors - keep);
  Matrix reduced = Matrix::Zero(lo, lo);
  for (Eigen::Index h = 0; h < hi; ++h) reduced += x.block(h * lo, h * lo, lo, lo);
  reduced /= static_cast<double>(hi);
  return kron(Matrix::Identity(hi, hi), reduced);
}

double svd_lp_norm(const Matrix& x, double p) {
  Eigen::JacobiSVD<Matrix> svd(x);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) acc += std::pow(svd.singularValues()(i), p);
  return std::pow(acc / static_cast<double>(x.rows()), 1.0 / p);
}

double sqrt_psd_lp_norm(const Matrix& a, double p) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) acc += std::pow(std::max(es.eigenvalues()(i), 0.0), p / 2.0);
  return std::pow(acc / static_cast<double>(a.rows()), 1.0 / p);
}

double rk4(const std::function<double(double)>& phi, const std::function<double(double)>& rho, double u0, double t,
           int steps) {
  const double h = t / steps;
  double u = u0;
  double s = 0.0;
  auto f = [&](double tt, double uu) { return phi(tt) * rho(uu); };
  for (int i = 0; i < steps; ++i) {
    const double k1 = f(s, u);
    const double k2 = f(s + h / 2, u + h / 2 * k1);
    const double k3 = f(s + h / 2, u + h / 2 * k2);
    const double k4 = f(s + h, u + h * k3);
    u += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
    s += h;
  }
  return u;
}

}  // namespace oracle
