#include <Eigen/Dense>

#include <algorithm>
#include <climits>
#include <cmath>

#include "bratteli/spectra.hpp"

namespace bratteli {

namespace {

// P scaled by a power of two so that its largest entry has magnitude ~1.
Eigen::MatrixXd scaled_double(const IntMatrix& p) {
  long top = LONG_MIN;
  for (std::size_t i = 0; i < p.rows(); ++i)
    for (std::size_t j = 0; j < p.cols(); ++j)
      if (p.at(i, j) != 0) top = std::max(top, static_cast<long>(mpz_sizeinbase(p.at(i, j).get_mpz_t(), 2)));
  Eigen::MatrixXd out(p.rows(), p.cols());
  for (std::size_t i = 0; i < p.rows(); ++i) {
    for (std::size_t j = 0; j < p.cols(); ++j) {
      long exp = 0;
      double mant = mpz_get_d_2exp(&exp, p.at(i, j).get_mpz_t());
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          top == LONG_MIN ? 0.0 : std::ldexp(mant, static_cast<int>(exp - top));
    }
  }
  return out;
}

IntervalVector exact_intervals(const std::vector<double>& v) {
  IntervalVector out;
  for (double x : v) out.emplace_back(Rational(x));
  return out;
}

// Distance from x to the span of the columns of `basis` (least squares).
double distance_to_span(const Eigen::VectorXd& x, const Eigen::MatrixXd& basis) {
  if (basis.cols() == 0) return x.norm();
  Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(x);
  return (basis * coef - x).norm();
}

Eigen::MatrixXd as_columns(const std::vector<std::vector<double>>& vs, std::size_t d) {
  Eigen::MatrixXd m(d, vs.size());
  for (std::size_t j = 0; j < vs.size(); ++j)
    for (std::size_t i = 0; i < d; ++i) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = vs[j][i];
  return m;
}

}  // namespace

SubspaceReport stable_subspaces(const OrderedDiagram& diagram, std::size_t m, std::size_t horizon,
                                double relative_threshold) {
  if (m == 0 || m > horizon || horizon > diagram.depth()) {
    throw Error(ErrorCode::out_of_range, "stable_subspaces needs 1 <= m <= horizon <= depth");
  }
  SubspaceReport out;
  out.m = m;
  out.horizon = horizon;
  out.relative_threshold = relative_threshold;
  const IntMatrix p = diagram.product(m, horizon);
  const std::size_t d = p.cols();

  out.kernel = rational_kernel(p);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(scaled_double(p), Eigen::ComputeFullV);
  Eigen::VectorXd sigma = svd.singularValues();
  const double top = sigma.size() ? sigma(0) : 0.0;
  for (Eigen::Index i = 0; i < sigma.size(); ++i) out.singular_values.push_back(top > 0 ? sigma(i) / top : 0.0);
  const Eigen::MatrixXd& V = svd.matrixV();
  std::vector<std::vector<double>> small;
  for (Eigen::Index j = 0; j < static_cast<Eigen::Index>(d); ++j) {
    const double s = j < sigma.size() ? sigma(j) : 0.0;
    if (s < relative_threshold * top) {
      std::vector<double> col(d);
      for (std::size_t i = 0; i < d; ++i) col[i] = V(static_cast<Eigen::Index>(i), j);
      small.push_back(col);
    }
  }

  // The exact kernel is summable outright; the remaining small singular
  // directions are taken orthogonal to it and tested one by one.
  Eigen::MatrixXd basis(d, 0);
  auto append_orthogonal = [&](Eigen::VectorXd x) -> bool {
    for (Eigen::Index j = 0; j < basis.cols(); ++j) x -= basis.col(j).dot(x) * basis.col(j);
    if (x.norm() < 1e-6) return false;
    x.normalize();
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = x;
    return true;
  };
  for (const auto& z : out.kernel) {
    Eigen::VectorXd x(d);
    for (std::size_t i = 0; i < d; ++i) x(static_cast<Eigen::Index>(i)) = z[i].get_d();
    if (append_orthogonal(x)) {
      std::vector<double> col(basis.col(basis.cols() - 1).data(), basis.col(basis.cols() - 1).data() + d);
      out.stable.push_back(col);
      out.summable.push_back(col);
      out.stable_estimates.push_back(summability(diagram, to_intervals(z), m, horizon));
    }
  }
  for (const auto& v : small) {
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(d));
    if (!append_orthogonal(x)) continue;
    std::vector<double> col(basis.col(basis.cols() - 1).data(), basis.col(basis.cols() - 1).data() + d);
    SummabilityEstimate est = summability(diagram, exact_intervals(col), m, horizon);
    if (est.summable) out.summable.push_back(col);
    out.stable.push_back(col);
    out.stable_estimates.push_back(std::move(est));
  }

  // Containment chain, checked numerically.
  const Eigen::MatrixXd vs = as_columns(small, d);
  const Eigen::MatrixXd v1 = as_columns(out.summable, d);
  bool ok = true;
  for (const auto& z : out.kernel) {
    Eigen::VectorXd x(d);
    for (std::size_t i = 0; i < d; ++i) x(static_cast<Eigen::Index>(i)) = z[i].get_d();
    if (distance_to_span(x, v1) > 1e-8 * std::max(1.0, x.norm())) ok = false;
  }
  for (Eigen::Index j = 0; j < v1.cols(); ++j) {
    if (distance_to_span(v1.col(j), vs) > 1e-8) ok = false;
  }
  out.chain_ok = ok;
  return out;
}

}  // namespace bratteli
