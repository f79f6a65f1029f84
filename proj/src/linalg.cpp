#include "nlwe/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <utility>

#include "nlwe/errors.hpp"

namespace nlwe {

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
  if (data_.size() != dim_ * dim_) {
    throw DimensionError("ComplexMatrix: expected " + std::to_string(dim_ * dim_) +
                         " entries, got " + std::to_string(data_.size()));
  }
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
  ComplexMatrix m(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
  return m;
}

ComplexMatrix ComplexMatrix::from_rows(
    std::initializer_list<std::initializer_list<Complex>> rows) {
  const std::size_t n = rows.size();
  std::vector<Complex> flat;
  flat.reserve(n * n);
  for (const auto& row : rows) {
    if (row.size() != n) throw DimensionError("from_rows: matrix is not square");
    flat.insert(flat.end(), row.begin(), row.end());
  }
  return ComplexMatrix(n, std::move(flat));
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
  return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix out(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
  if (other.dim_ != dim_) throw DimensionError("matrix sum: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
  if (other.dim_ != dim_) throw DimensionError("matrix difference: dimension mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scalar) {
  for (auto& x : data_) x *= scalar;
  return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("matrix product: dimension mismatch");
  const std::size_t n = a.dim();
  ComplexMatrix out(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
    }
  return out;
}

double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const auto& x : a.entries()) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionError("max_abs_diff: dimension mismatch");
  double m = 0.0;
  auto ea = a.entries();
  auto eb = b.entries();
  for (std::size_t i = 0; i < ea.size(); ++i) m = std::max(m, std::abs(ea[i] - eb[i]));
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  const std::size_t na = a.dim();
  const std::size_t nb = b.dim();
  ComplexMatrix out(na * nb);
  for (std::size_t i = 0; i < na; ++i)
    for (std::size_t k = 0; k < na; ++k) {
      const Complex aik = a(i, k);
      for (std::size_t j = 0; j < nb; ++j)
        for (std::size_t l = 0; l < nb; ++l) out(i * nb + j, k * nb + l) = aik * b(j, l);
    }
  return out;
}

// ---------------------------------------------------------------------------
// Kets

namespace {

double norm(std::span<const Complex> v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace

Ket::Ket(std::vector<Complex> amplitudes) : amps_(std::move(amplitudes)) {
  if (amps_.empty()) throw DimensionError("Ket: empty amplitude vector");
  if (std::abs(norm(amps_) - 1.0) > 1e-12) {
    throw ContractError("Ket: amplitudes are not unit norm");
  }
}

Ket Ket::normalized(std::vector<Complex> amplitudes) {
  const double n = norm(amplitudes);
  if (n == 0.0) throw ContractError("Ket::normalized: zero vector");
  for (auto& x : amplitudes) x /= n;
  return Ket(std::move(amplitudes));
}

Ket Ket::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw DimensionError("Ket::basis: index out of range");
  std::vector<Complex> v(dim);
  v[index] = 1.0;
  return Ket(std::move(v));
}

Ket kron(const Ket& a, const Ket& b) {
  std::vector<Complex> v;
  v.reserve(a.dim() * b.dim());
  for (const auto& x : a.amplitudes())
    for (const auto& y : b.amplitudes()) v.push_back(x * y);
  return Ket::normalized(std::move(v));
}

Complex inner(const Ket& a, const Ket& b) {
  if (a.dim() != b.dim()) throw DimensionError("inner: dimension mismatch");
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

ComplexMatrix projector(const Ket& k) {
  ComplexMatrix m(k.dim());
  for (std::size_t r = 0; r < k.dim(); ++r)
    for (std::size_t c = 0; c < k.dim(); ++c) m(r, c) = k[r] * std::conj(k[c]);
  return m;
}

// ---------------------------------------------------------------------------
// Hermitian operators

HermitianOperator::HermitianOperator(ComplexMatrix m, Dims dims, double tol)
    : m_(std::move(m)), dims_(dims) {
  if (dims_.total() != m_.dim()) {
    std::ostringstream os;
    os << "HermitianOperator: dims (" << dims_.first << "," << dims_.second
       << ") inconsistent with matrix dimension " << m_.dim();
    throw DimensionError(os.str());
  }
  const ComplexMatrix adj = m_.adjoint();
  const double skew = max_abs_diff(m_, adj);
  if (skew > tol) {
    throw ContractError("HermitianOperator: ||A - A^dagger||_max = " + std::to_string(skew));
  }
  m_ += adj;
  m_ *= 0.5;
}

HermitianOperator& HermitianOperator::operator+=(const HermitianOperator& other) {
  if (!(other.dims_ == dims_)) throw DimensionError("operator sum: dims mismatch");
  m_ += other.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator-=(const HermitianOperator& other) {
  if (!(other.dims_ == dims_)) throw DimensionError("operator difference: dims mismatch");
  m_ -= other.m_;
  return *this;
}

HermitianOperator& HermitianOperator::operator*=(double s) {
  m_ *= s;
  return *this;
}

HermitianOperator identity_operator(Dims dims) {
  return HermitianOperator(ComplexMatrix::identity(dims.total()), dims);
}

HermitianOperator projector_operator(const Ket& k, Dims dims) {
  return HermitianOperator(projector(k), dims);
}

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  return HermitianOperator(kron(a.matrix(), b.matrix()), Dims{a.dim(), b.dim()});
}

HermitianOperator conjugate(const ComplexMatrix& u, const HermitianOperator& a) {
  return HermitianOperator(u * a.matrix() * u.adjoint(), a.dims());
}

ComplexMatrix partial_transpose(const ComplexMatrix& a, Dims dims) {
  if (dims.total() != a.dim()) {
    throw DimensionError("partial_transpose: dims inconsistent with matrix dimension");
  }
  const std::size_t d1 = dims.first;
  const std::size_t d2 = dims.second;
  ComplexMatrix out(a.dim());
  for (std::size_t i = 0; i < d1; ++i)
    for (std::size_t j = 0; j < d2; ++j)
      for (std::size_t k = 0; k < d1; ++k)
        for (std::size_t l = 0; l < d2; ++l)
          out(i * d2 + l, k * d2 + j) = a(i * d2 + j, k * d2 + l);
  return out;
}

HermitianOperator partial_transpose(const HermitianOperator& a) {
  return HermitianOperator(partial_transpose(a.matrix(), a.dims()), a.dims());
}

// ---------------------------------------------------------------------------
// Eigensolver

ComplexMatrix EigenDecomposition::reconstruct() const {
  const std::size_t n = eigenvectors.dim();
  ComplexMatrix out(n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        out(r, c) += eigenvalues[k] * eigenvectors(r, k) * std::conj(eigenvectors(c, k));
  return out;
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c)
      if (r != c) s += std::norm(a(r, c));
  return std::sqrt(s);
}

// One unitary rotation in the (p, q) plane that zeroes a(p, q). With
// a(p, q) = |z| e^{i phi}, U = [[c, s], [-s e^{-i phi}, c e^{-i phi}]]
// restricted to rows/cols p, q; a <- U^dagger a U and v <- v U.
void rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
  const Complex z = a(p, q);
  const double mag = std::abs(z);
  if (mag == 0.0) return;
  const Complex phase = std::conj(z) / mag;  // e^{-i phi}
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Complex u_pp = c;
  const Complex u_pq = s;
  const Complex u_qp = -s * phase;
  const Complex u_qq = c * phase;
  const std::size_t n = a.dim();

  for (std::size_t k = 0; k < n; ++k) {  // a <- a U
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * u_pp + akq * u_qp;
    a(k, q) = akp * u_pq + akq * u_qq;
  }
  for (std::size_t k = 0; k < n; ++k) {  // a <- U^dagger a
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(u_pp) * apk + std::conj(u_qp) * aqk;
    a(q, k) = std::conj(u_pq) * apk + std::conj(u_qq) * aqk;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * u_pp + vkq * u_qp;
    v(k, q) = vkp * u_pq + vkq * u_qq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

EigenDecomposition jacobi(ComplexMatrix a) {
  const std::size_t n = a.dim();
  ComplexMatrix v = ComplexMatrix::identity(n);
  const double scale = std::max(max_abs(a), 1e-300);
  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= 1e-15 * scale) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }
  if (off_diagonal_norm(a) > 1e-12 * scale) {
    throw ContractError("hermitian_eig: Jacobi sweeps did not converge");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return a(x, x).real() > a(y, y).real();
  });

  EigenDecomposition out{std::vector<double>(n), ComplexMatrix(n)};
  for (std::size_t k = 0; k < n; ++k) {
    out.eigenvalues[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < n; ++r) out.eigenvectors(r, k) = v(r, order[k]);
  }
  return out;
}

}  // namespace

EigenDecomposition hermitian_eig(const HermitianOperator& a) { return jacobi(a.matrix()); }

EigenDecomposition hermitian_eig(const ComplexMatrix& a, double tol) {
  const double skew = max_abs_diff(a, a.adjoint());
  if (skew > tol) {
    throw ContractError("hermitian_eig: input is not Hermitian (skew " +
                        std::to_string(skew) + ")");
  }
  ComplexMatrix h = a + a.adjoint();
  h *= 0.5;
  return jacobi(std::move(h));
}

std::vector<SpectralCluster> spectral_clusters(const EigenDecomposition& eig,
                                               double grouping_tol) {
  std::vector<SpectralCluster> clusters;
  const std::size_t n = eig.eigenvalues.size();
  std::size_t start = 0;
  while (start < n) {
    std::size_t end = start + 1;
    while (end < n && eig.eigenvalues[end - 1] - eig.eigenvalues[end] <= grouping_tol) ++end;
    SpectralCluster cl;
    cl.multiplicity = end - start;
    cl.projector = ComplexMatrix(n);
    double sum = 0.0;
    for (std::size_t k = start; k < end; ++k) {
      sum += eig.eigenvalues[k];
      for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < n; ++c)
          cl.projector(r, c) += eig.eigenvectors(r, k) * std::conj(eig.eigenvectors(c, k));
    }
    cl.eigenvalue = sum / static_cast<double>(cl.multiplicity);
    clusters.push_back(std::move(cl));
    start = end;
  }
  return clusters;
}

double min_eigenvalue(const HermitianOperator& a) {
  return hermitian_eig(a).eigenvalues.back();
}

bool is_psd(const HermitianOperator& a, double tol) { return min_eigenvalue(a) >= -tol; }

double trace_norm(const HermitianOperator& a) {
  double s = 0.0;
  for (double x : hermitian_eig(a).eigenvalues) s += std::abs(x);
  return s;
}

std::size_t rank(const HermitianOperator& a, double tol) {
  const auto ev = hermitian_eig(a).eigenvalues;
  return static_cast<std::size_t>(
      std::count_if(ev.begin(), ev.end(), [tol](double x) { return std::abs(x) > tol; }));
}

namespace {

template <typename F>
HermitianOperator spectral_map(const HermitianOperator& a, F f) {
  const auto eig = hermitian_eig(a);
  std::vector<double> mapped(eig.eigenvalues.size());
  std::transform(eig.eigenvalues.begin(), eig.eigenvalues.end(), mapped.begin(), f);
  const EigenDecomposition m{std::move(mapped), eig.eigenvectors};
  return HermitianOperator(m.reconstruct(), a.dims());
}

}  // namespace

HermitianOperator psd_sqrt(const HermitianOperator& a) {
  return spectral_map(a, [](double x) { return x > 0.0 ? std::sqrt(x) : 0.0; });
}

HermitianOperator psd_inverse_sqrt(const HermitianOperator& a, double cutoff) {
  return spectral_map(a, [cutoff](double x) { return x > cutoff ? 1.0 / std::sqrt(x) : 0.0; });
}

HermitianOperator pauli(int k) {
  using namespace std::complex_literals;
  switch (k) {
    case 0:
      return HermitianOperator(ComplexMatrix::identity(2), Dims{2, 1});
    case 1:
      return HermitianOperator(ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}}), Dims{2, 1});
    case 2:
      return HermitianOperator(ComplexMatrix::from_rows({{0.0, -1i}, {1i, 0.0}}), Dims{2, 1});
    default:
      throw DomainError("pauli: index must be 0, 1 or 2, got " + std::to_string(k));
  }
}

}  // namespace nlwe
