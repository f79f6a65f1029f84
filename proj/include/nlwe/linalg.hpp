#pragma once

// Dense complex linear algebra for small bipartite Hilbert spaces.
//
// Everything here is a value type; all functions are pure. Matrices are
// stored row-major and the product basis is lexicographic, so |i>|j> on a
// d1 x d2 system sits at index i * d2 + j.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace nlwe {

using Complex = std::complex<double>;

/// Absolute tolerance for hermiticity, positivity and eigen residuals.
inline constexpr double kDefaultTol = 1e-9;
/// Eigenvalues closer than this are treated as one degenerate cluster.
inline constexpr double kClusterTol = 1e-8;

class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  explicit ComplexMatrix(std::size_t dim);
  ComplexMatrix(std::size_t dim, std::vector<Complex> entries);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const double> values);
  static ComplexMatrix from_rows(
      std::initializer_list<std::initializer_list<Complex>> rows);

  std::size_t dim() const { return dim_; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const {
    return data_[r * dim_ + c];
  }
  std::span<const Complex> entries() const { return data_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  Complex trace() const;

  ComplexMatrix& operator+=(const ComplexMatrix& other);
  ComplexMatrix& operator-=(const ComplexMatrix& other);
  ComplexMatrix& operator*=(Complex scalar);

  friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
  friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
  friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
  friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
  friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

 private:
  std::size_t dim_ = 0;
  std::vector<Complex> data_;
};

/// Largest absolute entry.
double max_abs(const ComplexMatrix& a);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product in the lexicographic basis.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// State vector. Constructing one checks unit norm to 1e-12.
class Ket {
 public:
  explicit Ket(std::vector<Complex> amplitudes);
  /// Rescales to unit norm; throws on the zero vector.
  static Ket normalized(std::vector<Complex> amplitudes);
  /// Computational basis vector |index> in dimension dim.
  static Ket basis(std::size_t dim, std::size_t index);

  std::size_t dim() const { return amps_.size(); }
  std::span<const Complex> amplitudes() const { return amps_; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }

 private:
  std::vector<Complex> amps_;
};

Ket kron(const Ket& a, const Ket& b);
/// <a|b>
Complex inner(const Ket& a, const Ket& b);
/// |k><k|
ComplexMatrix projector(const Ket& k);

/// Subsystem dimensions (d1, d2) of a bipartite operator.
struct Dims {
  std::size_t first = 0;
  std::size_t second = 0;
  std::size_t total() const { return first * second; }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Square matrix that is Hermitian to within kDefaultTol, tagged with its
/// bipartite split. Construction stores the exact Hermitian part.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  HermitianOperator(ComplexMatrix m, Dims dims, double tol = kDefaultTol);

  const ComplexMatrix& matrix() const { return m_; }
  Dims dims() const { return dims_; }
  std::size_t dim() const { return m_.dim(); }
  double trace() const { return m_.trace().real(); }
  Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

  HermitianOperator& operator+=(const HermitianOperator& other);
  HermitianOperator& operator-=(const HermitianOperator& other);
  HermitianOperator& operator*=(double s);

  friend HermitianOperator operator+(HermitianOperator a, const HermitianOperator& b) {
    return a += b;
  }
  friend HermitianOperator operator-(HermitianOperator a, const HermitianOperator& b) {
    return a -= b;
  }
  friend HermitianOperator operator*(HermitianOperator a, double s) { return a *= s; }
  friend HermitianOperator operator*(double s, HermitianOperator a) { return a *= s; }

 private:
  ComplexMatrix m_;
  Dims dims_;
};

/// Identity on a d1 x d2 system.
HermitianOperator identity_operator(Dims dims);
/// |k><k| with the given split; k.dim() must equal dims.total().
HermitianOperator projector_operator(const Ket& k, Dims dims);
/// a (x) b with dims (a.dim, b.dim).
HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b);
/// U A U^dagger, keeping A's dims.
HermitianOperator conjugate(const ComplexMatrix& u, const HermitianOperator& a);

/// Transpose on the second tensor factor: ((i,j),(k,l)) -> ((i,l),(k,j)).
ComplexMatrix partial_transpose(const ComplexMatrix& a, Dims dims);
HermitianOperator partial_transpose(const HermitianOperator& a);

struct EigenDecomposition {
  std::vector<double> eigenvalues;  // descending
  ComplexMatrix eigenvectors;       // column k pairs with eigenvalues[k]

  /// Sum_k lambda_k v_k v_k^dagger.
  ComplexMatrix reconstruct() const;
};

/// Cyclic complex Jacobi. Ties in the sorted spectrum keep the order in
/// which the diagonal came out of the sweep, so output is deterministic.
EigenDecomposition hermitian_eig(const HermitianOperator& a);
/// Same, for a bare matrix; throws ContractError if it is not Hermitian.
EigenDecomposition hermitian_eig(const ComplexMatrix& a, double tol = kDefaultTol);

struct SpectralCluster {
  double eigenvalue = 0.0;  // cluster mean
  std::size_t multiplicity = 0;
  ComplexMatrix projector;
};

/// Groups eigenvalues whose neighbours differ by at most `grouping_tol`.
/// Individual eigenvectors inside a cluster are not stable; the projectors are.
std::vector<SpectralCluster> spectral_clusters(const EigenDecomposition& eig,
                                               double grouping_tol = kClusterTol);

double min_eigenvalue(const HermitianOperator& a);
bool is_psd(const HermitianOperator& a, double tol = kDefaultTol);
double trace_norm(const HermitianOperator& a);
/// Number of eigenvalues with |lambda| > tol.
std::size_t rank(const HermitianOperator& a, double tol = kClusterTol);

/// f(A) for PSD A via its spectrum; eigenvalues below `cutoff` map to zero.
HermitianOperator psd_sqrt(const HermitianOperator& a);
HermitianOperator psd_inverse_sqrt(const HermitianOperator& a, double cutoff = 1e-14);

/// sigma_0 = I, sigma_1 = X, sigma_2 = Y, as 2x2 operators with dims (2, 1).
HermitianOperator pauli(int k);

}  // namespace nlwe
