#include "evid/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "evid/error.hpp"

namespace evid {

double Spectrum::norm() const noexcept {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double Spectrum::spread() const noexcept {
  return values.empty() ? 0.0 : values.back() - values.front();
}

namespace {

double conj_of(double x) { return x; }
Complex conj_of(const Complex& z) { return std::conj(z); }
double abs2(double x) { return x * x; }
double abs2(const Complex& z) { return std::norm(z); }

template <class T>
T load(const Complex& z);
template <>
double load<double>(const Complex& z) { return z.real(); }
template <>
Complex load<Complex>(const Complex& z) { return z; }

// Householder reduction of a Hermitian matrix to Hermitian tridiagonal form,
// followed by a diagonal phase similarity that makes the off-diagonal real
// and nonnegative. T is double for real symmetric input, Complex otherwise.
template <class T>
TridiagonalReduction householder_reduce(const HermitianMatrix& m, bool accumulate) {
  const std::size_t n = m.size();
  std::vector<T> a(n * n);
  for (std::size_t i = 0; i < n * n; ++i) a[i] = load<T>(m.entries()[i]);
  auto at = [&](std::size_t i, std::size_t j) -> T& { return a[i * n + j]; };

  std::vector<T> q;
  if (accumulate) {
    q.assign(n * n, T{});
    for (std::size_t i = 0; i < n; ++i) q[i * n + i] = T{1};
  }

  std::vector<Complex> sub(n > 0 ? n - 1 : 0);
  std::vector<T> w(n), p(n);

  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::size_t len = n - k - 1;
    const std::size_t off = k + 1;
    const T x0 = at(off, k);
    double tail2 = 0.0;
    for (std::size_t r = 1; r < len; ++r) tail2 += abs2(at(off + r, k));
    // The last column (or an already-reduced one) needs no reflector.
    if (len == 1 || tail2 == 0.0) {
      sub[k] = Complex(x0);
      continue;
    }
    const double xnorm = std::sqrt(tail2 + abs2(x0));
    const double x0abs = std::abs(x0);
    const T phase = x0abs == 0.0 ? T{1} : x0 / x0abs;
    const T alpha = -phase * xnorm;

    for (std::size_t r = 0; r < len; ++r) w[r] = at(off + r, k);
    w[0] -= alpha;
    double vnorm2 = 0.0;
    for (std::size_t r = 0; r < len; ++r) vnorm2 += abs2(w[r]);
    const double vnorm = std::sqrt(vnorm2);
    for (std::size_t r = 0; r < len; ++r) w[r] /= vnorm;

    // H A H = A - 2 (w q^H + q w^H) with p = A w, K = w^H p, q = p - K w.
    double kappa = 0.0;
    for (std::size_t r = 0; r < len; ++r) {
      T s{};
      for (std::size_t c = 0; c < len; ++c) s += at(off + r, off + c) * w[c];
      p[r] = s;
    }
    for (std::size_t r = 0; r < len; ++r) kappa += std::real(conj_of(w[r]) * p[r]);
    for (std::size_t r = 0; r < len; ++r) p[r] -= kappa * w[r];
    for (std::size_t r = 0; r < len; ++r) {
      for (std::size_t c = 0; c < len; ++c) {
        at(off + r, off + c) -= 2.0 * (w[r] * conj_of(p[c]) + p[r] * conj_of(w[c]));
      }
    }
    at(off, k) = alpha;
    at(k, off) = conj_of(alpha);
    for (std::size_t r = 1; r < len; ++r) {
      at(off + r, k) = T{};
      at(k, off + r) = T{};
    }
    sub[k] = Complex(alpha);

    if (accumulate) {
      for (std::size_t r = 0; r < n; ++r) {
        T s{};
        for (std::size_t c = 0; c < len; ++c) s += q[r * n + off + c] * w[c];
        for (std::size_t c = 0; c < len; ++c) q[r * n + off + c] -= 2.0 * s * conj_of(w[c]);
      }
    }
  }

  TridiagonalReduction out;
  out.tridiagonal.diag.resize(n);
  out.tridiagonal.offdiag.resize(sub.size());
  for (std::size_t i = 0; i < n; ++i) out.tridiagonal.diag[i] = std::real(at(i, i));

  // D = diag(d), d_{k+1} = d_k * sub_k / |sub_k|, gives (D^H T D)_{k+1,k} = |sub_k|.
  std::vector<Complex> d(n, Complex(1.0));
  for (std::size_t k = 0; k < sub.size(); ++k) {
    const double mag = std::abs(sub[k]);
    out.tridiagonal.offdiag[k] = mag;
    d[k + 1] = mag == 0.0 ? d[k] : d[k] * (sub[k] / mag);
  }
  if (accumulate) {
    ComplexMatrix u(n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) u(r, c) = Complex(q[r * n + c]) * d[c];
    }
    out.transform = std::move(u);
  }
  return out;
}

// Implicit-shift QL on a symmetric tridiagonal matrix with Wilkinson-type
// shifts. d holds the diagonal on entry and the eigenvalues on exit; e holds
// the n-1 off-diagonals followed by a trailing slot. When z is non-null its
// columns accumulate the rotations (z is n×n row-major).
void ql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>* z,
                 int sweep_budget) {
  const std::size_t n = d.size();
  if (n == 0) return;
  e.resize(n);
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::size_t l = 0; l < n; ++l) {
    int sweeps = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (sweeps++ == sweep_budget) {
        throw Error(ErrorKind::ConvergenceFailure,
                    "tridiagonal QL exceeded " + std::to_string(sweep_budget) +
                        " sweeps at eigenvalue " + std::to_string(l + 1));
      }
      double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
      double r = std::hypot(g, 1.0);
      g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
      double s = 1.0, c = 1.0, p = 0.0;
      bool underflow = false;
      for (std::size_t i = m; i-- > l;) {
        double f = s * e[i];
        const double b = c * e[i];
        r = std::hypot(f, g);
        e[i + 1] = r;
        if (r == 0.0) {
          d[i + 1] -= p;
          e[m] = 0.0;
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = d[i + 1] - p;
        r = (d[i] - g) * s + 2.0 * c * b;
        p = s * r;
        d[i + 1] = g + p;
        g = c * r - b;
        if (z != nullptr) {
          auto& zz = *z;
          for (std::size_t k = 0; k < n; ++k) {
            f = zz[k * n + i + 1];
            zz[k * n + i + 1] = s * zz[k * n + i] + c * f;
            zz[k * n + i] = c * zz[k * n + i] - s * f;
          }
        }
      }
      if (underflow) continue;
      d[l] -= p;
      e[l] = g;
      e[m] = 0.0;
    } while (m != l);
  }
}

std::vector<std::size_t> ascending_order(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  return order;
}

}  // namespace

TridiagonalReduction tridiagonalize(const HermitianMatrix& a, bool accumulate) {
  return a.is_real() ? householder_reduce<double>(a, accumulate)
                     : householder_reduce<Complex>(a, accumulate);
}

Spectrum tridiagonal_eigenvalues(const Tridiagonal& t, int sweep_budget) {
  std::vector<double> d = t.diag;
  std::vector<double> e = t.offdiag;
  ql_implicit(d, e, nullptr, sweep_budget);
  std::stable_sort(d.begin(), d.end());
  return Spectrum{std::move(d), t.diag.size()};
}

Spectrum eigenvalues(const HermitianMatrix& a, int sweep_budget) {
  return tridiagonal_eigenvalues(tridiagonalize(a, false).tridiagonal, sweep_budget);
}

SpectralDecomposition spectral_decomposition(const HermitianMatrix& a, int sweep_budget) {
  const std::size_t n = a.size();
  auto reduction = tridiagonalize(a, true);
  std::vector<double> d = reduction.tridiagonal.diag;
  std::vector<double> e = reduction.tridiagonal.offdiag;
  std::vector<double> z(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
  ql_implicit(d, e, &z, sweep_budget);

  const auto order = ascending_order(d);
  const ComplexMatrix& u = *reduction.transform;
  SpectralDecomposition out;
  out.spectrum.source_dim = n;
  out.spectrum.values.resize(n);
  out.vectors = ComplexMatrix(n);
  // Eigenvector i of A is U times column order[i] of Z.
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t col = order[i];
    out.spectrum.values[i] = d[col];
    for (std::size_t r = 0; r < n; ++r) {
      Complex s{};
      for (std::size_t c = 0; c < n; ++c) s += u(r, c) * z[c * n + col];
      out.vectors(i, r) = s;
    }
  }
  return out;
}

}  // namespace evid
