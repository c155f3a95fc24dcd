#include "patdist/recursion.hpp"

#include <algorithm>
#include <sstream>

#include "patdist/error.hpp"

namespace patdist {

namespace {

inline void muladd(ExtFloat& acc, const ExtFloat& a, const ExtFloat& b) { acc.add_mul(a, b); }
inline void muladd(BigRational& acc, const BigRational& a, const BigRational& b) { acc += a * b; }
inline void clear(ExtFloat& x) { x.set_zero(); }
inline void clear(BigRational& x) { x = 0; }

// out += M x
template <typename T>
void add_product(std::vector<T>& out, const SparseMatrix<T>& m, const std::vector<T>& x) {
  for (std::size_t p = 0; p < m.dim; ++p) {
    for (auto e = m.row_start[p]; e < m.row_start[p + 1]; ++e) muladd(out[p], m.val[e], x[m.col[e]]);
  }
}

// One step of the y-graded recursion on columns 0..top:
//   V_k <- P V_k + Q V_{k-1} (- V_k when differencing).
template <typename T>
void graded_step(std::vector<std::vector<T>>& v, std::vector<T>& scratch, const SparseMatrix<T>& p,
                 const SparseMatrix<T>& q, std::size_t top, bool difference) {
  for (std::size_t k = top + 1; k-- > 0;) {
    for (auto& x : scratch) clear(x);
    add_product(scratch, p, v[k]);
    if (k > 0) add_product(scratch, q, v[k - 1]);
    if (difference) {
      for (std::size_t s = 0; s < scratch.size(); ++s) scratch[s] -= v[k][s];
    }
    std::swap(v[k], scratch);
  }
}

template <typename T>
T dot(const std::vector<T>& u, const std::vector<T>& x, const T& zero) {
  T acc = zero;
  for (std::size_t p = 0; p < u.size(); ++p) {
    if (!is_zero(u[p])) muladd(acc, u[p], x[p]);
  }
  return acc;
}

template <typename T>
std::vector<T> run_full(const std::vector<T>& u, const SparseMatrix<T>& p, const SparseMatrix<T>& q,
                        std::size_t steps, std::size_t nmax, const T& zero, const T& one) {
  const std::size_t n = u.size();
  std::vector<std::vector<T>> v(nmax + 1, std::vector<T>(n, zero));
  std::fill(v[0].begin(), v[0].end(), one);
  std::vector<T> scratch(n, zero);
  for (std::size_t i = 1; i <= steps; ++i) graded_step(v, scratch, p, q, std::min(i, nmax), false);
  std::vector<T> out;
  for (std::size_t k = 0; k <= nmax; ++k) out.push_back(dot(u, v[k], zero));
  return out;
}

std::size_t steps_for(const EmbeddedChain& chain, std::size_t length) {
  if (length < chain.order) {
    throw InputError("sequence length " + std::to_string(length) + " is below the model order " +
                     std::to_string(chain.order));
  }
  return length - chain.order;
}

std::string short_float(const ExtFloat& x) { return x.to_string(6); }

}  // namespace

CountDistribution full_distribution(const EmbeddedChain& chain, std::size_t length,
                                    std::size_t nmax, bool exact, mpfr_prec_t precision) {
  const std::size_t steps = steps_for(chain, length);
  CountDistribution d;
  d.length = length;
  if (exact) {
    d.method = "full-exact";
    auto r = run_full(chain.u, chain.P, chain.Q, steps, nmax, BigRational(0), BigRational(1));
    for (const auto& x : r) d.values.emplace_back(x, precision);
    d.exact = std::move(r);
  } else {
    d.method = "full";
    ChainView<ExtFloat> f = to_float(chain, precision);
    d.values = run_full(f.u, f.P, f.Q, steps, nmax, ExtFloat(precision),
                        ExtFloat::from_long(1, precision));
  }
  return d;
}

SpectralData dominant_eigenvalue(const SparseMatrix<ExtFloat>& P, const ExtFloat& eps,
                                 std::size_t max_iterations) {
  const std::size_t n = P.dim;
  if (n == 0) throw SpectralError("empty matrix");
  const mpfr_prec_t prec = eps.precision();
  std::vector<ExtFloat> x(n, ExtFloat::from_long(1, prec)), y(n, ExtFloat(prec));
  ExtFloat lo(prec), hi(prec), ratio(prec);
  for (std::size_t it = 1; it <= max_iterations; ++it) {
    for (auto& e : y) e.set_zero();
    add_product(y, P, x);
    bool any = false;
    ExtFloat top(prec);
    for (std::size_t p = 0; p < n; ++p) {
      if (y[p].sign() > 0 && y[p] > top) top = y[p];
      if (x[p].is_zero()) continue;
      ratio = y[p];
      ratio /= x[p];
      if (!any || ratio < lo) lo = ratio;
      if (!any || ratio > hi) hi = ratio;
      any = true;
    }
    if (top.is_zero()) {
      throw SpectralError(
          "the non-final transition matrix is nilpotent on its support (dominant eigenvalue 0); "
          "use --method full");
    }
    ExtFloat spread = hi - lo;
    if (spread <= eps * hi) {
      SpectralData out{(hi + lo) / ExtFloat::from_long(2, prec), it, spread, {}};
      for (auto& e : y) e /= top;
      out.vector = std::move(y);
      return out;
    }
    for (auto& e : y) e /= top;
    std::swap(x, y);
  }
  throw SpectralError("power method did not converge in " + std::to_string(max_iterations) +
                      " iterations (reducible or periodic chain?); use --method full");
}

CountDistribution partial_distribution(const EmbeddedChain& chain, std::size_t length,
                                       std::size_t n, const PartialOptions& options) {
  const std::size_t steps = steps_for(chain, length);
  const mpfr_prec_t prec = options.precision;
  ChainView<ExtFloat> f = to_float(chain, prec);

  SpectralData spectral;
  if (options.spectral) {
    spectral = *options.spectral;
  } else {
    ExtFloat eps = ExtFloat::from_long(1, prec);
    mpfr_mul_2si(eps.get(), eps.get(), options.eps_log2, MPFR_RNDN);
    spectral = dominant_eigenvalue(f.P, eps);
  }
  const ExtFloat& lambda = spectral.lambda;
  if (lambda.sign() <= 0) throw SpectralError("dominant eigenvalue is not positive");
  auto scaled = [&](const ExtFloat& x) { return x / lambda; };
  const SparseMatrix<ExtFloat> pn = f.P.map(scaled);
  const SparseMatrix<ExtFloat> qn = f.Q.map(scaled);

  const std::size_t dim = chain.size();
  const ExtFloat zero(prec), one = ExtFloat::from_long(1, prec);
  const ExtFloat eta = ExtFloat::from_double(options.eta, prec);
  std::vector<std::size_t> support;
  for (std::size_t p = 0; p < dim; ++p) {
    if (chain.u[p] != 0) support.push_back(p);
  }

  std::vector<std::vector<ExtFloat>> delta(n + 1, std::vector<ExtFloat>(dim, zero));
  std::fill(delta[0].begin(), delta[0].end(), one);
  std::vector<ExtFloat> scratch(dim, zero);

  // Warm-up: delta_k becomes the i-th difference at rank i, for i = 1..n.
  for (std::size_t i = 1; i <= n && i <= steps; ++i) graded_step(delta, scratch, pn, qn, i, true);

  // Iterate the n-th differences until delta_n settles.
  std::size_t alpha = n;
  bool converged = false;
  std::vector<ExtFloat> previous(support.size(), zero);
  while (alpha < steps) {
    for (std::size_t s = 0; s < support.size(); ++s) previous[s] = delta[n][support[s]];
    graded_step(delta, scratch, pn, qn, n, false);
    ++alpha;
    converged = true;
    for (std::size_t s = 0; s < support.size() && converged; ++s) {
      const ExtFloat& now = delta[n][support[s]];
      if (now.is_zero() || abs(now - previous[s]) > eta * abs(now)) converged = false;
    }
    if (converged) break;
  }
  if (!converged) {
    CountDistribution d = full_distribution(chain, length, n, false, prec);
    d.metadata["fallback"] = "full recursion (differences did not settle before the length)";
    return d;
  }

  // Closed-form extrapolation from rank alpha - n:
  //   R_k = lambda^L sum_{j<=k} binom(L - a, j) u.D_k^j(a + j),  a = alpha - n.
  const std::size_t base = alpha - n;
  for (auto& col : delta) std::fill(col.begin(), col.end(), zero);
  std::fill(delta[0].begin(), delta[0].end(), one);
  for (std::size_t i = 1; i <= base; ++i) graded_step(delta, scratch, pn, qn, std::min(i, n), false);
  std::vector<ExtFloat> r;
  for (std::size_t k = 0; k <= n; ++k) r.push_back(dot(f.u, delta[k], zero));
  ExtFloat binom = one;
  const BigInt span = BigInt(static_cast<unsigned long>(steps - base));
  for (std::size_t j = 1; j <= n; ++j) {
    graded_step(delta, scratch, pn, qn, n, true);
    BigInt factor = span - static_cast<unsigned long>(j - 1);
    binom *= ExtFloat(BigRational(factor), prec);
    binom /= static_cast<unsigned long>(j);
    for (std::size_t k = j; k <= n; ++k) r[k].add_mul(binom, dot(f.u, delta[k], zero));
  }
  const ExtFloat scale = pow(lambda, BigInt(static_cast<unsigned long>(steps)));
  for (auto& x : r) x *= scale;

  CountDistribution d;
  d.length = length;
  d.method = "partial";
  d.values = std::move(r);
  d.metadata["alpha"] = std::to_string(alpha);
  d.metadata["one_minus_lambda"] = short_float(one - lambda);
  d.metadata["power_iterations"] = std::to_string(spectral.iterations);
  {
    std::ostringstream o;
    o << options.eta;
    d.metadata["eta"] = o.str();
  }
  return d;
}

}  // namespace patdist
