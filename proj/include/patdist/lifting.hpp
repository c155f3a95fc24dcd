#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "patdist/error.hpp"
#include "patdist/ext_float.hpp"
#include "patdist/gf.hpp"
#include "patdist/poly.hpp"
#include "patdist/recursion.hpp"

namespace patdist {

// Coefficients of z^alpha .. z^beta of a series. Windows of the inverse
// series may start below zero; those entries are zero.
template <typename R>
struct Chunk {
  long alpha = 0;
  std::vector<R> coeffs;

  long beta() const { return alpha + static_cast<long>(coeffs.size()) - 1; }
};

// Polynomials in z are coefficient vectors, index = exponent, over any ring
// providing is_zero, zero_like and one_like. A must satisfy A(0) = 1 and the
// nominal degree d bounds deg A and deg B + 1.

namespace lifting_detail {

template <typename R>
const R& at(const std::vector<R>& p, long i, const R& zero) {
  return i >= 0 && i < static_cast<long>(p.size()) ? p[static_cast<std::size_t>(i)] : zero;
}

template <typename R>
const R& at(const Chunk<R>& c, long i, const R& zero) {
  return at(c.coeffs, i - c.alpha, zero);
}

template <typename R>
std::size_t trimmed_size(const std::vector<R>& p) {
  std::size_t n = p.size();
  while (n > 0 && is_zero(p[n - 1])) --n;
  return n;
}

// [X Y]_lo^hi with X and Y given as windows.
template <typename R>
Chunk<R> product(const Chunk<R>& x, const Chunk<R>& y, long lo, long hi, const R& zero) {
  Chunk<R> out{lo, std::vector<R>(static_cast<std::size_t>(std::max(hi - lo + 1, 0L)), zero)};
  for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
    if (is_zero(x.coeffs[i])) continue;
    const long xi = x.alpha + static_cast<long>(i);
    const long from = std::max(lo - xi, y.alpha);
    const long to = std::min(hi - xi, y.beta());
    for (long j = from; j <= to; ++j) {
      out.coeffs[static_cast<std::size_t>(xi + j - lo)] +=
          x.coeffs[i] * y.coeffs[static_cast<std::size_t>(j - y.alpha)];
    }
  }
  return out;
}

template <typename R>
Chunk<R> as_chunk(const std::vector<R>& p) {
  return Chunk<R>{0, p};
}

template <typename R>
Chunk<R> shifted(Chunk<R> c, long by) {
  c.alpha += by;
  return c;
}

// z^(-j) [B - A U]_j^(j+d-1), U = [B/A]_(j-d)^(j-1).
template <typename R>
std::vector<R> residue_from(const std::vector<R>& a, const std::vector<R>& b, long j,
                            const Chunk<R>& u, std::size_t d) {
  const R zero = zero_like(a.front());
  std::vector<R> out;
  out.reserve(d);
  for (long k = j; k < j + static_cast<long>(d); ++k) {
    R v = at(b, k, zero);
    for (long i = 0; i < static_cast<long>(a.size()) && i <= k; ++i) {
      if (is_zero(a[static_cast<std::size_t>(i)])) continue;
      const long idx = k - i;
      if (idx < j - static_cast<long>(d) || idx >= j) continue;
      v -= a[static_cast<std::size_t>(i)] * at(u, idx, zero);
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline unsigned floor_log2(unsigned long x) {
  unsigned e = 0;
  while (x >>= 1) ++e;
  return e;
}

}  // namespace lifting_detail

// Nominal degree max(deg A, deg B + 1, 1).
template <typename R>
std::size_t nominal_degree(const std::vector<R>& a, const std::vector<R>& b) {
  const std::size_t da = lifting_detail::trimmed_size(a);
  const std::size_t db = lifting_detail::trimmed_size(b);
  return std::max<std::size_t>({da == 0 ? 0 : da - 1, db, 1});
}

// First `count` coefficients of 1/A by the reciprocal recurrence.
template <typename R>
std::vector<R> taylor_inverse(const std::vector<R>& a, std::size_t count) {
  if (a.empty() || !(a.front() == one_like(a.front()))) {
    throw InputError("series inversion needs A(0) = 1 (normalize the fraction first)");
  }
  const R zero = zero_like(a.front());
  std::vector<R> s;
  s.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    if (k == 0) {
      s.push_back(one_like(zero));
      continue;
    }
    R v = zero;
    for (std::size_t i = 1; i < a.size() && i <= k; ++i) {
      if (!is_zero(a[i])) v -= a[i] * s[k - i];
    }
    s.push_back(std::move(v));
  }
  return s;
}

// Residue B_j with B/A = sum_{i<j} g_i z^i + z^j B_j / A, from the inverse
// window V = [1/A]_(j-2d+1)^(j-1).
template <typename R>
std::vector<R> residue(const std::vector<R>& a, const std::vector<R>& b, long j, const Chunk<R>& v,
                       std::size_t d) {
  using namespace lifting_detail;
  const R zero = zero_like(a.front());
  if (j == 0) {
    std::vector<R> out(d, zero);
    for (std::size_t i = 0; i < b.size() && i < d; ++i) out[i] = b[i];
    return out;
  }
  if (v.alpha != j - 2 * static_cast<long>(d) + 1 || v.coeffs.size() != 2 * d - 1) {
    throw InputError("residue: inverse window must cover orders j-2d+1 .. j-1");
  }
  const Chunk<R> u = product(v, as_chunk(b), j - static_cast<long>(d), j - 1, zero);
  return residue_from(a, b, j, u, d);
}

// From Gamma_(2^e - d) and V_e = [1/A]_(2^e-2d+1)^(2^e-1), the next rung:
// Gamma_(2^(e+1) - d) and V_(e+1). s holds at least [1/A]_0^(d-1).
template <typename R>
std::pair<std::vector<R>, Chunk<R>> double_order(const std::vector<R>& a, const std::vector<R>& s,
                                                 const Chunk<R>& v, const std::vector<R>& gamma,
                                                 unsigned e, std::size_t d) {
  using namespace lifting_detail;
  const R zero = zero_like(a.front());
  const long ld = static_cast<long>(d);
  const long k = (1L << e) - ld;
  const long next = (1L << (e + 1)) - ld;
  if (v.alpha != (1L << e) - 2 * ld + 1 || v.coeffs.size() != 2 * d - 1 || gamma.size() != d) {
    throw InputError("double_order: window or residue has the wrong shape");
  }
  // Orders next-d .. next-1 of 1/A through Gamma_k / A.
  const Chunk<R> low = shifted(product(as_chunk(gamma), v, (1L << e) - ld, (1L << e) - 1, zero), k);
  std::vector<R> one{one_like(zero)};
  std::vector<R> g = residue_from(a, one, next, low, d);
  const std::vector<R> head(s.begin(), s.begin() + static_cast<long>(d));
  const Chunk<R> high = shifted(product(as_chunk(g), as_chunk(head), 0, ld - 1, zero), next);
  Chunk<R> out{(1L << (e + 1)) - 2 * ld + 1, {}};
  out.coeffs.assign(low.coeffs.begin() + 1, low.coeffs.end());
  out.coeffs.insert(out.coeffs.end(), high.coeffs.begin(), high.coeffs.end());
  return {std::move(g), std::move(out)};
}

template <typename R>
struct HighOrderData {
  std::vector<R> a;  // padded to d + 1 coefficients
  std::size_t d = 0;
  unsigned e0 = 0, e_beta = 0;
  std::size_t delta = 0;
  std::vector<R> s;                   // [1/A]_0^delta
  std::vector<std::vector<R>> gamma;  // gamma[i] = Gamma_(2^(e0+i) - d)

  std::vector<std::size_t> gamma_orders() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < gamma.size(); ++i) out.push_back((std::size_t{1} << (e0 + i)) - d);
    return out;
  }
};

// Precomputation for chunks up to order beta: the inverse to order delta
// and the ladder of residues of 1/A just below powers of two.
template <typename R>
HighOrderData<R> high_order(const std::vector<R>& a, std::size_t alpha, std::size_t beta,
                            std::size_t d_nominal = 0) {
  using namespace lifting_detail;
  if (beta < alpha) throw InputError("high_order: beta below alpha");
  HighOrderData<R> ho;
  const std::size_t da = trimmed_size(a);
  ho.d = std::max<std::size_t>({da == 0 ? 0 : da - 1, d_nominal, 1});
  const R zero = zero_like(a.front());
  ho.a = a;
  ho.a.resize(ho.d + 1, zero);
  const std::size_t d = ho.d;
  ho.e0 = floor_log2(2 * d - 1) + 1;
  ho.e_beta = floor_log2(beta + d);
  ho.delta = std::max<std::size_t>((std::size_t{1} << ho.e0) - 1, beta - alpha);
  ho.s = taylor_inverse(ho.a, ho.delta + 1);
  const long ld = static_cast<long>(d);
  const long xi0 = (1L << ho.e0) - ld;
  const Chunk<R> u0{xi0 - ld, std::vector<R>(ho.s.begin() + (xi0 - ld), ho.s.begin() + xi0)};
  ho.gamma.push_back(residue_from(ho.a, std::vector<R>{one_like(zero)}, xi0, u0, d));
  const long v_lo = (1L << ho.e0) - 2 * ld + 1;
  Chunk<R> v{v_lo, std::vector<R>(ho.s.begin() + v_lo, ho.s.begin() + (1L << ho.e0))};
  for (unsigned e = ho.e0 + 1; e <= ho.e_beta; ++e) {
    auto [g, next] = double_order(ho.a, ho.s, v, ho.gamma.back(), e - 1, d);
    ho.gamma.push_back(std::move(g));
    v = std::move(next);
  }
  return ho;
}

namespace lifting_detail {

template <typename R>
class ChunkEngine {
 public:
  explicit ChunkEngine(const HighOrderData<R>& ho) : ho_(ho), zero_(zero_like(ho.a.front())) {}

  std::vector<R> residue(const std::vector<R>& b, long alpha) const {
    if (alpha == 0) {
      std::vector<R> out(b);
      out.resize(ho_.d, zero_);
      return out;
    }
    const long ld = static_cast<long>(ho_.d);
    const Chunk<R> v = inverse_chunk(alpha - 2 * ld + 1, alpha - 1);
    const Chunk<R> u = product(v, as_chunk(b), alpha - ld, alpha - 1, zero_);
    return residue_from(ho_.a, b, alpha, u, ho_.d);
  }

  Chunk<R> inverse_chunk(long lo, long hi) const {
    const long delta = static_cast<long>(ho_.delta);
    if (hi <= delta) {
      Chunk<R> out{lo, {}};
      for (long i = lo; i <= hi; ++i) out.coeffs.push_back(at(ho_.s, i, zero_));
      return out;
    }
    if (hi - lo > delta) throw InputError("inverse chunk wider than the precomputed expansion");
    return shifted(product(as_chunk(gamma(lo)), as_chunk(ho_.s), 0, hi - lo, zero_), lo);
  }

  std::vector<R> gamma(long alpha) const {
    const long ld = static_cast<long>(ho_.d);
    std::vector<R> one{one_like(zero_)};
    if (alpha == 0) {
      one.resize(ho_.d, zero_);
      return one;
    }
    if (alpha <= static_cast<long>(ho_.delta)) {
      Chunk<R> u{alpha - ld, {}};
      for (long i = alpha - ld; i < alpha; ++i) u.coeffs.push_back(at(ho_.s, i, zero_));
      return residue_from(ho_.a, one, alpha, u, ho_.d);
    }
    const unsigned a = floor_log2(static_cast<unsigned long>(alpha + ld));
    if (a < ho_.e0 || a > ho_.e_beta) {
      throw InputError("order " + std::to_string(alpha) + " is outside the precomputed lifting range");
    }
    const long k = (1L << a) - ld;
    return residue(ho_.gamma[a - ho_.e0], alpha - k);
  }

 private:
  const HighOrderData<R>& ho_;
  R zero_;
};

}  // namespace lifting_detail

// [B/A]_alpha^beta from the high-order data; needs beta - alpha <= delta and
// beta within the ladder.
template <typename R>
Chunk<R> devel_chunk(const HighOrderData<R>& ho, const std::vector<R>& b, std::size_t alpha,
                     std::size_t beta) {
  using namespace lifting_detail;
  if (beta < alpha) throw InputError("devel_chunk: beta below alpha");
  if (trimmed_size(b) > ho.d) throw InputError("devel_chunk: numerator degree must be below d");
  const R zero = zero_like(ho.a.front());
  const long lo = static_cast<long>(alpha), hi = static_cast<long>(beta);
  if (beta <= ho.delta) return product(as_chunk(b), as_chunk(ho.s), lo, hi, zero);
  if (beta - alpha > ho.delta) throw InputError("devel_chunk: chunk wider than the precomputed expansion");
  const ChunkEngine<R> engine(ho);
  const std::vector<R> r = engine.residue(b, lo);
  return shifted(product(as_chunk(r), as_chunk(ho.s), 0, hi - lo, zero), lo);
}

// [B/A]_alpha^beta by powering z modulo the reversed denominator: every
// coefficient at order l >= 0 is the dot product of (z^l mod rev A) with the
// first d Taylor coefficients; clusters advance d orders per product.
template <typename R>
Chunk<R> fiduccia_chunk(const std::vector<R>& a, const std::vector<R>& b, std::size_t alpha,
                        std::size_t beta) {
  if (beta < alpha) throw InputError("fiduccia_chunk: beta below alpha");
  const std::size_t d = nominal_degree(a, b);
  const R zero = zero_like(a.front());
  std::vector<R> ap = a;
  ap.resize(d + 1, zero);
  const std::vector<R> s = taylor_inverse(ap, 2 * d - 1);
  std::vector<R> t(2 * d - 1, zero);
  for (std::size_t i = 0; i < b.size() && i < t.size(); ++i) {
    for (std::size_t j = 0; i + j < t.size(); ++j) t[i + j] += b[i] * s[j];
  }
  // z^d = sum_j red[j] z^j modulo the monic reversed denominator.
  std::vector<R> red(d, zero);
  for (std::size_t j = 0; j < d; ++j) red[j] = -ap[d - j];

  auto reduce = [&](std::vector<R>& p) {
    for (std::size_t k = p.size(); k-- > d;) {
      if (is_zero(p[k])) continue;
      for (std::size_t j = 0; j < d; ++j) p[k - d + j] += p[k] * red[j];
    }
    p.resize(d, zero);
  };
  auto mulmod = [&](const std::vector<R>& x, const std::vector<R>& y) {
    std::vector<R> p(2 * d - 1, zero);
    for (std::size_t i = 0; i < d; ++i) {
      if (is_zero(x[i])) continue;
      for (std::size_t j = 0; j < d; ++j) p[i + j] += x[i] * y[j];
    }
    reduce(p);
    return p;
  };
  auto times_z = [&](std::vector<R>& p) {
    p.insert(p.begin(), zero);
    reduce(p);
  };
  auto power = [&](std::size_t e) {
    std::vector<R> r(d, zero);
    r[0] = one_like(zero);
    for (int bit = 63; bit >= 0; --bit) {
      r = mulmod(r, r);
      if ((e >> bit) & 1U) times_z(r);
    }
    return r;
  };

  Chunk<R> out{static_cast<long>(alpha), {}};
  std::vector<R> r = power(alpha);
  std::vector<R> step(red);
  for (std::size_t base = alpha; base <= beta; base += d) {
    for (std::size_t sft = 0; sft < d && base + sft <= beta; ++sft) {
      R v = zero;
      for (std::size_t i = 0; i < d; ++i) v += r[i] * t[i + sft];
      out.coeffs.push_back(std::move(v));
    }
    if (beta - base >= d) r = mulmod(r, step);
  }
  return out;
}

enum class LiftMethod { kHighOrder, kFiduccia };

// P(N_length = k), k = 0..n, read off the bivariate fraction by lifting in z
// with coefficients in R[y]/(y^(n+1)). Exact mode returns rationals (computed
// over the integers after the substitution z -> c w that clears all
// denominators of A); float mode runs at `precision` bits and is checked
// against a run with 64 extra bits, throwing PrecisionError on disagreement.
struct LiftOptions {
  bool exact = false;
  mpfr_prec_t precision = ExtFloat::kDefaultPrecision;
  LiftMethod method = LiftMethod::kHighOrder;
};

class PrecisionError : public MethodError {
 public:
  explicit PrecisionError(const std::string& what) : MethodError(what) {}
};

CountDistribution bivariate_lift(const BivariateFraction& fraction, std::size_t length,
                                 std::size_t n, const LiftOptions& options = {});

}  // namespace patdist
