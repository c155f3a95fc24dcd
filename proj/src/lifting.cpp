#include "patdist/lifting.hpp"

#include <sstream>

namespace patdist {

namespace {

template <typename R>
R lift_one(const std::vector<R>& a, const std::vector<R>& b, std::size_t t, LiftMethod method) {
  if (method == LiftMethod::kFiduccia) return fiduccia_chunk(a, b, t, t).coeffs.front();
  const HighOrderData<R> ho = high_order(a, t, t, nominal_degree(a, b));
  return devel_chunk(ho, b, t, t).coeffs.front();
}

// Exact [y^k][z^t] B/A, k <= n. With c the lcm of the denominators of the
// z^i coefficients of A (i >= 1), A(y, cw) has integer coefficients and
// constant term 1, so the lifting runs over the integers.
std::vector<BigRational> lift_exact(const BivariateFraction& f, std::size_t t, std::size_t n,
                                    LiftMethod method) {
  BigInt c = 1;
  for (std::size_t i = 1; i < f.denominator.size(); ++i) {
    for (std::size_t k = 0; k < f.denominator[i].size() && k <= n; ++k) {
      mpz_lcm(c.get_mpz_t(), c.get_mpz_t(), f.denominator[i][k].get_den_mpz_t());
    }
  }
  const std::size_t top = std::max(f.denominator.size(), f.numerator.size());
  std::vector<BigInt> cpow(top + 1, BigInt(1));
  for (std::size_t i = 1; i <= top; ++i) cpow[i] = cpow[i - 1] * c;

  const BigInt zero(0);
  std::vector<TruncPoly<BigInt>> a, b;
  for (std::size_t i = 0; i < f.denominator.size(); ++i) {
    TruncPoly<BigInt> p(n, zero);
    for (std::size_t k = 0; k < f.denominator[i].size() && k <= n; ++k) {
      const BigRational q = f.denominator[i][k] * BigRational(cpow[i]);
      if (q.get_den() != 1) throw InternalError("denominator scaling left a fraction");
      p[k] = q.get_num();
    }
    a.push_back(std::move(p));
  }
  BigInt scale = 1;
  std::vector<std::vector<BigRational>> bs(f.numerator.size());
  for (std::size_t i = 0; i < f.numerator.size(); ++i) {
    for (std::size_t k = 0; k < f.numerator[i].size() && k <= n; ++k) {
      bs[i].push_back(f.numerator[i][k] * BigRational(cpow[i]));
      mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), bs[i].back().get_den_mpz_t());
    }
  }
  for (const auto& row : bs) {
    TruncPoly<BigInt> p(n, zero);
    for (std::size_t k = 0; k < row.size(); ++k) {
      const BigRational q = row[k] * BigRational(scale);
      p[k] = q.get_num();
    }
    b.push_back(std::move(p));
  }
  const TruncPoly<BigInt> g = lift_one(a, b, t, method);
  BigInt den;
  mpz_pow_ui(den.get_mpz_t(), c.get_mpz_t(), t);
  den *= scale;
  std::vector<BigRational> out;
  for (std::size_t k = 0; k <= n; ++k) {
    BigRational q(g[k], den);
    q.canonicalize();
    out.push_back(std::move(q));
  }
  return out;
}

std::vector<ExtFloat> lift_float(const BivariateFraction& f, std::size_t t, std::size_t n,
                                 LiftMethod method, mpfr_prec_t prec) {
  const ExtFloat zero(prec);
  auto convert = [&](const std::vector<std::vector<BigRational>>& side) {
    std::vector<TruncPoly<ExtFloat>> out;
    for (const auto& row : side) {
      TruncPoly<ExtFloat> p(n, zero);
      for (std::size_t k = 0; k < row.size() && k <= n; ++k) p[k] = ExtFloat(row[k], prec);
      out.push_back(std::move(p));
    }
    return out;
  };
  return lift_one(convert(f.denominator), convert(f.numerator), t, method).coeffs();
}

std::string method_name(LiftMethod m) { return m == LiftMethod::kFiduccia ? "fiduccia" : "lifting"; }

}  // namespace

CountDistribution bivariate_lift(const BivariateFraction& fraction, std::size_t length,
                                 std::size_t n, const LiftOptions& options) {
  if (length < fraction.order) {
    throw InputError("sequence length " + std::to_string(length) + " is below the model order " +
                     std::to_string(fraction.order));
  }
  if (fraction.denominator.empty()) throw InputError("fraction has no denominator");
  const std::size_t t = length - fraction.order;
  CountDistribution d;
  d.length = length;
  d.metadata["fraction_degrees"] = std::to_string(fraction.numerator_degree()) + "/" +
                                   std::to_string(fraction.denominator_degree());
  if (options.exact) {
    d.method = method_name(options.method) + "-exact";
    auto exact = lift_exact(fraction, t, n, options.method);
    for (const auto& q : exact) d.values.emplace_back(q, options.precision);
    d.exact = std::move(exact);
    return d;
  }
  d.method = method_name(options.method);
  d.values = lift_float(fraction, t, n, options.method, options.precision);
  const auto check = lift_float(fraction, t, n, options.method, options.precision + 64);
  ExtFloat largest(options.precision);
  for (const auto& v : check) {
    if (abs(v) > largest) largest = abs(v);
  }
  ExtFloat tol = ExtFloat::from_long(1, options.precision);
  mpfr_mul_2si(tol.get(), tol.get(), -static_cast<long>(options.precision / 4), MPFR_RNDN);
  ExtFloat floor = largest;
  mpfr_mul_2si(floor.get(), floor.get(), -static_cast<long>(options.precision / 2), MPFR_RNDN);
  for (std::size_t k = 0; k < check.size(); ++k) {
    if (abs(d.values[k]) <= floor && abs(check[k]) <= floor) continue;
    if (relative_difference(d.values[k], check[k]) > tol) {
      std::ostringstream msg;
      msg << "floating-point lifting lost accuracy at k = " << k << " (" << d.values[k].to_string(6)
          << " vs " << check[k].to_string(6) << " with 64 more bits); use exact mode or raise "
          << "--precision-bits";
      throw PrecisionError(msg.str());
    }
  }
  return d;
}

}  // namespace patdist
