#include "patdist/rational.hpp"

#include <algorithm>
#include <cctype>

#include "patdist/error.hpp"

namespace patdist {

namespace {

bool valid_integer(std::string_view s, bool allow_sign) {
  if (!s.empty() && allow_sign && (s.front() == '-' || s.front() == '+')) {
    s.remove_prefix(1);
  }
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c) != 0;
  });
}

}  // namespace

BigRational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  const std::string_view num = text.substr(0, slash);
  const std::string_view den =
      slash == std::string_view::npos ? std::string_view("1")
                                      : text.substr(slash + 1);
  if (!valid_integer(num, true) || !valid_integer(den, false)) {
    throw InputError("malformed rational '" + std::string(text) + "'");
  }
  std::string n(num);
  if (n.front() == '+') n.erase(0, 1);
  BigInt d(std::string(den), 10);
  if (d == 0) {
    throw InputError("zero denominator in '" + std::string(text) + "'");
  }
  BigRational q(BigInt(n, 10), d);
  q.canonicalize();
  return q;
}

std::string to_string(const BigRational& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

std::size_t bit_size(const BigRational& q) {
  return std::max(mpz_sizeinbase(q.get_num_mpz_t(), 2),
                  mpz_sizeinbase(q.get_den_mpz_t(), 2));
}

}  // namespace patdist
