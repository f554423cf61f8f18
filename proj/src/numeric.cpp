#include "sumprod/numeric.hpp"

#include <cstdarg>
#include <cstdio>

#include <mpfr.h>

#include <map>
#include <vector>

namespace sumprod {

namespace {

constexpr long kStartPrecision = 64;
constexpr long kMaxPrecision = 1L << 16;
constexpr long kDecimalPrecision = 256;

class Mpfr {
 public:
  explicit Mpfr(long precision) { mpfr_init2(value_, precision); }
  ~Mpfr() { mpfr_clear(value_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() noexcept { return value_; }
  mpfr_srcptr get() const noexcept { return value_; }

 private:
  mpfr_t value_;
};

std::string render(mpfr_srcptr x, int digits) {
  char* buffer = nullptr;
  if (mpfr_asprintf(&buffer, "%.*Rg", digits, x) < 0) return "nan";
  std::string out(buffer);
  mpfr_free_str(buffer);
  return out;
}

bool is_power_of_two(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

}  // namespace

bool times_log2_at_least(const BigInt& coeff, std::uint64_t n, const BigInt& rhs) {
  if (n == 0) throw Error(ErrorCode::BadParams, "log2 of 0");
  if (is_power_of_two(n)) {
    const auto exponent = static_cast<unsigned long>(__builtin_ctzll(n));
    return BigInt(coeff * exponent) >= rhs;
  }
  for (long prec = kStartPrecision; prec <= kMaxPrecision; prec *= 2) {
    Mpfr lo(prec), hi(prec);
    mpfr_set_ui(lo.get(), n, MPFR_RNDD);
    mpfr_log2(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_set_ui(hi.get(), n, MPFR_RNDU);
    mpfr_log2(hi.get(), hi.get(), MPFR_RNDU);
    // coeff may be negative; pick the matching end points.
    if (sgn(coeff) >= 0) {
      mpfr_mul_z(lo.get(), lo.get(), coeff.get_mpz_t(), MPFR_RNDD);
      mpfr_mul_z(hi.get(), hi.get(), coeff.get_mpz_t(), MPFR_RNDU);
    } else {
      Mpfr tmp(prec);
      mpfr_mul_z(tmp.get(), hi.get(), coeff.get_mpz_t(), MPFR_RNDD);
      mpfr_mul_z(hi.get(), lo.get(), coeff.get_mpz_t(), MPFR_RNDU);
      mpfr_set(lo.get(), tmp.get(), MPFR_RNDD);
    }
    if (mpfr_cmp_z(lo.get(), rhs.get_mpz_t()) >= 0) return true;
    if (mpfr_cmp_z(hi.get(), rhs.get_mpz_t()) < 0) return false;
    if (sgn(coeff) == 0) return sgn(rhs) <= 0;
  }
  throw Error(ErrorCode::Undecided, "log2 comparison not separated at maximum precision");
}

std::pair<std::uint64_t, std::uint64_t> squarefree_split(std::uint64_t k) {
  std::uint64_t s = 1;
  std::uint64_t r = 1;
  for (std::uint64_t p = 2; p * p <= k; ++p) {
    unsigned e = 0;
    while (k % p == 0) {
      k /= p;
      ++e;
    }
    for (unsigned i = 0; i < e / 2; ++i) s *= p;
    if (e % 2 == 1) r *= p;
  }
  r *= k;
  return {s, r};
}

ThreeHalvesComparison compare_three_halves_sum(std::span<const std::uint64_t> ks, const BigInt& scale,
                                               const BigInt& bound) {
  // k^{3/2} = k*s*sqrt(r); collect integer coefficients per squarefree radical.
  std::map<std::uint64_t, BigInt> radicals;
  for (std::uint64_t k : ks) {
    if (k == 0) continue;
    const auto [s, r] = squarefree_split(k);
    radicals[r] += BigInt(k) * s;
  }

  ThreeHalvesComparison out;
  if (radicals.size() <= 1) {
    BigInt value = 0;
    if (!radicals.empty()) {
      const auto& [r, alpha] = *radicals.begin();
      value = scale * alpha * alpha * BigInt(r);
    }
    out.holds = value <= bound;
    out.method = "exact";
    out.value_lower = out.value_upper = value.get_str();
    return out;
  }

  // Two or more distinct squarefree radicals with positive coefficients make
  // the squared sum irrational, so the comparison with an integer is strict
  // and the refinement loop terminates.
  for (long prec = kStartPrecision; prec <= kMaxPrecision; prec *= 2) {
    Mpfr lo(prec), hi(prec), term(prec);
    mpfr_set_zero(lo.get(), 1);
    mpfr_set_zero(hi.get(), 1);
    for (const auto& [r, alpha] : radicals) {
      mpfr_set_ui(term.get(), r, MPFR_RNDD);
      mpfr_sqrt(term.get(), term.get(), MPFR_RNDD);
      mpfr_mul_z(term.get(), term.get(), alpha.get_mpz_t(), MPFR_RNDD);
      mpfr_add(lo.get(), lo.get(), term.get(), MPFR_RNDD);
      mpfr_set_ui(term.get(), r, MPFR_RNDU);
      mpfr_sqrt(term.get(), term.get(), MPFR_RNDU);
      mpfr_mul_z(term.get(), term.get(), alpha.get_mpz_t(), MPFR_RNDU);
      mpfr_add(hi.get(), hi.get(), term.get(), MPFR_RNDU);
    }
    mpfr_sqr(lo.get(), lo.get(), MPFR_RNDD);
    mpfr_mul_z(lo.get(), lo.get(), scale.get_mpz_t(), MPFR_RNDD);
    mpfr_sqr(hi.get(), hi.get(), MPFR_RNDU);
    mpfr_mul_z(hi.get(), hi.get(), scale.get_mpz_t(), MPFR_RNDU);

    const bool decided_true = mpfr_cmp_z(hi.get(), bound.get_mpz_t()) <= 0;
    const bool decided_false = mpfr_cmp_z(lo.get(), bound.get_mpz_t()) > 0;
    if (decided_true || decided_false) {
      out.holds = decided_true;
      out.method = "interval";
      out.precision_bits = prec;
      out.value_lower = render(lo.get(), 12);
      out.value_upper = render(hi.get(), 12);
      return out;
    }
  }
  throw Error(ErrorCode::Undecided, "three-halves comparison not separated at maximum precision");
}

std::string to_decimal(const Rational& value, int digits) {
  Mpfr x(kDecimalPrecision);
  mpfr_set_q(x.get(), value.get().get_mpq_t(), MPFR_RNDN);
  return render(x.get(), digits);
}

std::string power_ratio_decimal(const BigInt& numer, std::uint64_t base, long p, long q, int digits) {
  if (base == 0 || q == 0) throw Error(ErrorCode::BadParams, "degenerate power ratio");
  Mpfr num(kDecimalPrecision), b(kDecimalPrecision), e(kDecimalPrecision);
  mpfr_set_z(num.get(), numer.get_mpz_t(), MPFR_RNDN);
  mpfr_set_ui(b.get(), base, MPFR_RNDN);
  mpfr_set_si(e.get(), p, MPFR_RNDN);
  mpfr_div_si(e.get(), e.get(), q, MPFR_RNDN);
  mpfr_pow(b.get(), b.get(), e.get(), MPFR_RNDN);
  mpfr_div(num.get(), num.get(), b.get(), MPFR_RNDN);
  return render(num.get(), digits);
}

std::string sqrt_over_decimal(const BigInt& radicand, const BigInt& denom, int digits) {
  if (sgn(denom) == 0) throw Error(ErrorCode::DivisionByZero, "sqrt quotient by zero");
  Mpfr x(kDecimalPrecision);
  mpfr_set_z(x.get(), radicand.get_mpz_t(), MPFR_RNDN);
  mpfr_sqrt(x.get(), x.get(), MPFR_RNDN);
  mpfr_div_z(x.get(), x.get(), denom.get_mpz_t(), MPFR_RNDN);
  return render(x.get(), digits);
}

std::string over_sqrt_decimal(const BigInt& numer, const BigInt& radicand, int digits) {
  if (sgn(radicand) <= 0) throw Error(ErrorCode::DivisionByZero, "quotient by non-positive sqrt");
  Mpfr x(kDecimalPrecision), r(kDecimalPrecision);
  mpfr_set_z(r.get(), radicand.get_mpz_t(), MPFR_RNDN);
  mpfr_sqrt(r.get(), r.get(), MPFR_RNDN);
  mpfr_set_z(x.get(), numer.get_mpz_t(), MPFR_RNDN);
  mpfr_div(x.get(), x.get(), r.get(), MPFR_RNDN);
  return render(x.get(), digits);
}

std::string log2_ratio_decimal(const BigInt& numer, const BigInt& denom, int digits) {
  if (sgn(numer) <= 0 || sgn(denom) <= 0) throw Error(ErrorCode::BadParams, "log of non-positive ratio");
  Mpfr x(kDecimalPrecision), d(kDecimalPrecision);
  mpfr_set_z(x.get(), numer.get_mpz_t(), MPFR_RNDN);
  mpfr_set_z(d.get(), denom.get_mpz_t(), MPFR_RNDN);
  mpfr_div(x.get(), x.get(), d.get(), MPFR_RNDN);
  mpfr_log2(x.get(), x.get(), MPFR_RNDN);
  return render(x.get(), digits);
}

}  // namespace sumprod
