#include "sumprod/set_core.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

namespace sumprod {

FiniteComplexSet::FiniteComplexSet(std::initializer_list<GaussianRational> elements)
    : FiniteComplexSet(std::vector<GaussianRational>(elements)) {}

FiniteComplexSet::FiniteComplexSet(std::vector<GaussianRational> elements) : elements_(std::move(elements)) {
  std::sort(elements_.begin(), elements_.end());
  elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
}

bool FiniteComplexSet::contains(const GaussianRational& z) const {
  return std::binary_search(elements_.begin(), elements_.end(), z);
}

FiniteComplexSet FiniteComplexSet::dilate(const GaussianRational& c) const {
  std::vector<GaussianRational> out;
  out.reserve(elements_.size());
  for (const auto& z : elements_) out.push_back(c * z);
  return FiniteComplexSet(std::move(out));
}

FiniteComplexSet FiniteComplexSet::translate(const GaussianRational& c) const {
  std::vector<GaussianRational> out;
  out.reserve(elements_.size());
  for (const auto& z : elements_) out.push_back(z + c);
  return FiniteComplexSet(std::move(out));
}

bool FiniteComplexSet::is_subset_of(const FiniteComplexSet& other) const {
  return std::includes(other.elements_.begin(), other.elements_.end(), elements_.begin(), elements_.end());
}

Count RepCountMap::at(const GaussianRational& v) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                             [](const Entry& e, const GaussianRational& key) { return e.first < key; });
  return (it != entries_.end() && it->first == v) ? it->second : 0;
}

Count RepCountMap::total() const {
  Count sum = 0;
  for (const auto& [v, n] : entries_) sum += n;
  return sum;
}

FiniteComplexSet RepCountMap::support() const {
  std::vector<GaussianRational> keys;
  keys.reserve(entries_.size());
  for (const auto& [v, n] : entries_) keys.push_back(v);
  return FiniteComplexSet(std::move(keys));
}

namespace {

GaussianRational apply(SetOp op, const GaussianRational& a, const GaussianRational& b) {
  switch (op) {
    case SetOp::Sum: return a + b;
    case SetOp::Diff: return a - b;
    case SetOp::Prod: return a * b;
    case SetOp::Ratio: return a / b;
  }
  return {};
}

void require_nonzero_denominators(const FiniteComplexSet& b) {
  if (b.contains(GaussianRational(0))) {
    throw Error(ErrorCode::ZeroInRatioDenominator, "ratio set denominator set contains 0");
  }
}

}  // namespace

RepCountMap representation_counts(const FiniteComplexSet& a, const FiniteComplexSet& b, SetOp op) {
  if (op == SetOp::Ratio) require_nonzero_denominators(b);
  std::unordered_map<GaussianRational, Count> tally;
  tally.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) ++tally[apply(op, x, y)];
  }
  std::vector<RepCountMap::Entry> entries(tally.begin(), tally.end());
  std::sort(entries.begin(), entries.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
  return RepCountMap(std::move(entries));
}

namespace {

FiniteComplexSet image(const FiniteComplexSet& a, const FiniteComplexSet& b, SetOp op) {
  std::vector<GaussianRational> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back(apply(op, x, y));
  }
  return FiniteComplexSet(std::move(out));
}

}  // namespace

FiniteComplexSet sumset(const FiniteComplexSet& a, const FiniteComplexSet& b) { return image(a, b, SetOp::Sum); }

FiniteComplexSet difference_set(const FiniteComplexSet& a, const FiniteComplexSet& b) {
  return image(a, b, SetOp::Diff);
}

FiniteComplexSet product_set(const FiniteComplexSet& a, const FiniteComplexSet& b) {
  return image(a, b, SetOp::Prod);
}

FiniteComplexSet ratio_set(const FiniteComplexSet& a, const FiniteComplexSet& b) {
  require_nonzero_denominators(b);
  return image(a, b, SetOp::Ratio);
}

bool in_sector(const GaussianRational& z, const Rational& epsilon) {
  if (z.is_zero()) throw Error(ErrorCode::ZeroElement, "sector test on 0");
  if (z.re().sign() <= 0) return false;
  const Rational t = abs(z.im() / z.re());
  if (t >= Rational(1)) return false;
  return Rational(2) * t < epsilon * (Rational(1) - t * t);
}

bool sector_check(const FiniteComplexSet& a, const Rational& epsilon) {
  if (epsilon.sign() <= 0) throw Error(ErrorCode::BadParams, "sector half-width must be positive");
  if (a.contains(GaussianRational(0))) throw Error(ErrorCode::ZeroElement, "set contains 0");
  return std::all_of(a.begin(), a.end(), [&](const GaussianRational& z) { return in_sector(z, epsilon); });
}

// ---------------------------------------------------------------------------

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::BadParams, "empty random range");
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x = next();
  while (x >= limit) x = next();
  return x % bound;
}

std::int64_t Rng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw Error(ErrorCode::BadParams, "inverted random range");
  return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
}

const char* to_string(GeneratorKind kind) noexcept {
  switch (kind) {
    case GeneratorKind::Arithmetic: return "arithmetic";
    case GeneratorKind::Geometric: return "geometric";
    case GeneratorKind::ComplexLattice: return "lattice";
    case GeneratorKind::RandomSector: return "sector";
    case GeneratorKind::RandomGaussian: return "random";
  }
  return "unknown";
}

GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "arithmetic" || name == "ap") return GeneratorKind::Arithmetic;
  if (name == "geometric" || name == "gp") return GeneratorKind::Geometric;
  if (name == "lattice" || name == "complex_lattice") return GeneratorKind::ComplexLattice;
  if (name == "sector" || name == "random_sector") return GeneratorKind::RandomSector;
  if (name == "random" || name == "gaussian") return GeneratorKind::RandomGaussian;
  throw Error(ErrorCode::BadParams, "unknown generator kind '" + name + "'");
}

namespace {

constexpr std::size_t kMaxDraws = 200000;

FiniteComplexSet finish(std::vector<GaussianRational> elems, std::size_t n, const char* what) {
  FiniteComplexSet out(std::move(elems));
  if (out.size() != n) throw Error(ErrorCode::BadParams, std::string(what) + " does not yield distinct elements");
  if (out.contains(GaussianRational(0))) throw Error(ErrorCode::BadParams, std::string(what) + " hits 0");
  return out;
}

FiniteComplexSet random_gaussian(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const auto range = static_cast<std::int64_t>(std::max<std::size_t>(4, n));
  std::vector<GaussianRational> pool;
  for (std::size_t draw = 0; draw < kMaxDraws && pool.size() < n; ++draw) {
    const auto re_num = rng.between(-range, range);
    const auto re_den = rng.between(1, 3);
    const auto im_num = rng.between(-range, range);
    const auto im_den = rng.between(1, 3);
    const Rational re(re_num, re_den);
    const Rational im(im_num, im_den);
    GaussianRational z(re, im);
    if (z.is_zero()) continue;
    if (std::find(pool.begin(), pool.end(), z) != pool.end()) continue;
    pool.push_back(std::move(z));
  }
  return finish(std::move(pool), n, "random generator");
}

// r * (1 + i s) with r drawn from a small multiplicative pool and |s| <= eps/4,
// which keeps 2|s|/(1-s^2) < eps and makes ratios repeat often.
FiniteComplexSet random_sector(std::size_t n, const Rational& eps, std::uint64_t seed) {
  if (eps.sign() <= 0 || eps >= Rational(1)) throw Error(ErrorCode::BadParams, "sector epsilon must lie in (0, 1)");
  Rng rng(seed);
  const auto mult = static_cast<std::int64_t>(std::max<std::size_t>(6, n));
  constexpr std::int64_t kSlopeSteps = 4;
  std::vector<GaussianRational> pool;
  for (std::size_t draw = 0; draw < kMaxDraws && pool.size() < n; ++draw) {
    const auto unit = rng.between(1, mult);
    const auto shift = rng.between(0, 3);
    const auto slope_step = rng.between(-kSlopeSteps, kSlopeSteps);
    const Rational r = Rational(unit) * Rational(std::int64_t{1} << shift);
    const Rational s = eps * Rational(slope_step, 4 * kSlopeSteps);
    GaussianRational z(r, r * s);
    if (!in_sector(z, eps)) continue;
    if (std::find(pool.begin(), pool.end(), z) != pool.end()) continue;
    pool.push_back(std::move(z));
  }
  return finish(std::move(pool), n, "sector generator");
}

}  // namespace

FiniteComplexSet generate(const GeneratorSpec& spec) {
  if (spec.n < 2) throw Error(ErrorCode::BadParams, "generated sets need at least 2 elements");
  std::vector<GaussianRational> elems;
  switch (spec.kind) {
    case GeneratorKind::Arithmetic: {
      if (spec.step.is_zero()) throw Error(ErrorCode::BadParams, "arithmetic step is 0");
      GaussianRational x = spec.start;
      for (std::size_t k = 0; k < spec.n; ++k, x += spec.step) elems.push_back(x);
      return finish(std::move(elems), spec.n, "arithmetic progression");
    }
    case GeneratorKind::Geometric: {
      if (spec.start.is_zero() || spec.step.is_zero()) throw Error(ErrorCode::BadParams, "geometric start/ratio is 0");
      GaussianRational x = spec.start;
      for (std::size_t k = 0; k < spec.n; ++k, x *= spec.step) elems.push_back(x);
      return finish(std::move(elems), spec.n, "geometric progression");
    }
    case GeneratorKind::ComplexLattice: {
      if (spec.step.is_zero()) throw Error(ErrorCode::BadParams, "lattice step is 0");
      std::size_t side = 1;
      while (side * side < spec.n + 1) ++side;
      for (std::size_t a = 0; a < side && elems.size() < spec.n; ++a) {
        for (std::size_t b = 0; b < side && elems.size() < spec.n; ++b) {
          GaussianRational z = spec.start + spec.step * GaussianRational(Rational(a), Rational(b));
          if (!z.is_zero()) elems.push_back(std::move(z));
        }
      }
      return finish(std::move(elems), spec.n, "lattice");
    }
    case GeneratorKind::RandomSector: return random_sector(spec.n, spec.epsilon, spec.seed);
    case GeneratorKind::RandomGaussian: return random_gaussian(spec.n, spec.seed);
  }
  throw Error(ErrorCode::BadParams, "unknown generator");
}

// ---------------------------------------------------------------------------

FiniteComplexSet read_set(std::istream& in) {
  std::vector<GaussianRational> elems;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream fields(line);
    std::string re, im = "0", extra;
    if (!(fields >> re)) continue;
    fields >> im;
    if (fields >> extra) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": expected '<re> <im>'");
    }
    try {
      elems.emplace_back(Rational::parse(re), Rational::parse(im));
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return FiniteComplexSet(std::move(elems));
}

FiniteComplexSet parse_set(const std::string& text) {
  std::istringstream in(text);
  return read_set(in);
}

FiniteComplexSet load_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  return read_set(in);
}

void write_set(std::ostream& out, const FiniteComplexSet& a) {
  for (const auto& z : a) out << z.re().str() << ' ' << z.im().str() << '\n';
}

std::string format_set(const FiniteComplexSet& a) {
  std::ostringstream out;
  write_set(out, a);
  return out.str();
}

}  // namespace sumprod
