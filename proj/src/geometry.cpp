#include "fairdiv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fairdiv/error.hpp"

namespace fairdiv {

namespace {

void require_same_dim(std::size_t a, std::size_t b) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                "dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace

BarycentricPoint::BarycentricPoint(std::vector<Rational> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 2) throw Error(ErrorCode::InvalidArgument, "point needs d >= 2");
  Rational total;
  for (const auto& c : coords_) {
    if (c.sign() < 0) throw Error(ErrorCode::InvalidArgument, "negative barycentric coordinate");
    total += c;
  }
  if (total != 1) {
    throw Error(ErrorCode::InvalidArgument, "barycentric coordinates sum to " + total.str());
  }
}

BarycentricPoint BarycentricPoint::vertex(std::size_t d, std::size_t j) {
  if (j >= d) throw Error(ErrorCode::InvalidArgument, "vertex index out of range");
  std::vector<Rational> coords(d);
  coords[j] = 1;
  return BarycentricPoint(std::move(coords));
}

BarycentricPoint BarycentricPoint::barycenter(std::size_t d) {
  return BarycentricPoint(std::vector<Rational>(d, Rational(1, static_cast<long>(d))));
}

std::vector<double> BarycentricPoint::to_doubles() const {
  std::vector<double> out;
  out.reserve(coords_.size());
  for (const auto& c : coords_) out.push_back(c.to_double());
  return out;
}

std::string BarycentricPoint::str() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t j = 0; j < coords_.size(); ++j) os << (j ? ", " : "") << coords_[j];
  os << ']';
  return os.str();
}

Rational squared_distance(const BarycentricPoint& x, const BarycentricPoint& y) {
  require_same_dim(x.dim(), y.dim());
  Rational sum;
  for (std::size_t j = 0; j < x.dim(); ++j) {
    const Rational delta = x[j] - y[j];
    sum += delta * delta;
  }
  return sum / 2;
}

double bary_distance(const BarycentricPoint& x, const BarycentricPoint& y) {
  return std::sqrt(squared_distance(x, y).to_double());
}

Rational plane_gap_squared(std::size_t d) {
  if (d < 2) throw Error(ErrorCode::InvalidArgument, "plane gap needs d >= 2");
  return Rational(static_cast<long>(d), 2 * static_cast<long>(d - 1));
}

Rational squared_hyperplane_distance(const BarycentricPoint& x, std::size_t j, const Rational& level) {
  if (j >= x.dim()) throw Error(ErrorCode::InvalidArgument, "room index out of range");
  if (level.sign() < 0 || level > 1) throw Error(ErrorCode::InvalidArgument, "plane level outside [0,1]");
  const Rational delta = x[j] - level;
  return delta * delta * plane_gap_squared(x.dim());
}

double hyperplane_distance(const BarycentricPoint& x, std::size_t j, const Rational& level) {
  return std::sqrt(squared_hyperplane_distance(x, j, level).to_double());
}

GridPoint::GridPoint(std::size_t n, std::vector<std::size_t> parts) : n_(n), parts_(std::move(parts)) {
  if (n_ == 0) throw Error(ErrorCode::InvalidArgument, "grid resolution must be positive");
  if (parts_.size() < 2) throw Error(ErrorCode::InvalidArgument, "grid point needs d >= 2");
  std::size_t total = 0;
  for (const auto p : parts_) total += p;
  if (total != n_) throw Error(ErrorCode::InvalidArgument, "grid parts do not sum to n");
}

BarycentricPoint normalize_grid(const GridPoint& g) {
  std::vector<Rational> coords;
  coords.reserve(g.dim());
  const long n = static_cast<long>(g.resolution());
  for (const auto p : g.parts()) coords.emplace_back(static_cast<long>(p), n);
  return BarycentricPoint(std::move(coords));
}

std::optional<GridPoint> snap_to_grid(const BarycentricPoint& x, std::size_t n) {
  if (n == 0) return std::nullopt;
  std::vector<std::size_t> parts;
  parts.reserve(x.dim());
  for (const auto& c : x.coords()) {
    const Rational scaled = c * Rational(static_cast<long>(n));
    if (!scaled.is_integer()) return std::nullopt;
    parts.push_back(scaled.numerator().get_ui());
  }
  return GridPoint(n, std::move(parts));
}

CompositionCursor::CompositionCursor(std::size_t d, std::size_t n) : parts_(d, 0) {
  if (d == 0) throw Error(ErrorCode::InvalidArgument, "composition needs at least one part");
  parts_.back() = n;
}

bool CompositionCursor::next() {
  const std::size_t d = parts_.size();
  std::size_t tail = 0;
  for (std::size_t i = d - 1; i-- > 0;) {
    tail += parts_[i + 1];
    if (tail > 0) {
      ++parts_[i];
      std::fill(parts_.begin() + static_cast<std::ptrdiff_t>(i) + 1, parts_.end(), 0);
      parts_.back() = tail - 1;
      return true;
    }
  }
  return false;
}

std::uint64_t composition_count(std::size_t d, std::size_t n) {
  if (d == 0) return 0;
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), n + d - 1, d - 1);
  if (!out.fits_ulong_p()) throw Error(ErrorCode::InvalidArgument, "composition count overflows");
  return out.get_ui();
}

SubSimplexState::SubSimplexState(std::vector<Rational> lower, Rational scale)
    : lower_(std::move(lower)), scale_(std::move(scale)) {
  if (lower_.size() < 2) throw Error(ErrorCode::InvalidArgument, "sub-simplex needs d >= 2");
  if (scale_.sign() <= 0) throw Error(ErrorCode::InvalidArgument, "sub-simplex scale must be positive");
  Rational total = scale_;
  for (const auto& l : lower_) {
    if (l.sign() < 0) throw Error(ErrorCode::InvalidArgument, "negative lower bound");
    total += l;
  }
  if (total != 1) throw Error(ErrorCode::InvalidArgument, "lower bounds plus scale must equal 1");
}

SubSimplexState SubSimplexState::whole(std::size_t d) {
  return SubSimplexState(std::vector<Rational>(d), Rational(1));
}

BarycentricPoint SubSimplexState::center() const {
  const Rational share = scale_ / Rational(static_cast<long>(dim()));
  std::vector<Rational> coords;
  coords.reserve(dim());
  for (const auto& l : lower_) coords.push_back(l + share);
  return BarycentricPoint(std::move(coords));
}

SubSimplexState SubSimplexState::cut(std::size_t j0) const {
  if (j0 >= dim()) throw Error(ErrorCode::InvalidArgument, "cut index out of range");
  const auto d = static_cast<long>(dim());
  std::vector<Rational> lower = lower_;
  lower[j0] += scale_ / Rational(d);
  return SubSimplexState(std::move(lower), scale_ * Rational(d - 1, d));
}

BarycentricPoint SubSimplexState::vertex(std::size_t k) const {
  if (k >= dim()) throw Error(ErrorCode::InvalidArgument, "vertex index out of range");
  std::vector<Rational> coords = lower_;
  coords[k] += scale_;
  return BarycentricPoint(std::move(coords));
}

bool SubSimplexState::contains(const BarycentricPoint& x) const {
  require_same_dim(x.dim(), dim());
  for (std::size_t j = 0; j < dim(); ++j) {
    if (x[j] < lower_[j]) return false;
  }
  return true;
}

}  // namespace fairdiv
