#include "latticekit/tensor.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cmath>
#include <limits>
#include <random>

namespace latticekit {

namespace {

using Wide = boost::multiprecision::cpp_bin_float_50;

void require_grid_factor(const LatticeElement& f) {
  if (f.backend().kind() != Backend::Kind::grid || f.backend().axes().size() != 1 ||
      f.is_complex()) {
    throw InvalidArgument("pure tensor factors must be real samples on a one-axis grid");
  }
}

std::vector<std::size_t> unflatten(std::size_t flat, const Backend& grid) {
  const auto& axes = grid.axes();
  std::vector<std::size_t> idx(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    idx[k] = flat % axes[k].size();
    flat /= axes[k].size();
  }
  return idx;
}

void check_factor_grids(const LatticeExpr& expr, const Backend& grid) {
  if (grid.kind() != Backend::Kind::grid || grid.axes().size() != expr.arity()) {
    throw InvalidArgument("grid mismatch: expression arity " + std::to_string(expr.arity()) +
                          " needs a product grid with as many axes");
  }
  for (const auto& joins : expr.meets()) {
    for (const auto& combination : joins) {
      for (const auto& term : combination) {
        for (std::size_t k = 0; k < term.tensor.arity(); ++k) {
          if (term.tensor.factors()[k].backend().axes().front() != grid.axes()[k]) {
            throw InvalidArgument("grid mismatch on axis " + std::to_string(k));
          }
        }
      }
    }
  }
}

// Largest all-true rectangle of a rows x cols mask (histogram method).
std::optional<SubBox> largest_rectangle(const std::vector<char>& mask, std::size_t rows,
                                        std::size_t cols) {
  std::vector<std::size_t> height(cols, 0);
  std::optional<SubBox> best;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) height[c] = mask[r * cols + c] ? height[c] + 1 : 0;
    std::vector<std::size_t> stack;
    for (std::size_t c = 0; c <= cols; ++c) {
      const std::size_t h = c < cols ? height[c] : 0;
      while (!stack.empty() && height[stack.back()] >= h) {
        const std::size_t top = stack.back();
        stack.pop_back();
        const std::size_t left = stack.empty() ? 0 : stack.back() + 1;
        const std::size_t area = height[top] * (c - left);
        if (area > 0 && (!best || area > best->area())) {
          best = SubBox{r + 1 - height[top], r + 1, left, c};
        }
      }
      stack.push_back(c);
    }
  }
  return best;
}

}  // namespace

// PureTensor / LatticeExpr --------------------------------------------------

PureTensor::PureTensor(std::vector<LatticeElement> factors) : factors_(std::move(factors)) {
  if (factors_.size() < 2) throw InvalidArgument("pure tensor needs at least two factors");
  for (const auto& f : factors_) require_grid_factor(f);
}

double PureTensor::value_at(std::span<const std::size_t> index) const {
  double v = 1.0;
  for (std::size_t k = 0; k < factors_.size(); ++k) v *= factors_[k].re()[index[k]];
  return v;
}

double evaluate(const LinearCombination& combination, std::span<const std::size_t> index) {
  double v = 0.0;
  for (const auto& term : combination) v += term.coefficient * term.tensor.value_at(index);
  return v;
}

LatticeExpr::LatticeExpr(std::vector<Join> meets) : meets_(std::move(meets)) {
  if (meets_.empty()) throw InvalidArgument("lattice expression needs at least one meet");
  std::optional<std::size_t> arity;
  for (const auto& joins : meets_) {
    if (joins.empty()) throw InvalidArgument("empty join in lattice expression");
    for (const auto& combination : joins) {
      if (combination.empty()) throw InvalidArgument("empty linear combination");
      for (const auto& term : combination) {
        if (!std::isfinite(term.coefficient)) throw InvalidArgument("non-finite coefficient");
        if (arity && *arity != term.tensor.arity()) {
          throw InvalidArgument("pure tensors of different arity in one expression");
        }
        arity = term.tensor.arity();
      }
    }
  }
}

LatticeExpr LatticeExpr::of(PureTensor tensor, double coefficient) {
  return of(LinearCombination{WeightedTensor{coefficient, std::move(tensor)}});
}

LatticeExpr LatticeExpr::of(LinearCombination combination) {
  return LatticeExpr({Join{std::move(combination)}});
}

std::size_t LatticeExpr::arity() const { return meets_.front().front().front().tensor.arity(); }

double LatticeExpr::value_at(std::span<const std::size_t> index) const {
  double lowest = std::numeric_limits<double>::infinity();
  for (const auto& joins : meets_) {
    double highest = -std::numeric_limits<double>::infinity();
    for (const auto& combination : joins) highest = std::max(highest, evaluate(combination, index));
    lowest = std::min(lowest, highest);
  }
  return lowest;
}

LatticeExpr join(const LatticeExpr& a, const LatticeExpr& b) {
  std::vector<LatticeExpr::Join> meets;
  meets.reserve(a.meets().size() * b.meets().size());
  for (const auto& ja : a.meets()) {
    for (const auto& jb : b.meets()) {
      LatticeExpr::Join joined = ja;
      joined.insert(joined.end(), jb.begin(), jb.end());
      meets.push_back(std::move(joined));
    }
  }
  return LatticeExpr(std::move(meets));
}

LatticeExpr meet(const LatticeExpr& a, const LatticeExpr& b) {
  auto meets = a.meets();
  meets.insert(meets.end(), b.meets().begin(), b.meets().end());
  return LatticeExpr(std::move(meets));
}

LatticeElement eval_expr(const LatticeExpr& expr, const Backend& grid) {
  check_factor_grids(expr, grid);
  std::vector<double> out(grid.dimension());
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    out[flat] = expr.value_at(unflatten(flat, grid));
  }
  return {grid.with_field(Field::real), std::move(out)};
}

Backend product_grid(std::vector<double> x_axis, std::vector<double> y_axis) {
  return Backend::product_grid({std::move(x_axis), std::move(y_axis)});
}

Eigen::MatrixXd as_matrix(const LatticeElement& samples) {
  const auto& axes = samples.backend().axes();
  if (samples.backend().kind() != Backend::Kind::grid || axes.size() != 2 ||
      samples.is_complex()) {
    throw InvalidArgument("expected real samples on a two-axis grid");
  }
  const auto rows = static_cast<Eigen::Index>(axes[0].size());
  const auto cols = static_cast<Eigen::Index>(axes[1].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = samples.re()[r * cols + c];
  }
  return m;
}

Eigen::MatrixXd radial_samples(std::span<const double> x_axis, std::span<const double> y_axis) {
  Eigen::MatrixXd s(x_axis.size(), y_axis.size());
  for (std::size_t i = 0; i < x_axis.size(); ++i) {
    for (std::size_t j = 0; j < y_axis.size(); ++j) s(i, j) = std::hypot(x_axis[i], y_axis[j]);
  }
  return s;
}

// Rank certificates ----------------------------------------------------------

RankCertificate slice_rank(const Eigen::MatrixXd& samples, double tolerance) {
  if (samples.size() == 0) throw InvalidArgument("slice_rank needs a non-empty matrix");
  if (!(tolerance > 0.0 && tolerance < 1.0)) {
    throw InvalidArgument("rank tolerance must lie in (0, 1)");
  }
  if (!samples.allFinite()) throw InvalidArgument("non-finite entries in sample matrix");

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(samples);
  const auto& sv = svd.singularValues();
  RankCertificate cert;
  cert.rows = static_cast<std::size_t>(samples.rows());
  cert.cols = static_cast<std::size_t>(samples.cols());
  cert.tolerance = tolerance;
  cert.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double largest = sv.size() > 0 ? sv(0) : 0.0;
  for (double s : cert.singular_values) {
    if (s > tolerance * largest) ++cert.numerical_rank;
  }
  return cert;
}

double VandermondeCertificate::relative_gap() const {
  return std::abs(det_direct - det_product_formula) /
         std::max(std::abs(det_product_formula), std::numeric_limits<double>::min());
}

VandermondeCertificate vandermonde_certificate(double x, std::vector<double> alphas) {
  if (!std::isfinite(x) || x == 0.0) {
    throw InvalidArgument("x must be a finite non-zero real");
  }
  if (alphas.empty()) throw InvalidArgument("alphas must be non-empty");
  for (double a : alphas) {
    if (!std::isfinite(a) || a <= 0.0) throw InvalidArgument("alphas must be positive reals");
  }
  for (std::size_t j = 0; j < alphas.size(); ++j) {
    for (std::size_t k = j + 1; k < alphas.size(); ++k) {
      if (alphas[j] * alphas[j] == alphas[k] * alphas[k]) {
        throw DegenerateInput("degenerate alphas: alpha_j^2 must be pairwise distinct");
      }
    }
  }

  const std::size_t n = alphas.size();

  // Direct route: LU with partial pivoting on B(x) in 50-digit arithmetic.
  std::vector<Wide> b(n * n);
  const Wide x2 = Wide(x) * Wide(x);
  for (std::size_t j = 0; j < n; ++j) {
    const Wide node = Wide(1) / (x2 + Wide(alphas[j]) * Wide(alphas[j]));
    Wide power = 1;
    for (std::size_t i = 0; i < n; ++i) {
      b[i * n + j] = power;
      power *= node;
    }
  }
  Wide det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = c;
    for (std::size_t r = c + 1; r < n; ++r) {
      if (abs(b[r * n + c]) > abs(b[pivot * n + c])) pivot = r;
    }
    if (b[pivot * n + c] == 0) {
      det = 0;
      break;
    }
    if (pivot != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(b[c * n + k], b[pivot * n + k]);
      det = -det;
    }
    det *= b[c * n + c];
    for (std::size_t r = c + 1; r < n; ++r) {
      const Wide factor = b[r * n + c] / b[c * n + c];
      for (std::size_t k = c; k < n; ++k) b[r * n + k] -= factor * b[c * n + k];
    }
  }

  // Closed-form Vandermonde product, in double.
  double product = 1.0;
  const double xd2 = x * x;
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const double aj2 = alphas[j] * alphas[j];
      const double ak2 = alphas[k] * alphas[k];
      product *= (aj2 - ak2) / ((xd2 + aj2) * (xd2 + ak2));
    }
  }

  VandermondeCertificate cert;
  cert.x = x;
  cert.alphas = std::move(alphas);
  cert.det_direct = det.convert_to<double>();
  cert.det_product_formula = product;
  cert.nonzero = product != 0.0 && cert.det_direct != 0.0;
  return cert;
}

// Local pure piece -----------------------------------------------------------

LocalPiece local_pure_piece(const LatticeExpr& expr, const Backend& grid) {
  check_factor_grids(expr, grid);
  if (grid.axes().size() != 2) {
    throw InvalidArgument("local_pure_piece supports two-axis grids only");
  }
  const std::size_t rows = grid.axes()[0].size();
  const std::size_t cols = grid.axes()[1].size();
  constexpr double kInf = std::numeric_limits<double>::infinity();

  struct PointState {
    std::size_t meet = 0;
    std::size_t join = 0;
    double margin = 0.0;
  };
  std::vector<PointState> state(rows * cols);

  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const std::array<std::size_t, 2> idx{r, c};
      std::vector<double> join_values;
      std::vector<std::size_t> join_arg;
      std::vector<double> join_gap;
      for (const auto& joins : expr.meets()) {
        double best = -kInf;
        double second = -kInf;
        std::size_t arg = 0;
        for (std::size_t k = 0; k < joins.size(); ++k) {
          const double v = evaluate(joins[k], idx);
          if (v > best) {
            second = best;
            best = v;
            arg = k;
          } else if (v > second) {
            second = v;
          }
        }
        join_values.push_back(best);
        join_arg.push_back(arg);
        join_gap.push_back(joins.size() > 1 ? best - second : kInf);
      }
      std::size_t active = 0;
      double lowest = kInf;
      double runner_up = kInf;
      for (std::size_t j = 0; j < join_values.size(); ++j) {
        if (join_values[j] < lowest) {
          runner_up = lowest;
          lowest = join_values[j];
          active = j;
        } else if (join_values[j] < runner_up) {
          runner_up = join_values[j];
        }
      }
      const double meet_gap = join_values.size() > 1 ? runner_up - lowest : kInf;
      state[r * cols + c] = {active, join_arg[active], std::min(meet_gap, join_gap[active])};
    }
  }

  auto search = [&](bool strict) {
    std::optional<LocalPiece> best;
    for (std::size_t j = 0; j < expr.meets().size(); ++j) {
      for (std::size_t k = 0; k < expr.meets()[j].size(); ++k) {
        std::vector<char> mask(rows * cols);
        for (std::size_t p = 0; p < mask.size(); ++p) {
          mask[p] = state[p].meet == j && state[p].join == k && (!strict || state[p].margin > 0.0);
        }
        auto box = largest_rectangle(mask, rows, cols);
        if (box && (!best || box->area() > best->box.area())) {
          best = LocalPiece{*box, j, k, 0.0, !strict};
        }
      }
    }
    return best;
  };

  auto piece = search(true);
  if (!piece) {
    piece = search(false);
    piece->margin = 0.0;
    return *piece;
  }
  double margin = kInf;
  for (std::size_t r = piece->box.row_begin; r < piece->box.row_end; ++r) {
    for (std::size_t c = piece->box.col_begin; c < piece->box.col_end; ++c) {
      margin = std::min(margin, state[r * cols + c].margin);
    }
  }
  piece->margin = std::isinf(margin) ? std::numeric_limits<double>::max() : margin;
  return *piece;
}

// Incompleteness witness -------------------------------------------------------

std::vector<SubBox> contiguous_boxes(std::size_t rows, std::size_t cols, std::size_t size) {
  std::vector<SubBox> out;
  if (size == 0 || size > rows || size > cols) return out;
  for (std::size_t r = 0; r + size <= rows; ++r) {
    for (std::size_t c = 0; c + size <= cols; ++c) out.push_back({r, r + size, c, c + size});
  }
  return out;
}

std::size_t IncompletenessReport::min_radial_box_rank() const {
  std::size_t out = std::numeric_limits<std::size_t>::max();
  for (const auto& b : radial_boxes) out = std::min(out, b.rank);
  return out;
}

std::size_t IncompletenessReport::max_comparator_box_rank() const {
  std::size_t out = 0;
  for (const auto& b : comparator_boxes) out = std::max(out, b.rank);
  return out;
}

bool IncompletenessReport::radial_full_rank() const {
  const std::size_t full = std::min(radial.rows, radial.cols);
  return radial.numerical_rank == full && min_radial_box_rank() == box_size &&
         radial.numerical_rank > generator_bound;
}

bool IncompletenessReport::comparator_within_bound() const {
  return comparator.numerical_rank <= generator_bound &&
         max_comparator_box_rank() <= generator_bound;
}

IncompletenessReport incompleteness_witness(std::span<const double> x_axis,
                                            std::span<const double> y_axis,
                                            std::size_t generator_bound, std::size_t box_size,
                                            double tolerance, std::uint64_t seed) {
  if (x_axis.size() < 2 || y_axis.size() < 2) {
    throw InvalidArgument("grid too small: need at least 2 points per axis");
  }
  if (generator_bound == 0) throw InvalidArgument("generator count r must be >= 1");
  // Validates strictly increasing axes.
  const auto grid = product_grid({x_axis.begin(), x_axis.end()}, {y_axis.begin(), y_axis.end()});
  for (double v : x_axis) {
    if (v <= 0.0) throw InvalidArgument("grid points must be positive");
  }
  for (double v : y_axis) {
    if (v <= 0.0) throw InvalidArgument("grid points must be positive");
  }
  box_size = std::min({box_size, x_axis.size(), y_axis.size()});

  IncompletenessReport report;
  report.generator_bound = generator_bound;
  report.box_size = box_size;

  const Eigen::MatrixXd radial = radial_samples(x_axis, y_axis);
  report.radial = slice_rank(radial, tolerance);

  // Seeded combination of r pure tensors with factors in [0.5, 2].
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.5, 2.0);
  LinearCombination combination;
  const auto x_backend = Backend::grid({x_axis.begin(), x_axis.end()});
  const auto y_backend = Backend::grid({y_axis.begin(), y_axis.end()});
  for (std::size_t r = 0; r < generator_bound; ++r) {
    std::vector<double> f(x_axis.size());
    std::vector<double> g(y_axis.size());
    for (double& v : f) v = dist(rng);
    for (double& v : g) v = dist(rng);
    combination.push_back({1.0, PureTensor({{x_backend, f}, {y_backend, g}})});
  }
  const Eigen::MatrixXd comparator = as_matrix(eval_expr(LatticeExpr::of(combination), grid));
  report.comparator = slice_rank(comparator, tolerance);

  for (const auto& box : contiguous_boxes(x_axis.size(), y_axis.size(), box_size)) {
    const auto r0 = static_cast<Eigen::Index>(box.row_begin);
    const auto c0 = static_cast<Eigen::Index>(box.col_begin);
    const auto n = static_cast<Eigen::Index>(box_size);
    report.radial_boxes.push_back(
        {box, slice_rank(radial.block(r0, c0, n, n), tolerance).numerical_rank});
    report.comparator_boxes.push_back(
        {box, slice_rank(comparator.block(r0, c0, n, n), tolerance).numerical_rank});
  }

  report.vandermonde =
      vandermonde_certificate(x_axis.front(), std::vector<double>(y_axis.begin(), y_axis.end()));
  return report;
}

std::optional<PureTensor> pure_tensor_below(const LatticeElement& w) {
  const Eigen::MatrixXd samples = as_matrix(modulus(w));
  Eigen::Index row = 0;
  Eigen::Index col = 0;
  const double peak = samples.maxCoeff(&row, &col);
  if (peak <= 0.0) return std::nullopt;
  const auto& axes = w.backend().axes();
  auto f = LatticeElement::atom(Backend::grid(axes[0]), static_cast<std::size_t>(row));
  auto g = LatticeElement::atom(Backend::grid(axes[1]), static_cast<std::size_t>(col));
  return PureTensor({peak * f, g});
}

}  // namespace latticekit
