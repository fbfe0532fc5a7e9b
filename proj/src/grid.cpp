#include "celliptic/grid.hpp"

#include "celliptic/error.hpp"
#include "celliptic/parallel.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

namespace celliptic {

using Index = Eigen::Index;

GridFunction::GridFunction(Eigen::VectorXd lo, double h, std::vector<Index> shape, int dim)
    : lo_(std::move(lo)), h_(h), shape_(std::move(shape)) {
  if (static_cast<Index>(shape_.size()) != lo_.size())
    throw InvariantError("grid shape and lower corner disagree in dimension");
  if (!(h_ > 0.0))
    throw InvariantError("grid spacing must be positive");
  if (dim < 1)
    throw InvariantError("grid values need at least one component");
  Index total = 1;
  for (Index s : shape_) {
    if (s < 1)
      throw InvariantError("grid shape entries must be positive");
    total *= s;
  }
  values_ = Eigen::MatrixXd::Zero(dim, total);
}

GridFunction GridFunction::sample(const Eigen::VectorXd &lo, const Eigen::VectorXd &hi, double h,
                                  int dim,
                                  const std::function<Eigen::VectorXd(const Eigen::VectorXd &)> &f) {
  if (lo.size() != hi.size())
    throw InvariantError("box corners disagree in dimension");
  std::vector<Index> shape(lo.size());
  for (Index i = 0; i < lo.size(); ++i) {
    const double cells = (hi(i) - lo(i)) / h;
    const double rounded = std::round(cells);
    if (!(rounded >= 1.0) || std::abs(cells - rounded) > 1e-6)
      throw InvariantError("box edge is not a positive multiple of h");
    shape[i] = static_cast<Index>(rounded) + 1;
  }
  GridFunction g(lo, h, shape, dim);
  parallel_for(static_cast<std::size_t>(g.size()), [&](std::size_t i) {
    const Eigen::VectorXd v = f(g.point(static_cast<Index>(i)));
    if (v.size() != dim)
      throw InvariantError("sampled function returned the wrong number of components");
    g.values_.col(static_cast<Index>(i)) = v;
  });
  return g;
}

double GridFunction::cell_volume() const { return std::pow(h_, n()); }

Eigen::VectorXd GridFunction::hi() const {
  Eigen::VectorXd out = lo_;
  for (int i = 0; i < n(); ++i)
    out(i) += h_ * static_cast<double>(shape_[i] - 1);
  return out;
}

Index GridFunction::linear_index(const std::vector<Index> &idx) const {
  Index linear = 0;
  for (int i = 0; i < n(); ++i)
    linear = linear * shape_[i] + idx[i];
  return linear;
}

std::vector<Index> GridFunction::multi_index(Index linear) const {
  std::vector<Index> idx(n());
  for (int i = n() - 1; i >= 0; --i) {
    idx[i] = linear % shape_[i];
    linear /= shape_[i];
  }
  return idx;
}

Eigen::VectorXd GridFunction::point(Index linear) const {
  Eigen::VectorXd x(n());
  for (int i = n() - 1; i >= 0; --i) {
    x(i) = lo_(i) + h_ * static_cast<double>(linear % shape_[i]);
    linear /= shape_[i];
  }
  return x;
}

std::vector<Index> GridFunction::nearest(const Eigen::VectorXd &x) const {
  std::vector<Index> idx(n());
  for (int i = 0; i < n(); ++i)
    idx[i] = static_cast<Index>(std::llround((x(i) - lo_(i)) / h_));
  return idx;
}

Index GridFunction::find_point(const Eigen::VectorXd &x) const {
  const auto idx = nearest(x);
  for (int i = 0; i < n(); ++i) {
    if (idx[i] < 0 || idx[i] >= shape_[i])
      return -1;
    if (std::abs(lo_(i) + h_ * static_cast<double>(idx[i]) - x(i)) > 1e-9 * h_)
      return -1;
  }
  return linear_index(idx);
}

GridFunction GridFunction::crop(const std::vector<Index> &first,
                                const std::vector<Index> &last) const {
  std::vector<Index> shape(n());
  Eigen::VectorXd lo(n());
  for (int i = 0; i < n(); ++i) {
    if (first[i] < 0 || last[i] >= shape_[i] || last[i] < first[i])
      throw InvariantError("crop range outside the lattice");
    shape[i] = last[i] - first[i] + 1;
    lo(i) = lo_(i) + h_ * static_cast<double>(first[i]);
  }
  GridFunction out(lo, h_, shape, dim());
  for (Index j = 0; j < out.size(); ++j) {
    auto idx = out.multi_index(j);
    for (int i = 0; i < n(); ++i)
      idx[i] += first[i];
    out.values_.col(j) = values_.col(linear_index(idx));
  }
  return out;
}

GridFunction GridFunction::shrunk(Index margin) const {
  std::vector<Index> first(n(), margin), last(n());
  for (int i = 0; i < n(); ++i)
    last[i] = shape_[i] - 1 - margin;
  return crop(first, last);
}

bool GridFunction::contains_box(const Eigen::VectorXd &a, const Eigen::VectorXd &b) const {
  const Eigen::VectorXd top = hi();
  const double slack = 1e-9 * h_;
  for (int i = 0; i < n(); ++i)
    if (a(i) < lo_(i) - slack || b(i) > top(i) + slack)
      return false;
  return true;
}

bool GridFunction::contains_region(const Region &region) const {
  const Eigen::VectorXd r = Eigen::VectorXd::Constant(n(), region.radius);
  return region.n() == n() && contains_box(region.center - r, region.center + r);
}

void GridFunction::for_each_in_box(
    const Eigen::VectorXd &a, const Eigen::VectorXd &b,
    const std::function<void(Index, const Eigen::VectorXd &)> &f) const {
  std::vector<Index> first(n()), last(n());
  for (int i = 0; i < n(); ++i) {
    first[i] = std::max<Index>(0, static_cast<Index>(std::ceil((a(i) - lo_(i)) / h_ - 1e-9)));
    last[i] = std::min<Index>(shape_[i] - 1,
                              static_cast<Index>(std::floor((b(i) - lo_(i)) / h_ + 1e-9)));
    if (last[i] < first[i])
      return;
  }
  std::vector<Index> idx = first;
  Eigen::VectorXd x(n());
  while (true) {
    for (int i = 0; i < n(); ++i)
      x(i) = lo_(i) + h_ * static_cast<double>(idx[i]);
    f(linear_index(idx), x);
    int axis = n() - 1;
    while (axis >= 0 && idx[axis] == last[axis]) {
      idx[axis] = first[axis];
      --axis;
    }
    if (axis < 0)
      break;
    ++idx[axis];
  }
}

void GridFunction::require_valid() const {
  if (static_cast<Index>(shape_.size()) != lo_.size() || shape_.empty())
    throw InvariantError("grid shape inconsistent with its box");
  Index total = 1;
  for (Index s : shape_)
    total *= s;
  if (total != values_.cols())
    throw InvariantError("grid payload does not match its shape");
  if (!(h_ > 0.0) || !lo_.allFinite())
    throw InvariantError("grid geometry is not finite");
  if (!values_.allFinite())
    throw InvariantError("grid contains non-finite values");
}

double CellWeights::volume(double cell_volume) const {
  double total = 0.0;
  for (double f : fraction)
    total += f;
  return total * cell_volume;
}

CellWeights clipped_cells(const GridFunction &g, const Region &region, int subsamples) {
  region.require_valid();
  if (region.n() != g.n())
    throw InvariantError("region and grid disagree in dimension");
  const int n = g.n();
  const double h = g.h();
  const double r = region.radius;
  const double ri = region.inner_radius();
  const Eigen::VectorXd reach = Eigen::VectorXd::Constant(n, r + 0.5 * h);

  Index sub_total = 1;
  for (int i = 0; i < n; ++i)
    sub_total *= subsamples;

  CellWeights out;
  Eigen::VectorXd y(n);
  g.for_each_in_box(region.center - reach, region.center + reach,
                    [&](Index linear, const Eigen::VectorXd &x) {
                      const Eigen::ArrayXd offset = (x - region.center).array().abs();
                      const double near = (offset - 0.5 * h).max(0.0).matrix().norm();
                      const double far = (offset + 0.5 * h).matrix().norm();
                      if (near >= r || far <= ri)
                        return;
                      double fraction = 1.0;
                      if (far > r || near < ri) {
                        Index inside = 0;
                        for (Index s = 0; s < sub_total; ++s) {
                          Index rest = s;
                          for (int i = 0; i < n; ++i) {
                            const Index k = rest % subsamples;
                            rest /= subsamples;
                            y(i) = x(i) + h * ((static_cast<double>(k) + 0.5) / subsamples - 0.5);
                          }
                          if (region.contains(y))
                            ++inside;
                        }
                        fraction = static_cast<double>(inside) / static_cast<double>(sub_total);
                      }
                      if (fraction > 0.0) {
                        out.index.push_back(linear);
                        out.fraction.push_back(fraction);
                      }
                    });
  return out;
}

RegionAverage region_average(const GridFunction &u, const CellWeights &cells) {
  double weight = 0.0;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(u.dim());
  for (std::size_t i = 0; i < cells.index.size(); ++i) {
    sum += cells.fraction[i] * u.value(cells.index[i]);
    weight += cells.fraction[i];
  }
  if (!(weight > 0.0))
    throw NumericalError("region contains no grid cells");
  RegionAverage out;
  out.mean = sum / weight;
  double osc = 0.0;
  for (std::size_t i = 0; i < cells.index.size(); ++i)
    osc += cells.fraction[i] * (u.value(cells.index[i]) - out.mean).norm();
  out.oscillation = osc / weight;
  out.volume = weight * u.cell_volume();
  return out;
}

RegionAverage region_average(const GridFunction &u, const Region &region) {
  return region_average(u, clipped_cells(u, region));
}

namespace {

constexpr char kMagic[8] = {'C', 'E', 'G', 'R', 'I', 'D', '0', '1'};

template <typename T> void put(std::ofstream &out, T v) {
  out.write(reinterpret_cast<const char *>(&v), sizeof(T));
}

template <typename T> T get(std::ifstream &in, const std::string &path) {
  T v;
  if (!in.read(reinterpret_cast<char *>(&v), sizeof(T)))
    throw ParseError("truncated grid file: " + path);
  return v;
}

} // namespace

void write_grid(const std::string &path, const GridFunction &g) {
  g.require_valid();
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw ParseError("cannot open grid file for writing: " + path);
  out.write(kMagic, sizeof(kMagic));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(g.n()));
  put<std::uint64_t>(out, static_cast<std::uint64_t>(g.dim()));
  for (Index s : g.shape())
    put<std::uint64_t>(out, static_cast<std::uint64_t>(s));
  put<double>(out, g.h());
  const Eigen::VectorXd hi = g.hi();
  for (int i = 0; i < g.n(); ++i)
    put<double>(out, g.lo()(i));
  for (int i = 0; i < g.n(); ++i)
    put<double>(out, hi(i));
  out.write(reinterpret_cast<const char *>(g.values().data()),
            static_cast<std::streamsize>(sizeof(double) * g.values().size()));
  if (!out)
    throw ParseError("failed writing grid file: " + path);

  nlohmann::json side;
  side["format"] = "CEGRID01";
  side["n"] = g.n();
  side["dim"] = g.dim();
  side["shape"] = g.shape();
  side["h"] = g.h();
  side["lo"] = std::vector<double>(g.lo().data(), g.lo().data() + g.n());
  side["hi"] = std::vector<double>(hi.data(), hi.data() + g.n());
  std::ofstream meta(path + ".json");
  meta << side.dump(2) << '\n';
}

GridFunction read_grid(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw ParseError("cannot open grid file: " + path);
  char magic[8];
  if (!in.read(magic, sizeof(magic)) || std::memcmp(magic, kMagic, sizeof(magic)) != 0)
    throw ParseError("not a grid file: " + path);
  const auto n = get<std::uint64_t>(in, path);
  const auto dim = get<std::uint64_t>(in, path);
  if (n < 1 || n > 8 || dim < 1 || dim > 4096)
    throw ParseError("implausible grid header: " + path);
  std::vector<Index> shape(n);
  for (auto &s : shape) {
    const auto v = get<std::uint64_t>(in, path);
    if (v < 1 || v > (1ull << 32))
      throw ParseError("implausible grid shape: " + path);
    s = static_cast<Index>(v);
  }
  const double h = get<double>(in, path);
  Eigen::VectorXd lo(n), hi(n);
  for (std::uint64_t i = 0; i < n; ++i)
    lo(i) = get<double>(in, path);
  for (std::uint64_t i = 0; i < n; ++i)
    hi(i) = get<double>(in, path);
  if (!(h > 0.0) || !lo.allFinite())
    throw ParseError("invalid grid geometry: " + path);
  for (std::uint64_t i = 0; i < n; ++i)
    if (std::abs(lo(i) + h * static_cast<double>(shape[i] - 1) - hi(i)) > 1e-6 * h)
      throw ParseError("grid box inconsistent with shape and h: " + path);
  GridFunction g(lo, h, shape, static_cast<int>(dim));
  if (!in.read(reinterpret_cast<char *>(g.values().data()),
               static_cast<std::streamsize>(sizeof(double) * g.values().size())))
    throw ParseError("truncated grid payload: " + path);
  if (!g.values().allFinite())
    throw ParseError("grid payload contains non-finite values: " + path);
  return g;
}

} // namespace celliptic
