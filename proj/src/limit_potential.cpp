#include "adhesion/limit_potential.hpp"

#include "adhesion/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace adhesion {

//================================================
// Closed-form HJ branches
//================================================

namespace {

Vec offset(const HJBranch& b, const Vec& x) {
  if (x.size() != b.momentum.size()) throw DimensionMismatch("point and branch dimensions differ");
  return b.center.size() ? Vec(x - b.center) : x;
}

void require_defined(const HJBranch& b, double t) {
  if (!b.defined_at(t))
    throw DomainError(fmt::format("quadratic branch undefined at t = {} (1 + a t <= 0)", t));
}

}  // namespace

double HJBranch::value(const Vec& x, double t, double force) const {
  require_defined(*this, t);
  const Vec y = offset(*this, x);
  const double D = 1.0 + curvature * t;
  const double N = momentum.dot(y) + 0.5 * curvature * y.squaredNorm();
  return constant - force * t + N / D - t * momentum.squaredNorm() / (2.0 * D);
}

Vec HJBranch::gradient(const Vec& x, double t) const {
  require_defined(*this, t);
  const Vec y = offset(*this, x);
  return (momentum + curvature * y) / (1.0 + curvature * t);
}

double HJBranch::time_derivative(const Vec& x, double t, double force) const {
  require_defined(*this, t);
  const Vec y = offset(*this, x);
  const double D = 1.0 + curvature * t;
  const double N = momentum.dot(y) + 0.5 * curvature * y.squaredNorm();
  return -force - curvature * N / (D * D) - momentum.squaredNorm() / (2.0 * D * D);
}

double HJBranch::residual(const Vec& x, double t, double force) const {
  return time_derivative(x, t, force) + 0.5 * gradient(x, t).squaredNorm() + force;
}

FiniteMinFamily::FiniteMinFamily(std::vector<HJBranch> branches, double force)
    : branches_(std::move(branches)), force_(force) {
  if (branches_.empty()) throw InvalidPotential("a finite family needs at least one branch");
  const auto d = branches_.front().momentum.size();
  if (d < 1) throw DimensionMismatch("branch momentum must have dimension >= 1");
  if (!std::isfinite(force_)) throw DomainError("force constant must be finite");
  for (const auto& b : branches_) {
    if (b.momentum.size() != d || (b.center.size() && b.center.size() != d))
      throw DimensionMismatch("all branches must share one dimension");
    if (!all_finite(b.momentum) || !std::isfinite(b.constant) || !std::isfinite(b.curvature))
      throw DomainError("branch coefficients must be finite");
    const Vec base = b.center.size() ? b.center : Vec::Zero(d);
    const double t_probe = b.curvature < 0.0 ? -0.5 / b.curvature : 0.5;
    for (double t : {0.0, t_probe}) {
      for (Eigen::Index i = -1; i < d; ++i) {
        Vec x = base;
        if (i >= 0) x[i] += 1.0;
        const double scale = std::max(1.0, b.momentum.squaredNorm() + std::abs(force_) +
                                               std::abs(b.curvature) * (1.0 + x.squaredNorm()));
        if (std::abs(b.residual(x, t, force_)) > 1e-10 * scale)
          throw InvalidPotential("branch does not solve the Hamilton-Jacobi equation");
      }
    }
  }
}

Branch FiniteMinFamily::branch(std::size_t index, const Vec& x, double t) const {
  const auto& b = branches_.at(index);
  return Branch{b.value(x, t, force_), b.gradient(x, t), Vec::Constant(1, static_cast<double>(index))};
}

std::vector<Branch> FiniteMinFamily::evaluate_branches(const Vec& x, double t) const {
  std::vector<Branch> out;
  out.reserve(branches_.size());
  for (std::size_t i = 0; i < branches_.size(); ++i) out.push_back(branch(i, x, t));
  return out;
}

//================================================
// Local linear model
//================================================

void check_planar_genericity(const MomentumSet& momenta) {
  if (momenta.dimension() != 2) throw DimensionMismatch("genericity conditions are planar");
  const auto& p = momenta.elements();
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        if (collinear(p[i], p[j], p[k]))
          throw GenericityViolation(fmt::format("three momenta on a line ({}, {}, {})", i, j, k));
        const std::size_t tri[3] = {i, j, k};
        for (int v = 0; v < 3; ++v) {
          const Vec a = p[tri[(v + 1) % 3]] - p[tri[v]];
          const Vec b = p[tri[(v + 2) % 3]] - p[tri[v]];
          if (std::abs(a.dot(b) / (a.norm() * b.norm())) < kRightAngleBand)
            throw GenericityViolation(fmt::format("right triangle ({}, {}, {})", i, j, k));
        }
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        for (std::size_t l = k + 1; l < n; ++l) {
          Eigen::Matrix3d m;
          double scale = 0.0;
          const std::size_t idx[3] = {i, j, k};
          for (int r = 0; r < 3; ++r) {
            const Vec e = p[idx[r]] - p[l];
            m(r, 0) = e[0];
            m(r, 1) = e[1];
            m(r, 2) = e.squaredNorm();
            scale = std::max(scale, e.norm());
          }
          if (std::abs(m.determinant()) <= kDegeneracyTolerance * std::pow(scale, 4))
            throw GenericityViolation(fmt::format("four momenta on a circle ({}, {}, {}, {})", i, j, k, l));
        }
}

LocalLinearModel::LocalLinearModel(MomentumSet momenta, double force, bool check_genericity)
    : momenta_(std::move(momenta)), force_(force) {
  if (!std::isfinite(force_)) throw DomainError("force constant must be finite");
  if (check_genericity && momenta_.dimension() == 2) check_planar_genericity(momenta_);
}

double LocalLinearModel::value(const Vec& q, double tau) const {
  return spacetime_directional_derivative(momenta_, force_, q, tau);
}

std::vector<Branch> LocalLinearModel::evaluate_branches(const Vec& q, double tau) const {
  if (q.size() != momenta_.dimension()) throw DimensionMismatch("point dimension mismatch");
  std::vector<Branch> out;
  for (std::size_t i = 0; i < momenta_.size(); ++i) {
    const Vec& p = momenta_[i];
    out.push_back({p.dot(q) - 0.5 * tau * p.squaredNorm() - force_ * tau, p,
                   Vec::Constant(1, static_cast<double>(i))});
  }
  return out;
}

double local_model_derivative(const LocalLinearModel& model, const Vec& q, double tau) {
  return spacetime_directional_derivative(model.momenta(), model.force(), q, tau);
}

//================================================
// Hopf-Lax potential
//================================================

HopfLaxPotential::HopfLaxPotential(FourierSeries phi0, int cells_per_period)
    : phi0_(std::move(phi0)), cells_(cells_per_period) {
  const int d = phi0_.dimension();
  if (cells_ == 0) cells_ = d == 1 ? 2048 : 256;
  if (cells_ < 16) throw DomainError("at least 16 grid cells per period are required");
  const Vec h = phi0_.period() / cells_;
  if (d == 1) {
    table_.resize(static_cast<std::size_t>(cells_));
    for (int j = 0; j < cells_; ++j) table_[static_cast<std::size_t>(j)] = phi0_.value(make_vec({j * h[0]}));
  } else {
    table_.resize(static_cast<std::size_t>(cells_) * static_cast<std::size_t>(cells_));
    for (int i = 0; i < cells_; ++i)
      for (int j = 0; j < cells_; ++j)
        table_[static_cast<std::size_t>(i) * static_cast<std::size_t>(cells_) + static_cast<std::size_t>(j)] =
            phi0_.value(make_vec({i * h[0], j * h[1]}));
  }
}

double HopfLaxPotential::default_tolerance() const {
  return 1e-6 * std::max(1.0, 2.0 * phi0_.amplitude_bound());
}

double HopfLaxPotential::table_value(const std::vector<long>& index) const {
  std::size_t flat = 0;
  for (long i : index) {
    long r = i % cells_;
    if (r < 0) r += cells_;
    flat = flat * static_cast<std::size_t>(cells_) + static_cast<std::size_t>(r);
  }
  return table_[flat];
}

Branch HopfLaxPotential::make_branch(const Vec& a, const Vec& x, double t) const {
  if (t == 0.0) return Branch{phi0_.value(x), phi0_.gradient(x), x};
  return Branch{phi0_.value(a) + (x - a).squaredNorm() / (2.0 * t), (x - a) / t, a};
}

std::optional<Vec> HopfLaxPotential::newton_minimizer(Vec a, const Vec& x, double t, int max_iter) const {
  const auto d = a.size();
  const Mat eye = Mat::Identity(d, d);
  for (int it = 0; it < max_iter; ++it) {
    const Vec g = phi0_.gradient(a) - (x - a) / t;
    const Mat H = phi0_.hessian(a) + eye / t;
    Eigen::LLT<Mat> llt(H);
    if (llt.info() != Eigen::Success) return std::nullopt;
    const Vec step = llt.solve(g);
    a -= step;
    if (step.norm() <= 1e-15 * std::max(1.0, a.norm())) break;
  }
  const Vec g = phi0_.gradient(a) - (x - a) / t;
  Eigen::LLT<Mat> llt(Mat(phi0_.hessian(a) + eye / t));
  if (llt.info() != Eigen::Success) return std::nullopt;
  if (g.norm() * t > 1e-9 * std::max(1.0, x.norm())) return std::nullopt;
  return a;
}

namespace {

void sort_and_merge(std::vector<Branch>& out) {
  std::sort(out.begin(), out.end(), [](const Branch& a, const Branch& b) { return a.value < b.value; });
  std::vector<Branch> merged;
  for (auto& b : out) {
    const bool dup = std::any_of(merged.begin(), merged.end(),
                                 [&](const Branch& m) { return (m.key - b.key).norm() < 1e-8; });
    if (!dup) merged.push_back(std::move(b));
  }
  out = std::move(merged);
}

}  // namespace

std::vector<Branch> HopfLaxPotential::branches_1d(double x, double t) const {
  const double L = phi0_.period()[0];
  const double h = L / cells_;
  // The global minimizer lies within half a period of x: shifting a by whole
  // periods toward x keeps phi0(a) and lowers the penalty.
  const double W = 0.5 * L + 2.0 * h;
  const auto j0 = static_cast<long>(std::floor((x - W) / h));
  const auto j1 = static_cast<long>(std::ceil((x + W) / h));
  const auto n = static_cast<std::size_t>(j1 - j0 + 1);
  std::vector<double> f(n);
  std::vector<long> idx(1);
  for (std::size_t i = 0; i < n; ++i) {
    const long j = j0 + static_cast<long>(i);
    idx[0] = j;
    const double a = static_cast<double>(j) * h;
    f[i] = table_value(idx) + (x - a) * (x - a) / (2.0 * t);
  }
  std::vector<std::size_t> minima;
  double fmin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < n; ++i)
    if (f[i] <= f[i - 1] && f[i] < f[i + 1]) {
      minima.push_back(i);
      fmin = std::min(fmin, f[i]);
    }
  const double margin = (phi0_.curvature_bound() + 1.0 / t) * h * h + 1e-12 * std::max(1.0, std::abs(fmin));

  std::vector<Branch> out;
  auto deriv = [&](double a) { return phi0_.gradient(make_vec({a}))[0] - (x - a) / t; };
  auto fval = [&](double a) { return phi0_.value(make_vec({a})) + (x - a) * (x - a) / (2.0 * t); };
  for (std::size_t i : minima) {
    if (f[i] > fmin + margin) continue;
    double lo = static_cast<double>(j0 + static_cast<long>(i) - 1) * h;
    double hi = lo + 2.0 * h;
    double a;
    if (deriv(lo) <= 0.0 && deriv(hi) >= 0.0) {
      for (int it = 0; it < 40; ++it) {
        const double mid = 0.5 * (lo + hi);
        (deriv(mid) > 0.0 ? hi : lo) = mid;
      }
      a = 0.5 * (lo + hi);
    } else {
      const double g = 0.5 * (std::sqrt(5.0) - 1.0);
      double c = hi - g * (hi - lo), e = lo + g * (hi - lo);
      for (int it = 0; it < 80; ++it) {
        if (fval(c) < fval(e)) {
          hi = e;
        } else {
          lo = c;
        }
        c = hi - g * (hi - lo);
        e = lo + g * (hi - lo);
      }
      a = 0.5 * (lo + hi);
    }
    out.push_back(make_branch(make_vec({a}), make_vec({x}), t));
  }
  sort_and_merge(out);
  return out;
}

std::vector<Branch> HopfLaxPotential::branches_2d(const Vec& x, double t) const {
  const Vec h = phi0_.period() / cells_;
  long lo[2], hi[2];
  for (int k = 0; k < 2; ++k) {
    const double W = 0.5 * phi0_.period()[k] + 2.0 * h[k];
    lo[k] = static_cast<long>(std::floor((x[k] - W) / h[k]));
    hi[k] = static_cast<long>(std::ceil((x[k] + W) / h[k]));
  }
  const long n0 = hi[0] - lo[0] + 1, n1 = hi[1] - lo[1] + 1;
  std::vector<double> f(static_cast<std::size_t>(n0 * n1));
  std::vector<long> idx(2);
  for (long i = 0; i < n0; ++i)
    for (long j = 0; j < n1; ++j) {
      idx[0] = lo[0] + i;
      idx[1] = lo[1] + j;
      const double dx = x[0] - static_cast<double>(idx[0]) * h[0];
      const double dy = x[1] - static_cast<double>(idx[1]) * h[1];
      f[static_cast<std::size_t>(i * n1 + j)] = table_value(idx) + (dx * dx + dy * dy) / (2.0 * t);
    }
  std::vector<std::pair<long, long>> minima;
  double fmin = std::numeric_limits<double>::infinity();
  for (long i = 1; i + 1 < n0; ++i)
    for (long j = 1; j + 1 < n1; ++j) {
      const double c = f[static_cast<std::size_t>(i * n1 + j)];
      bool is_min = true;
      for (long di = -1; di <= 1 && is_min; ++di)
        for (long dj = -1; dj <= 1 && is_min; ++dj) {
          if (!di && !dj) continue;
          const double o = f[static_cast<std::size_t>((i + di) * n1 + j + dj)];
          const bool later = di > 0 || (di == 0 && dj > 0);
          is_min = later ? c < o : c <= o;
        }
      if (is_min) {
        minima.emplace_back(i, j);
        fmin = std::min(fmin, c);
      }
    }
  const double margin =
      (phi0_.curvature_bound() + 1.0 / t) * h.squaredNorm() + 1e-12 * std::max(1.0, std::abs(fmin));
  std::vector<Branch> out;
  for (auto [i, j] : minima) {
    if (f[static_cast<std::size_t>(i * n1 + j)] > fmin + margin) continue;
    const Vec a0 = make_vec({static_cast<double>(lo[0] + i) * h[0], static_cast<double>(lo[1] + j) * h[1]});
    const auto a = newton_minimizer(a0, x, t, 50);
    out.push_back(make_branch(a ? *a : a0, x, t));
  }
  sort_and_merge(out);
  return out;
}

std::vector<Branch> HopfLaxPotential::evaluate_branches(const Vec& x, double t) const {
  if (x.size() != dimension()) throw DimensionMismatch("point dimension mismatch");
  if (!(t >= 0.0)) throw DomainError("Hopf-Lax evaluation needs t >= 0");
  if (t == 0.0) return {make_branch(x, x, 0.0)};
  return dimension() == 1 ? branches_1d(x[0], t) : branches_2d(x, t);
}

double HopfLaxPotential::evaluate(const Vec& x, double t) const {
  if (!(t > 0.0)) {
    if (t == 0.0) return phi0_.value(x);
    throw DomainError("Hopf-Lax evaluation needs t > 0");
  }
  return evaluate_branches(x, t).front().value;
}

std::optional<Branch> HopfLaxPotential::follow(const Branch& branch, const Vec& x, double t) const {
  if (!(t >= 0.0)) throw DomainError("Hopf-Lax evaluation needs t >= 0");
  if (t == 0.0) return make_branch(x, x, 0.0);
  const auto a = newton_minimizer(branch.key, x, t, 30);
  if (!a) return std::nullopt;
  return make_branch(*a, x, t);
}

std::vector<double> find_shocks_1d(const HopfLaxPotential& potential, double t, double x_begin, int samples) {
  if (potential.dimension() != 1) throw DimensionMismatch("find_shocks_1d needs d = 1");
  if (!(t > 0.0)) throw DomainError("shocks are searched at t > 0");
  const double L = potential.phi0().period()[0];
  const double dx = L / samples;
  std::vector<double> shocks;
  Branch prev = potential.evaluate_branches(make_vec({x_begin}), t).front();
  for (int j = 1; j <= samples; ++j) {
    const double x1 = x_begin + j * dx;
    const Branch next = potential.evaluate_branches(make_vec({x1}), t).front();
    const auto carried = potential.follow(prev, make_vec({x1}), t);
    if (!carried || std::abs(carried->key[0] - next.key[0]) > 1e-6) {
      // the global minimizer switched inside (x1 - dx, x1]
      auto gap = [&](double x) -> std::optional<double> {
        const auto a = potential.follow(prev, make_vec({x}), t);
        const auto b = potential.follow(next, make_vec({x}), t);
        if (!a || !b) return std::nullopt;
        return a->value - b->value;
      };
      double lo = x1 - dx, hi = x1;
      const auto glo = gap(lo), ghi = gap(hi);
      // ties at a sample point can leave the gap at lo a rounding error above 0
      const double tie = 1e-12 * std::max(1.0, std::abs(next.value));
      if (glo && ghi && std::abs(*glo) <= tie) {
        shocks.push_back(lo);
      } else if (glo && ghi && *glo <= 0.0 && *ghi >= -tie) {
        bool ok = true;
        for (int it = 0; it < 60 && ok; ++it) {
          const double mid = 0.5 * (lo + hi);
          const auto g = gap(mid);
          if (!g) {
            ok = false;
            break;
          }
          (*g > 0.0 ? hi : lo) = mid;
        }
        if (ok) shocks.push_back(0.5 * (lo + hi));
      }
    }
    prev = next;
  }
  return shocks;
}

}  // namespace adhesion
