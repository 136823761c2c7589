#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "piecewise.hpp"
#include "roots.hpp"

namespace bvgodunov {

/// A(u) = scale * (u - center)^2 : the local flux at one position.
struct Parabola {
  double scale = 1.0;
  double center = 0.0;

  double operator()(double u) const {
    const double d = u - center;
    return scale * d * d;
  }
  double critical() const { return center; }
  double derivative(double u) const { return 2.0 * scale * (u - center); }

  friend bool operator==(const Parabola&, const Parabola&) = default;
};

/// Anything that evaluates a unimodal flux with a zero minimum at `critical()`.
template <typename F>
concept UnimodalBranch = requires(const F& f, double u) {
  { f(u) } -> std::convertible_to<double>;
  { f.critical() } -> std::convertible_to<double>;
};

/// sgn(u - critical) * A(u).
inline double signed_flux(const Parabola& p, double u) {
  const double a = p(u);
  if (u > p.center) return a;
  if (u < p.center) return -a;
  return 0.0;
}

enum class FluxFamily { quadratic_scaled, shifted_parabola, two_flux };
enum class Branch { plus, minus };

inline std::string_view to_string(FluxFamily f) {
  switch (f) {
    case FluxFamily::quadratic_scaled: return "quadratic_scaled";
    case FluxFamily::shifted_parabola: return "shifted_parabola";
    case FluxFamily::two_flux: return "two_flux";
  }
  return "unknown";
}

inline std::string_view to_string(Branch b) { return b == Branch::plus ? "plus" : "minus"; }

/// Flux A(u, x) that is unimodal in u with a BV dependence on x.
///
/// All three families are parabolas in u whose scale and center are step
/// functions of x:
///   quadratic_scaled  A = S(x) u^2,                 a = S,   R(u) = u^2
///   shifted_parabola  A = (u - u_M(x))^2,           a = u_M, R(u) = 2(|u| + max|u_M|)
///   two_flux          A = g(u) for x < x0, f(u) after, a = H(x - x0), R(u) = |g(u) - f(u)|
/// With these choices |A(u,x) - A(u,y)| <= R(u) |a(x) - a(y)| holds for all u, x, y,
/// and A(u,x) >= gamma(|u - u_M(x)|) with gamma(s) = (min scale) s^2.
///
/// Immutable after construction.
class FluxModel {
 public:
  static FluxModel quadratic_scaled(PiecewiseCoefficient S, double epsilon) {
    if (!(epsilon > 0.0)) throw DomainError("quadratic_scaled: floor epsilon must be positive");
    if (S.min_value() < epsilon) {
      throw DomainError("quadratic_scaled: S(x) drops below the floor epsilon = " +
                        std::to_string(epsilon));
    }
    FluxModel m;
    m.family_ = FluxFamily::quadratic_scaled;
    m.scale_ = S;
    m.center_ = PiecewiseCoefficient::constant(0.0);
    m.a_ = std::move(S);
    m.epsilon_ = epsilon;
    return m;
  }

  static FluxModel shifted_parabola(PiecewiseCoefficient u_M) {
    FluxModel m;
    m.family_ = FluxFamily::shifted_parabola;
    m.scale_ = PiecewiseCoefficient::constant(1.0);
    m.a_ = u_M;
    m.center_ = std::move(u_M);
    m.epsilon_ = 1.0;
    return m;
  }

  static FluxModel two_flux(Parabola g, Parabola f, double x0) {
    if (!(g.scale > 0.0) || !(f.scale > 0.0)) {
      throw DomainError("two_flux: branch scales must be positive");
    }
    if (!std::isfinite(x0) || !std::isfinite(g.center) || !std::isfinite(f.center)) {
      throw DomainError("two_flux: parameters must be finite");
    }
    FluxModel m;
    m.family_ = FluxFamily::two_flux;
    m.scale_ = PiecewiseCoefficient::step(x0, g.scale, f.scale);
    m.center_ = PiecewiseCoefficient::step(x0, g.center, f.center);
    m.a_ = PiecewiseCoefficient::step(x0, 0.0, 1.0);
    m.epsilon_ = std::min(g.scale, f.scale);
    m.left_ = g;
    m.right_ = f;
    m.x0_ = x0;
    return m;
  }

  FluxFamily family() const { return family_; }

  /// The parabola u -> A(u, x).
  Parabola local(double x) const { return {scale_(x), center_(x)}; }

  double flux(double u, double x) const { return local(x)(u); }
  double flux_derivative(double u, double x) const { return local(x).derivative(u); }
  double critical_point(double x) const { return center_(x); }

  /// Psi(u, x) = sgn(u - u_M(x)) A(u, x); strictly increasing in u.
  double singular_map(double u, double x) const { return signed_flux(local(x), u); }

  double inverse_singular_map(double z, double x) const {
    const Parabola p = local(x);
    if (z == 0.0) return p.center;
    const double offset = std::sqrt(std::abs(z) / p.scale);
    return z > 0.0 ? p.center + offset : p.center - offset;
  }

  /// The root k of A(k, x) = alpha on the requested side of u_M(x).
  double solve_k_alpha(double alpha, Branch branch, double x) const {
    if (!(alpha >= 0.0)) throw DomainError("solve_k_alpha: alpha must be nonnegative");
    const Parabola p = local(x);
    const double offset = std::sqrt(alpha / p.scale);
    return branch == Branch::plus ? p.center + offset : p.center - offset;
  }

  /// L(M) = sup_x sup_{|u| <= M} |dA/du (u, x)|.
  double lipschitz_bound(double M) const {
    if (!(M >= 0.0)) throw DomainError("lipschitz_bound: M must be nonnegative");
    switch (family_) {
      case FluxFamily::quadratic_scaled: return 2.0 * M * scale_.max_value();
      case FluxFamily::shifted_parabola: return 2.0 * (M + center_.max_abs());
      case FluxFamily::two_flux:
        return std::max(2.0 * left_.scale * (M + std::abs(left_.center)),
                        2.0 * right_.scale * (M + std::abs(right_.center)));
    }
    return 0.0;
  }

  /// Spatial modulus R(u) paired with spatial_coefficient().
  double modulus(double u) const {
    switch (family_) {
      case FluxFamily::quadratic_scaled: return u * u;
      case FluxFamily::shifted_parabola: return 2.0 * (std::abs(u) + center_.max_abs());
      case FluxFamily::two_flux: return std::abs(left_(u) - right_(u));
    }
    return 0.0;
  }

  /// R_bar(M) = sup_{|u| <= M} R(u).
  double modulus_bound(double M) const {
    if (!(M >= 0.0)) throw DomainError("modulus_bound: M must be nonnegative");
    switch (family_) {
      case FluxFamily::quadratic_scaled: return M * M;
      case FluxFamily::shifted_parabola: return 2.0 * (M + center_.max_abs());
      case FluxFamily::two_flux: {
        // g - f is a quadratic q2 u^2 + q1 u + q0; |.| peaks at an end or the vertex
        double best = std::max(modulus(-M), modulus(M));
        const double q2 = left_.scale - right_.scale;
        const double q1 = -2.0 * (left_.scale * left_.center - right_.scale * right_.center);
        if (q2 != 0.0) {
          const double vertex = -q1 / (2.0 * q2);
          if (std::abs(vertex) <= M) best = std::max(best, modulus(vertex));
        }
        return best;
      }
    }
    return 0.0;
  }

  /// gamma(s) with A(u, x) >= gamma(|u - u_M(x)|).
  double envelope(double s) const { return epsilon_ * s * s; }
  double envelope_inverse(double alpha) const { return std::sqrt(std::max(alpha, 0.0) / epsilon_); }

  const PiecewiseCoefficient& spatial_coefficient() const { return a_; }
  const PiecewiseCoefficient& critical_coefficient() const { return center_; }
  const PiecewiseCoefficient& scale_coefficient() const { return scale_; }

  /// Sorted union of every breakpoint of the scale and center coefficients.
  std::vector<double> breakpoints() const {
    std::vector<double> out(scale_.breakpoints().begin(), scale_.breakpoints().end());
    out.insert(out.end(), center_.breakpoints().begin(), center_.breakpoints().end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  bool has_spatial_jumps() const { return !scale_.is_constant() || !center_.is_constant(); }

  double epsilon() const { return epsilon_; }
  // two_flux only
  Parabola left_branch() const { return left_; }
  Parabola right_branch() const { return right_; }
  double jump_location() const { return x0_; }

 private:
  FluxModel() = default;

  FluxFamily family_ = FluxFamily::quadratic_scaled;
  PiecewiseCoefficient scale_;
  PiecewiseCoefficient center_;
  PiecewiseCoefficient a_;
  double epsilon_ = 1.0;
  Parabola left_{};
  Parabola right_{};
  double x0_ = 0.0;
};

/// Bisection route for k_alpha, bracketed by [u_M, u_M + gamma^{-1}(alpha)].
inline double solve_k_alpha_bisect(const FluxModel& model, double alpha, Branch branch, double x,
                                   const RootOptions& opt = {}) {
  if (!(alpha >= 0.0)) throw DomainError("solve_k_alpha: alpha must be nonnegative");
  const Parabola p = model.local(x);
  const double reach = model.envelope_inverse(alpha);
  if (branch == Branch::plus) {
    return bisect_increasing(p, alpha, p.center, p.center + reach, opt);
  }
  // mirror: s -> A(u_M - s) is increasing in s
  const double s = bisect_increasing([&](double t) { return p(p.center - t); }, alpha, 0.0, reach, opt);
  return p.center - s;
}

/// Bisection route for the inverse singular map with outward bracket search.
inline double inverse_singular_map_bisect(const FluxModel& model, double z, double x,
                                          const RootOptions& opt = {}) {
  const double center = model.critical_point(x);
  return bisect_increasing_expanding([&](double u) { return model.singular_map(u, x); }, z, center,
                                     1.0, opt);
}

}  // namespace bvgodunov
