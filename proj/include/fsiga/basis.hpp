#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "fsiga/errors.hpp"

namespace fsiga {

inline constexpr int kMaxDegree = 4;

template <typename Scalar>
struct Interval {
  Scalar lo{0};
  Scalar hi{1};

  Scalar length() const { return hi - lo; }
};

/// Knot vector of a B-spline basis.
///
/// Open vectors are clamped: the first and last knot repeat degree+1 times.
/// Periodic vectors are stored unclamped with `degree` extra knots on each
/// side of the parameter domain, the extension being shifted copies of the
/// interior spacing. Functions i and i + dof_count() of the extended basis
/// are identified, so only dof_count() distinct functions remain.
template <typename Scalar>
struct KnotVector {
  std::vector<Scalar> values;
  int degree = 1;
  bool periodic = false;

  /// Number of distinct basis functions.
  int dof_count() const {
    const int m = static_cast<int>(values.size());
    return periodic ? m - 2 * degree - 1 : m - degree - 1;
  }

  Interval<Scalar> domain() const {
    const int m = static_cast<int>(values.size());
    return {values[degree], values[m - degree - 1]};
  }
};

namespace detail {

inline void check_degree(int p) {
  if (p < 1 || p > kMaxDegree) {
    throw ParameterError("basis degree must be in [1, " + std::to_string(kMaxDegree) +
                         "], got " + std::to_string(p));
  }
}

template <typename Scalar>
void check_interval(const Interval<Scalar>& d) {
  if (!(d.hi > d.lo)) throw ParameterError("basis domain must have positive length");
}

}  // namespace detail

/// Clamped uniform knot vector with n_elems nonzero spans; n_elems + p functions.
template <typename Scalar>
KnotVector<Scalar> make_open_knots(int p, int n_elems, Interval<Scalar> domain) {
  detail::check_degree(p);
  if (n_elems < 1) throw ParameterError("make_open_knots: n_elems must be >= 1");
  detail::check_interval(domain);
  KnotVector<Scalar> kv;
  kv.degree = p;
  kv.values.reserve(n_elems + 2 * p + 1);
  for (int i = 0; i < p; ++i) kv.values.push_back(domain.lo);
  for (int e = 0; e <= n_elems; ++e) {
    kv.values.push_back(e == n_elems ? domain.hi
                                     : domain.lo + domain.length() * Scalar(e) / Scalar(n_elems));
  }
  for (int i = 0; i < p; ++i) kv.values.push_back(domain.hi);
  return kv;
}

/// Uniform periodic knot vector; n_elems distinct functions after wrapping.
template <typename Scalar>
KnotVector<Scalar> make_periodic_knots(int p, int n_elems, Interval<Scalar> domain) {
  detail::check_degree(p);
  detail::check_interval(domain);
  if (n_elems < p + 1) {
    throw ParameterError("make_periodic_knots: need at least degree+1 = " + std::to_string(p + 1) +
                         " elements, got " + std::to_string(n_elems));
  }
  KnotVector<Scalar> kv;
  kv.degree = p;
  kv.periodic = true;
  const Scalar h = domain.length() / Scalar(n_elems);
  for (int j = 0; j <= n_elems + 2 * p; ++j) {
    const int e = j - p;
    Scalar t = domain.lo + h * Scalar(e);
    if (e == n_elems) t = domain.hi;
    kv.values.push_back(t);
  }
  return kv;
}

/// Throws ParameterError when `kv` violates the ordering, clamping or wrap invariants.
template <typename Scalar>
void validate(const KnotVector<Scalar>& kv) {
  detail::check_degree(kv.degree);
  const int p = kv.degree;
  const auto& t = kv.values;
  const int m = static_cast<int>(t.size());
  if (m < 2 * p + 2) throw ParameterError("knot vector too short for its degree");
  if (!std::is_sorted(t.begin(), t.end())) throw ParameterError("knots must be nondecreasing");
  if (!kv.periodic) {
    for (int i = 1; i <= p; ++i) {
      if (t[i] != t[0] || t[m - 1 - i] != t[m - 1]) {
        throw ParameterError("open knot vector must repeat end knots degree+1 times");
      }
    }
    return;
  }
  const int n = kv.dof_count();
  if (n < p + 1) throw ParameterError("periodic knot vector needs at least degree+1 spans");
  const Scalar period = t[n + p] - t[p];
  const Scalar tol = Scalar(1e-12) * std::max<Scalar>(Scalar(1), std::abs(period));
  for (int j = 0; j + n < m; ++j) {
    if (std::abs(t[j + n] - t[j] - period) > tol) {
      throw ParameterError("periodic knot vector does not wrap consistently");
    }
  }
}

enum class BasisKind { LagrangeFE, BSpline };

inline std::string to_string(BasisKind k) {
  return k == BasisKind::LagrangeFE ? "lagrange" : "bspline";
}

/// Active functions at one parameter value.
template <typename Scalar>
struct BasisEval {
  int count = 0;
  std::array<int, kMaxDegree + 1> indices{};
  std::array<Scalar, kMaxDegree + 1> values{};
  std::array<Scalar, kMaxDegree + 1> derivatives{};
};

/// A 1D basis: Lagrange finite elements on equispaced nodes, or B-splines
/// (unit-weight NURBS) over a knot vector. Immutable after construction.
template <typename Scalar>
class BasisFamily {
 public:
  static BasisFamily lagrange(int p, int n_elems, Interval<Scalar> domain, bool periodic) {
    detail::check_degree(p);
    detail::check_interval(domain);
    if (n_elems < 1) throw ParameterError("lagrange basis: n_elems must be >= 1");
    if (periodic && n_elems * p < 2) {
      throw ParameterError("periodic lagrange basis needs at least 2 nodes per period");
    }
    BasisFamily b;
    b.kind_ = BasisKind::LagrangeFE;
    b.degree_ = p;
    b.periodic_ = periodic;
    b.domain_ = domain;
    b.dof_count_ = periodic ? n_elems * p : n_elems * p + 1;
    for (int e = 0; e <= n_elems; ++e) {
      b.breaks_.push_back(e == n_elems ? domain.hi
                                       : domain.lo + domain.length() * Scalar(e) / Scalar(n_elems));
    }
    return b;
  }

  static BasisFamily bspline(KnotVector<Scalar> knots) {
    validate(knots);
    BasisFamily b;
    b.kind_ = BasisKind::BSpline;
    b.degree_ = knots.degree;
    b.periodic_ = knots.periodic;
    b.domain_ = knots.domain();
    b.dof_count_ = knots.dof_count();
    const int m = static_cast<int>(knots.values.size());
    const int p = knots.degree;
    b.breaks_.push_back(knots.values[p]);
    for (int s = p; s < m - p - 1; ++s) {
      if (knots.values[s + 1] > knots.values[s]) {
        b.spans_.push_back(s);
        b.breaks_.push_back(knots.values[s + 1]);
      }
    }
    b.knots_ = std::move(knots);
    return b;
  }

  BasisKind kind() const { return kind_; }
  int degree() const { return degree_; }
  bool periodic() const { return periodic_; }
  int dof_count() const { return dof_count_; }
  int element_count() const { return static_cast<int>(breaks_.size()) - 1; }
  Interval<Scalar> domain() const { return domain_; }
  Interval<Scalar> element(int e) const { return {breaks_.at(e), breaks_.at(e + 1)}; }
  const KnotVector<Scalar>& knots() const { return knots_; }

  /// Element containing u; the right end of the domain belongs to the last element.
  int find_element(Scalar u) const {
    const Scalar tol = Scalar(1e-12) * domain_.length();
    if (u < domain_.lo - tol || u > domain_.hi + tol) {
      throw DomainError("basis evaluation point outside parameter domain");
    }
    const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), u);
    const int e = static_cast<int>(it - breaks_.begin()) - 1;
    return std::clamp(e, 0, element_count() - 1);
  }

  /// Values and first derivatives of the degree+1 functions active on element e.
  BasisEval<Scalar> eval_in_element(int e, Scalar u) const {
    if (e < 0 || e >= element_count()) throw IndexError("element index out of range");
    return kind_ == BasisKind::LagrangeFE ? eval_lagrange(e, u) : eval_bspline(e, u);
  }

  BasisEval<Scalar> eval(Scalar u) const { return eval_in_element(find_element(u), u); }

  /// Greville abscissae (B-splines) or nodes (Lagrange), one per distinct function.
  std::vector<Scalar> greville() const {
    std::vector<Scalar> pts(dof_count_);
    const int p = degree_;
    if (kind_ == BasisKind::LagrangeFE) {
      for (int e = 0; e < element_count(); ++e) {
        const auto [a, b] = element(e);
        for (int i = 0; i <= p; ++i) {
          const int g = e * p + i;
          if (g < dof_count_) pts[g] = a + (b - a) * Scalar(i) / Scalar(p);
        }
      }
      return pts;
    }
    const auto& t = knots_.values;
    for (int i = 0; i < dof_count_; ++i) {
      Scalar s = 0;
      for (int j = 1; j <= p; ++j) s += t[i + j];
      s /= Scalar(p);
      if (periodic_) {
        const Scalar L = domain_.length();
        while (s < domain_.lo) s += L;
        while (s >= domain_.hi) s -= L;
      }
      pts[i] = s;
    }
    return pts;
  }

 private:
  int wrap(int i) const { return periodic_ ? ((i % dof_count_) + dof_count_) % dof_count_ : i; }

  BasisEval<Scalar> eval_lagrange(int e, Scalar u) const {
    const int p = degree_;
    const auto [a, b] = element(e);
    const Scalar h = b - a;
    const Scalar s = Scalar(2) * (u - a) / h - Scalar(1);
    std::array<Scalar, kMaxDegree + 1> nodes{};
    for (int i = 0; i <= p; ++i) nodes[i] = Scalar(-1) + Scalar(2 * i) / Scalar(p);
    BasisEval<Scalar> out;
    out.count = p + 1;
    for (int i = 0; i <= p; ++i) {
      Scalar denom = 1, value = 1, deriv = 0;
      for (int j = 0; j <= p; ++j) {
        if (j == i) continue;
        denom *= nodes[i] - nodes[j];
        value *= s - nodes[j];
        Scalar term = 1;
        for (int m = 0; m <= p; ++m) {
          if (m != i && m != j) term *= s - nodes[m];
        }
        deriv += term;
      }
      out.indices[i] = wrap(e * p + i);
      out.values[i] = value / denom;
      out.derivatives[i] = deriv / denom * Scalar(2) / h;
    }
    return out;
  }

  // Cox–de Boor on the span, keeping the degree p-1 values for the derivative.
  BasisEval<Scalar> eval_bspline(int e, Scalar u) const {
    const int p = degree_;
    const int span = spans_[e];
    const auto& t = knots_.values;
    std::array<Scalar, kMaxDegree + 1> N{}, lower{}, left{}, right{};
    N[0] = 1;
    for (int j = 1; j <= p; ++j) {
      if (j == p) lower = N;
      left[j] = u - t[span + 1 - j];
      right[j] = t[span + j] - u;
      Scalar saved = 0;
      for (int r = 0; r < j; ++r) {
        const Scalar temp = N[r] / (right[r + 1] + left[j - r]);
        N[r] = saved + right[r + 1] * temp;
        saved = left[j - r] * temp;
      }
      N[j] = saved;
    }
    BasisEval<Scalar> out;
    out.count = p + 1;
    for (int a = 0; a <= p; ++a) {
      const int i = span - p + a;
      Scalar d = 0;
      if (a >= 1) {
        const Scalar den = t[i + p] - t[i];
        if (den > 0) d += lower[a - 1] / den;
      }
      if (a <= p - 1) {
        const Scalar den = t[i + p + 1] - t[i + 1];
        if (den > 0) d -= lower[a] / den;
      }
      out.indices[a] = wrap(i);
      out.values[a] = N[a];
      out.derivatives[a] = Scalar(p) * d;
    }
    return out;
  }

  BasisKind kind_ = BasisKind::BSpline;
  int degree_ = 1;
  bool periodic_ = false;
  int dof_count_ = 0;
  Interval<Scalar> domain_{};
  std::vector<Scalar> breaks_;
  std::vector<int> spans_;
  KnotVector<Scalar> knots_;
};

template <typename Scalar>
BasisEval<Scalar> eval_basis(const BasisFamily<Scalar>& basis, Scalar u) {
  return basis.eval(u);
}

template <typename Scalar>
std::vector<Scalar> greville_or_node_points(const BasisFamily<Scalar>& basis) {
  return basis.greville();
}

using Basis = BasisFamily<double>;

/// Convenience constructor used by the mesh and experiment layers.
inline Basis make_basis(BasisKind kind, int p, int n_elems, Interval<double> domain, bool periodic) {
  if (kind == BasisKind::LagrangeFE) return Basis::lagrange(p, n_elems, domain, periodic);
  return Basis::bspline(periodic ? make_periodic_knots(p, n_elems, domain)
                                 : make_open_knots(p, n_elems, domain));
}

}  // namespace fsiga
