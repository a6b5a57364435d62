#include "ergomix/shift_demo.hpp"

#include <algorithm>
#include <cmath>

#include "ergomix/errors.hpp"
#include "ergomix/parallel.hpp"

namespace ergomix::shift {

namespace {

AlgebraShape shape_for(int d, TraceMode mode) {
  if (d < 2) throw DomainError("truncated shift needs d >= 2");
  return mode == TraceMode::normalized ? AlgebraShape::normalized(d) : AlgebraShape::single(d);
}

bool is_zero(const Element& x) { return x.block(0).cwiseAbs().maxCoeff() == 0.0; }

}  // namespace

TruncatedShift::TruncatedShift(int d, TraceMode mode) : d_(d), mode_(mode), shape_(shape_for(d, mode)) {}

Element TruncatedShift::apply(const Element& x) const {
  if (!(x.shape() == shape_)) throw ShapeMismatch("element does not live on Mat(d)");
  Element y = Element::zero(shape_);
  for (int k = 0; k + 2 < d_; ++k) y.block(0)(k + 1, k + 1) = x.block(0)(k, k);
  return y;
}

SuperOperator TruncatedShift::superoperator() const {
  return SuperOperator::from_action(
      shape_, [this](const Element& x) { return apply(x); },
      ShiftRecipe{d_, mode_ == TraceMode::normalized}, true);
}

Element TruncatedShift::basis_state(int k) const {
  return Element::matrix_unit(shape_, 0, k, k) / shape_.block(0).weight;
}

TruncatedShift build(int d, TraceMode mode) { return TruncatedShift(d, mode); }

std::vector<ProfilePoint> escape_profile(const TruncatedShift& t, const Element& y) {
  std::vector<ProfilePoint> out;
  Element x = y;
  for (int n = 0; n < t.dim(); ++n) {
    out.push_back({n, trace_norm(x)});
    x = t.apply(x);
  }
  return out;
}

NoFixedPointCertificate no_fixed_point_certificate(const TruncatedShift& t) {
  const int d = t.dim();
  NoFixedPointCertificate c;

  int index = 0;
  for (int r = 0; r < d; ++r) {
    for (int col = 0; col < d; ++col) {
      Element x = Element::matrix_unit(t.shape(), 0, r, col);
      int m = 0;
      while (!is_zero(x)) {
        x = t.apply(x);
        ++m;
      }
      index = std::max(index, m);
    }
  }
  c.nilpotency_index = index;
  c.spectral_radius = 0.0;  // nilpotent

  // ||sum_{n < m} T^n|| is attained at a pure state on a basis vector; the
  // off-diagonal part of a pure state only feeds the n = 0 term.
  double neumann = 0.0;
  for (int j = 0; j < d; ++j) {
    Element x = t.basis_state(j);
    double total = 0.0;
    for (int n = 0; n < index; ++n) {
      total += trace_norm(x);
      x = t.apply(x);
    }
    neumann = std::max(neumann, total);
  }
  c.value = 1.0 / neumann;

  // Uniform weight on slots 1 .. d-1 loses exactly 1/(d-1) per step.
  Element x = Element::zero(t.shape());
  for (int k = 0; k < d - 1; ++k) x += t.basis_state(k);
  x = x / trace_norm(x);
  c.attained = trace_norm(t.apply(x) - x);
  return c;
}

std::vector<DegenerationRow> smoothing_degeneration(const std::vector<int>& dims,
                                                    const std::vector<double>& epsilons) {
  std::vector<std::vector<DegenerationRow>> per_dim(dims.size());
  parallel_for(dims.size(), [&](std::size_t i) {
    const TruncatedShift t(dims[i], TraceMode::normalized);
    std::vector<Element> orbit{t.basis_state(0)};
    for (int n = 1; n < t.dim(); ++n) orbit.push_back(t.apply(orbit.back()));
    SmoothingConfig config;
    config.random_projectors = 16;
    config.seed = static_cast<std::uint64_t>(dims[i]);
    const SmoothingResult r = smoothing_from_orbit(orbit, epsilons, config);
    for (const auto& row : r.table) per_dim[i].push_back({dims[i], row.epsilon, row.delta_max});
  });
  std::vector<DegenerationRow> out;
  for (auto& rows : per_dim) out.insert(out.end(), rows.begin(), rows.end());
  return out;
}

}  // namespace ergomix::shift
