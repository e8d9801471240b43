#include "ptpq/channel_algebra.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <type_traits>

#include "ptpq/errors.hpp"

namespace ptpq::channel {

namespace {

double max_abs(const ComplexMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

// Rotate the global phase so the largest-magnitude entry is real and positive.
void fix_phase(ComplexMatrix& a) {
  const double largest = max_abs(a);
  if (largest == 0.0) return;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      if (std::abs(a(i, j)) >= largest * (1.0 - 1e-9)) {
        a *= std::conj(a(i, j)) / std::abs(a(i, j));
        return;
      }
    }
  }
}

}  // namespace

LinearMapAction::LinearMapAction(Index dim, std::vector<ComplexMatrix> images) : dim_(dim), images_(std::move(images)) {
  if (dim_ < 1) throw ValidationError("LinearMapAction: dimension must be positive");
  if (images_.size() != static_cast<std::size_t>(dim_ * dim_)) {
    throw ValidationError("LinearMapAction: expected N^2 images");
  }
  double scale = 1.0;
  for (const auto& img : images_) {
    if (img.rows() != dim_ || img.cols() != dim_) throw ValidationError("LinearMapAction: image has wrong dimensions");
    scale = std::max(scale, max_abs(img));
  }
  for (Index i = 0; i < dim_; ++i) {
    for (Index j = 0; j < dim_; ++j) {
      const double asym = (image(i, j).adjoint() - image(j, i)).cwiseAbs().maxCoeff();
      if (asym > kHermitianMapTol * scale) throw ValidationError("map is not Hermitian");
    }
  }
}

LinearMapAction LinearMapAction::from_signed_kraus(Index dim, std::span<const SignedOperator> terms) {
  for (const auto& t : terms) {
    if (t.op.rows() != dim || t.op.cols() != dim) throw ValidationError("operator-sum term has wrong dimensions");
  }
  return from_function(dim, [&](const ComplexMatrix& e) {
    ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
    for (const auto& t : terms) out += t.weight * t.op * e * t.op.adjoint();
    return out;
  });
}

ComplexMatrix LinearMapAction::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw ValidationError("LinearMapAction::apply: wrong input dimensions");
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (Index i = 0; i < dim_; ++i) {
    for (Index j = 0; j < dim_; ++j) out += x(i, j) * image(i, j);
  }
  return out;
}

double LinearMapAction::max_difference(const LinearMapAction& other) const {
  if (other.dim_ != dim_) throw ValidationError("max_difference: dimension mismatch");
  double worst = 0.0;
  for (std::size_t k = 0; k < images_.size(); ++k) worst = std::max(worst, max_abs(images_[k] - other.images_[k]));
  return worst;
}

Index ChoiMatrix::system_dim() const {
  const auto n = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(matrix.rows()))));
  return n;
}

ChoiMatrix choi_of(const LinearMapAction& map) {
  const Index n = map.dim();
  ComplexMatrix c = ComplexMatrix::Zero(n * n, n * n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const ComplexMatrix& img = map.image(i, j);
      // (phi(e_ij) (x) e_ij)_{(a,i),(a',j)} = phi(e_ij)_{a a'}
      for (Index a = 0; a < n; ++a) {
        for (Index ap = 0; ap < n; ++ap) c(a * n + i, ap * n + j) += img(a, ap);
      }
    }
  }
  return {std::move(c)};
}

OperatorSumRep::OperatorSumRep(Index dim, std::vector<OperatorSumTerm> terms) : dim_(dim), terms_(std::move(terms)) {
  if (dim_ < 1) throw ValidationError("OperatorSumRep: dimension must be positive");
  if (terms_.size() > static_cast<std::size_t>(dim_ * dim_)) throw ValidationError("OperatorSumRep: more than N^2 terms");
  for (std::size_t a = 0; a < terms_.size(); ++a) {
    const auto& ta = terms_[a];
    if (ta.op.rows() != dim_ || ta.op.cols() != dim_) throw ValidationError("OperatorSumRep: operator has wrong dimensions");
    if (!(std::abs(ta.lambda) > kChoiRankCutoff)) throw ValidationError("OperatorSumRep: zero weight term");
    for (std::size_t b = 0; b <= a; ++b) {
      const Complex overlap = (terms_[b].op.adjoint() * ta.op).trace();
      const double expected = a == b ? 1.0 : 0.0;
      if (std::abs(overlap - expected) > kCpTol) throw ValidationError("OperatorSumRep: operators are not orthonormal");
    }
  }
}

OperatorSumRep OperatorSumRep::from_kraus(Index dim, std::span<const SignedOperator> terms) {
  return operator_sum_from_choi(choi_of(LinearMapAction::from_signed_kraus(dim, terms)));
}

ComplexMatrix OperatorSumRep::apply(const ComplexMatrix& x) const {
  if (x.rows() != dim_ || x.cols() != dim_) throw ValidationError("OperatorSumRep::apply: wrong input dimensions");
  ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& t : terms_) out += t.lambda * t.op * x * t.op.adjoint();
  return out;
}

ComplexMatrix OperatorSumRep::trace_operator() const {
  ComplexMatrix f = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& t : terms_) f += t.lambda * t.op.adjoint() * t.op;
  return f;
}

LinearMapAction OperatorSumRep::action() const {
  return LinearMapAction::from_function(dim_, [this](const ComplexMatrix& e) { return apply(e); });
}

OperatorSumRep operator_sum_from_choi(const ChoiMatrix& choi) {
  const Index n = choi.system_dim();
  if (n * n != choi.matrix.rows() || choi.matrix.rows() != choi.matrix.cols()) {
    throw ValidationError("operator_sum_from_choi: Choi matrix must be N^2 x N^2");
  }
  if (linalg::hermiticity_error(choi.matrix) > kCpTol * std::max(1.0, max_abs(choi.matrix))) {
    throw ValidationError("operator_sum_from_choi: Choi matrix is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(choi.matrix);
  if (solver.info() != Eigen::Success) throw NumericalError("operator_sum_from_choi: eigensolver failed");

  std::vector<OperatorSumTerm> terms;
  // Descending eigenvalue order: positive (phi_>) part first.
  for (Index k = solver.eigenvalues().size() - 1; k >= 0; --k) {
    const double lambda = solver.eigenvalues()(k);
    if (std::abs(lambda) <= kChoiRankCutoff) continue;
    ComplexMatrix a(n, n);
    for (Index i = 0; i < n; ++i) {
      for (Index j = 0; j < n; ++j) a(i, j) = solver.eigenvectors()(i * n + j, k);
    }
    fix_phase(a);
    terms.push_back({lambda, std::move(a)});
  }
  return OperatorSumRep(n, std::move(terms));
}

PositivityReport positivity_report(const OperatorSumRep& rep, std::span<const DensityMatrix> samples) {
  PositivityReport report;
  for (const auto& t : rep.terms()) {
    if (t.lambda < -kCpTol) report.is_cp = false;
    if (t.lambda < 0.0) report.negative_part_norm += -t.lambda;
  }
  for (const auto& x : samples) {
    ComplexMatrix y = rep.apply(x.matrix());
    y = (y + y.adjoint()).eval() / 2.0;
    if (linalg::hermitian_eigenvalues(y).minCoeff() < -kViolationTol) ++report.p_violations;
  }
  return report;
}

std::string_view to_string(ChannelClass c) {
  switch (c) {
    case ChannelClass::LinearTP: return "LinearTP";
    case ChannelClass::NINO: return "NINO";
    case ChannelClass::StateDependentTP: return "StateDependentTP";
    case ChannelClass::GeneralNonlinear: return "GeneralNonlinear";
  }
  return "?";
}

NormalizedChannel::NormalizedChannel(OperatorSumRep linear, std::optional<ChannelClass> label)
    : phi_(std::move(linear)), label_(label) {}

NormalizedChannel::NormalizedChannel(BuiltinMap nonlinear, std::optional<ChannelClass> label)
    : phi_(std::move(nonlinear)), label_(label) {}

Index NormalizedChannel::dim() const {
  if (const auto* rep = std::get_if<OperatorSumRep>(&phi_)) return rep->dim();
  const auto& map = std::get<BuiltinMap>(phi_);
  return map.params().empty() ? 0 : map.params().front().rows();
}

ComplexMatrix NormalizedChannel::raw(const ComplexMatrix& x) const {
  return std::visit([&](const auto& phi) -> ComplexMatrix {
    if constexpr (std::is_same_v<std::decay_t<decltype(phi)>, OperatorSumRep>) {
      return phi.apply(x);
    } else {
      return phi(x);
    }
  }, phi_);
}

DensityMatrix apply_normalized(const NormalizedChannel& channel, const DensityMatrix& x) {
  ComplexMatrix y = channel.raw(x.matrix());
  const Complex tr = y.trace();
  if (!(tr.real() > kNormalizableTol) || !std::isfinite(tr.real())) {
    throw ValidationError("not normalizable on this input");
  }
  y /= tr.real();
  if (linalg::hermiticity_error(y) > 1e-9 * std::max(1.0, max_abs(y))) {
    throw ValidationError("map is not Hermitian");
  }
  y = (y + y.adjoint()).eval() / 2.0;
  return DensityMatrix(std::move(y));
}

ChannelClass classify(const NormalizedChannel& channel, std::span<const DensityMatrix> samples) {
  if (samples.empty()) throw ValidationError("classify: at least one sample is required");
  bool trace_preserving = true;
  for (const auto& x : samples) {
    if (std::abs(channel.raw(x.matrix()).trace() - Complex{1.0, 0.0}) > linalg::kTraceTol) {
      trace_preserving = false;
      break;
    }
  }
  if (channel.is_linear()) return trace_preserving ? ChannelClass::LinearTP : ChannelClass::NINO;
  return trace_preserving ? ChannelClass::StateDependentTP : ChannelClass::GeneralNonlinear;
}

}  // namespace ptpq::channel
