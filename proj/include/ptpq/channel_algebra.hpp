#pragma once

// Linear and nonlinear positive maps on N x N operators: Choi assembly,
// signed operator-sum decomposition, CP/P diagnostics, the builtin nonlinear
// maps, and normalized trace-fixing channels phi(X)/tr[phi(X)].

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "ptpq/matrix_core.hpp"

namespace ptpq::channel {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::DensityMatrix;
using linalg::Index;

inline constexpr double kChoiRankCutoff = 1e-12;
inline constexpr double kCpTol = 1e-10;
inline constexpr double kViolationTol = 1e-8;
inline constexpr double kNormalizableTol = 1e-12;
inline constexpr double kHermitianMapTol = 1e-12;

// A weighted conjugation term  weight * A X A^dagger. For the NINO form the
// weight is a sign zeta = +-1.
struct SignedOperator {
  double weight = 1.0;
  ComplexMatrix op;
};

// A linear map stored by its action on the matrix units: image(i, j) = phi(e_ij).
class LinearMapAction {
 public:
  // Throws "map is not Hermitian" unless phi(e_ij)^dagger = phi(e_ji).
  LinearMapAction(Index dim, std::vector<ComplexMatrix> images);

  template <class F>
  static LinearMapAction from_function(Index dim, F&& f) {
    std::vector<ComplexMatrix> images;
    images.reserve(static_cast<std::size_t>(dim * dim));
    for (Index i = 0; i < dim; ++i) {
      for (Index j = 0; j < dim; ++j) {
        ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
        e(i, j) = 1.0;
        images.push_back(f(e));
      }
    }
    return LinearMapAction(dim, std::move(images));
  }

  static LinearMapAction from_signed_kraus(Index dim, std::span<const SignedOperator> terms);

  Index dim() const { return dim_; }
  const ComplexMatrix& image(Index i, Index j) const { return images_[static_cast<std::size_t>(i * dim_ + j)]; }
  ComplexMatrix apply(const ComplexMatrix& x) const;

  // max over (i, j) of ||image(i,j) - other.image(i,j)||_max
  double max_difference(const LinearMapAction& other) const;

 private:
  Index dim_;
  std::vector<ComplexMatrix> images_;
};

struct ChoiMatrix {
  ComplexMatrix matrix;  // N^2 x N^2, rows/cols indexed by (a, i) -> a*N + i
  Index system_dim() const;
};

// C = sum_ij phi(e_ij) (x) e_ij
ChoiMatrix choi_of(const LinearMapAction& map);

struct OperatorSumTerm {
  double lambda = 0.0;
  ComplexMatrix op;
};

// phi(X) = sum_a lambda_a A_a X A_a^dagger with tr(A_a^dagger A_b) = delta_ab.
class OperatorSumRep {
 public:
  // Throws unless every |lambda| > 1e-12 and the operators are orthonormal to 1e-10.
  OperatorSumRep(Index dim, std::vector<OperatorSumTerm> terms);

  // Canonical representation of sum_a w_a A_a X A_a^dagger (via the Choi matrix).
  static OperatorSumRep from_kraus(Index dim, std::span<const SignedOperator> terms);

  Index dim() const { return dim_; }
  std::size_t rank() const { return terms_.size(); }
  std::span<const OperatorSumTerm> terms() const { return terms_; }

  ComplexMatrix apply(const ComplexMatrix& x) const;
  // F = sum_a lambda_a A_a^dagger A_a; tr[phi(X)] = tr(F X).
  ComplexMatrix trace_operator() const;
  LinearMapAction action() const;

 private:
  Index dim_;
  std::vector<OperatorSumTerm> terms_;
};

// Spectral decomposition of the Choi matrix. Eigenvalues with |lambda| <= 1e-12
// are dropped; each operator's largest-magnitude entry is made real positive.
OperatorSumRep operator_sum_from_choi(const ChoiMatrix& choi);

struct PositivityReport {
  bool is_cp = true;
  double negative_part_norm = 0.0;  // sum of |lambda| over negative Choi eigenvalues
  std::size_t p_violations = 0;     // sampled states with an output eigenvalue < -1e-8
};

PositivityReport positivity_report(const OperatorSumRep& rep, std::span<const DensityMatrix> samples);

enum class BuiltinKind { AffineSquare, PhiPlus, PhiMinus, DetThermal, MeanFieldUnitary };

// The nonlinear positive maps:
//   affine_square       (A^dagger + C X B^dagger)(A + B X C^dagger)    params A, B, C
//   phi_plus/phi_minus  (tr(X) I +- X)^2
//   det_thermal         |det X| I
//   mean_field_unitary  U X U^dagger, U = exp(i tr(A X) B)            params A, B Hermitian
class BuiltinMap {
 public:
  BuiltinMap(BuiltinKind kind, std::vector<ComplexMatrix> params);

  BuiltinKind kind() const { return kind_; }
  std::string_view name() const;
  std::span<const ComplexMatrix> params() const { return params_; }
  ComplexMatrix operator()(const ComplexMatrix& x) const;

 private:
  BuiltinKind kind_;
  std::vector<ComplexMatrix> params_;
};

BuiltinMap builtin_map(std::string_view name, std::vector<ComplexMatrix> params = {});

enum class ChannelClass { LinearTP = 1, NINO = 2, StateDependentTP = 3, GeneralNonlinear = 4 };

std::string_view to_string(ChannelClass c);

// Lambda_phi(X) = phi(X)/tr[phi(X)] for a linear (operator-sum) or builtin nonlinear phi.
class NormalizedChannel {
 public:
  explicit NormalizedChannel(OperatorSumRep linear, std::optional<ChannelClass> label = {});
  explicit NormalizedChannel(BuiltinMap nonlinear, std::optional<ChannelClass> label = {});

  bool is_linear() const { return std::holds_alternative<OperatorSumRep>(phi_); }
  const std::optional<ChannelClass>& class_label() const { return label_; }
  Index dim() const;

  // The unnormalized map phi(X).
  ComplexMatrix raw(const ComplexMatrix& x) const;

 private:
  std::variant<OperatorSumRep, BuiltinMap> phi_;
  std::optional<ChannelClass> label_;
};

// Throws "not normalizable on this input" when tr[phi(X)] <= 1e-12.
DensityMatrix apply_normalized(const NormalizedChannel& channel, const DensityMatrix& x);

// Class from (structural linearity, tr[phi(X)] == 1 within 1e-10 on every sample).
ChannelClass classify(const NormalizedChannel& channel, std::span<const DensityMatrix> samples);

}  // namespace ptpq::channel
