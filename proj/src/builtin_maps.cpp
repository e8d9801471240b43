#include <cmath>
#include <sstream>

#include "ptpq/channel_algebra.hpp"
#include "ptpq/errors.hpp"

namespace ptpq::channel {

namespace {

std::size_t expected_params(BuiltinKind kind) {
  switch (kind) {
    case BuiltinKind::AffineSquare: return 3;
    case BuiltinKind::MeanFieldUnitary: return 2;
    case BuiltinKind::PhiPlus:
    case BuiltinKind::PhiMinus:
    case BuiltinKind::DetThermal: return 0;
  }
  return 0;
}

}  // namespace

BuiltinMap::BuiltinMap(BuiltinKind kind, std::vector<ComplexMatrix> params) : kind_(kind), params_(std::move(params)) {
  if (params_.size() != expected_params(kind_)) {
    std::ostringstream os;
    os << "builtin map " << name() << " expects " << expected_params(kind_) << " matrix parameters, got "
       << params_.size();
    throw ValidationError(os.str());
  }
  for (const auto& p : params_) {
    if (p.rows() != p.cols() || p.rows() != params_.front().rows() || p.rows() < 1) {
      throw ValidationError("builtin map " + std::string(name()) + ": parameters must be square and of equal dimension");
    }
  }
  if (kind_ == BuiltinKind::MeanFieldUnitary) {
    for (const auto& p : params_) {
      if (linalg::hermiticity_error(p) > linalg::kHermitianTol) {
        throw ValidationError("builtin map mean_field_unitary: A and B must be Hermitian");
      }
    }
  }
}

std::string_view BuiltinMap::name() const {
  switch (kind_) {
    case BuiltinKind::AffineSquare: return "affine_square";
    case BuiltinKind::PhiPlus: return "phi_plus";
    case BuiltinKind::PhiMinus: return "phi_minus";
    case BuiltinKind::DetThermal: return "det_thermal";
    case BuiltinKind::MeanFieldUnitary: return "mean_field_unitary";
  }
  return "?";
}

ComplexMatrix BuiltinMap::operator()(const ComplexMatrix& x) const {
  if (x.rows() != x.cols()) throw ValidationError("builtin map: input must be square");
  if (!params_.empty() && x.rows() != params_.front().rows()) {
    throw ValidationError("builtin map " + std::string(name()) + ": input dimension does not match parameters");
  }
  const Index n = x.rows();
  switch (kind_) {
    case BuiltinKind::AffineSquare: {
      const auto& a = params_[0];
      const auto& b = params_[1];
      const auto& c = params_[2];
      return (a.adjoint() + c * x * b.adjoint()) * (a + b * x * c.adjoint());
    }
    case BuiltinKind::PhiPlus:
    case BuiltinKind::PhiMinus: {
      const double sign = kind_ == BuiltinKind::PhiPlus ? 1.0 : -1.0;
      const ComplexMatrix base = x.trace() * linalg::identity(n) + sign * x;
      return base * base;
    }
    case BuiltinKind::DetThermal:
      return std::abs(x.determinant()) * linalg::identity(n);
    case BuiltinKind::MeanFieldUnitary: {
      // The rotation angle is the real expectation tr(AX); U(X) = U(X^dagger).
      const double mean = (params_[0] * x).trace().real();
      const ComplexMatrix u = linalg::matrix_exponential(Complex{0.0, mean} * params_[1]);
      return u * x * u.adjoint();
    }
  }
  throw ValidationError("builtin map: unknown kind");
}

BuiltinMap builtin_map(std::string_view name, std::vector<ComplexMatrix> params) {
  if (name == "affine_square") return BuiltinMap(BuiltinKind::AffineSquare, std::move(params));
  if (name == "phi_plus") return BuiltinMap(BuiltinKind::PhiPlus, std::move(params));
  if (name == "phi_minus") return BuiltinMap(BuiltinKind::PhiMinus, std::move(params));
  if (name == "det_thermal") return BuiltinMap(BuiltinKind::DetThermal, std::move(params));
  if (name == "mean_field_unitary") return BuiltinMap(BuiltinKind::MeanFieldUnitary, std::move(params));
  throw ValidationError("unknown builtin map '" + std::string(name) + "'");
}

}  // namespace ptpq::channel
