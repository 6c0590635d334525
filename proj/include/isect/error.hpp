#pragma once

#include <stdexcept>
#include <string>

namespace isect {

enum class Errc {
  NotPrime,
  OrderTooLarge,
  DivisionByZero,
  FieldMismatch,
  TooLarge,
  DimensionMismatch,
  ProjectCenterItself,
  DuplicatePoints,
  DegreeTooLarge,
  RankDeficient,
  CodeMismatch,
  NotInCode,
  InconsistentConstraints,
  BadParameters,
  NotRegular,
  NonnegativeSpectrum,
  WeakEKRFails,
  ModulePropertyFails,
  BadApex,
  FormulaMismatch,
  BadSpectrum,
  ZeroPolynomial,
  NotAScheme,
  TableMismatch,
  NotConstant,
  BadRelationSet,
  VerificationFailed,
  Timeout,
  BadInput,
};

inline const char* errc_name(Errc e) {
  switch (e) {
    case Errc::NotPrime: return "NotPrime";
    case Errc::OrderTooLarge: return "OrderTooLarge";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::TooLarge: return "TooLarge";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::ProjectCenterItself: return "ProjectCenterItself";
    case Errc::DuplicatePoints: return "DuplicatePoints";
    case Errc::DegreeTooLarge: return "DegreeTooLarge";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::CodeMismatch: return "CodeMismatch";
    case Errc::NotInCode: return "NotInCode";
    case Errc::InconsistentConstraints: return "InconsistentConstraints";
    case Errc::BadParameters: return "BadParameters";
    case Errc::NotRegular: return "NotRegular";
    case Errc::NonnegativeSpectrum: return "NonnegativeSpectrum";
    case Errc::WeakEKRFails: return "WeakEKRFails";
    case Errc::ModulePropertyFails: return "ModulePropertyFails";
    case Errc::BadApex: return "BadApex";
    case Errc::FormulaMismatch: return "FormulaMismatch";
    case Errc::BadSpectrum: return "BadSpectrum";
    case Errc::ZeroPolynomial: return "ZeroPolynomial";
    case Errc::NotAScheme: return "NotAScheme";
    case Errc::TableMismatch: return "TableMismatch";
    case Errc::NotConstant: return "NotConstant";
    case Errc::BadRelationSet: return "BadRelationSet";
    case Errc::VerificationFailed: return "VerificationFailed";
    case Errc::Timeout: return "Timeout";
    case Errc::BadInput: return "BadInput";
  }
  return "Unknown";
}

/// Every failure in the library is reported through this type; code() tells
/// callers which contract was violated.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace isect
