/* ergocert — geometric-ergodicity certificates for finite Markov chains
 * Copyright (c) 2026 the ergocert authors
 * SPDX-License-Identifier: MIT
 */

#include "ergocert/core.hpp"

namespace ergocert {

const char* err_name(Err e) noexcept {
  switch (e) {
    case Err::NegativeEntry: return "NegativeEntry";
    case Err::RowSumOutOfTolerance: return "RowSumOutOfTolerance";
    case Err::DimensionMismatch: return "DimensionMismatch";
    case Err::NotIrreducible: return "NotIrreducible";
    case Err::NotProbability: return "NotProbability";
    case Err::ZeroStationaryMass: return "ZeroStationaryMass";
    case Err::NormEvaluation: return "NormEvaluation";
    case Err::EmptySet: return "EmptySet";
    case Err::KappaBeyondRadius: return "KappaBeyondRadius";
    case Err::NotReversible: return "NotReversible";
    case Err::SNotSmall: return "SNotSmall";
    case Err::VBelowOne: return "VBelowOne";
    case Err::MeasureNotInLp: return "MeasureNotInLp";
    case Err::EmptyWindow: return "EmptyWindow";
    case Err::BadParameters: return "BadParameters";
  }
  return "UnknownError";
}

}  // namespace ergocert
