/*
 * Copyright 2026 The ultrazero Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ultrazero {

enum class Errc {
  // metric_core
  MalformedInput,
  DuplicateLabel,
  NonZeroDiagonal,
  NonSymmetric,
  NegativeOrZeroOffDiagonal,
  TriangleViolation,
  GaugeNotMonotone,
  GaugeNotPositive,
  ResultNotMetric,
  NotUltrametric,
  ConeHeightTooSmall,
  // scale_analysis
  InputMismatch,
  OracleSizeExceeded,
  // lomega_embed
  NotThreePowerValued,
  // retract
  EmptySubset,
  BadParameters,
  // locfin_groups
  DigitOutOfRange,
  RadiusExceedsSpec,
  IndexConditionFails,
  NotPrime,
  NotBinarySpec,
  // archipelago
  SizeNotInLambda,
  DiameterTooSmall,
  NotArchipelagoShaped,
};

constexpr std::string_view to_string(Errc e) noexcept {
  switch (e) {
    case Errc::MalformedInput: return "MalformedInput";
    case Errc::DuplicateLabel: return "DuplicateLabel";
    case Errc::NonZeroDiagonal: return "NonZeroDiagonal";
    case Errc::NonSymmetric: return "NonSymmetric";
    case Errc::NegativeOrZeroOffDiagonal: return "NegativeOrZeroOffDiagonal";
    case Errc::TriangleViolation: return "TriangleViolation";
    case Errc::GaugeNotMonotone: return "GaugeNotMonotone";
    case Errc::GaugeNotPositive: return "GaugeNotPositive";
    case Errc::ResultNotMetric: return "ResultNotMetric";
    case Errc::NotUltrametric: return "NotUltrametric";
    case Errc::ConeHeightTooSmall: return "ConeHeightTooSmall";
    case Errc::InputMismatch: return "InputMismatch";
    case Errc::OracleSizeExceeded: return "OracleSizeExceeded";
    case Errc::NotThreePowerValued: return "NotThreePowerValued";
    case Errc::EmptySubset: return "EmptySubset";
    case Errc::BadParameters: return "BadParameters";
    case Errc::DigitOutOfRange: return "DigitOutOfRange";
    case Errc::RadiusExceedsSpec: return "RadiusExceedsSpec";
    case Errc::IndexConditionFails: return "IndexConditionFails";
    case Errc::NotPrime: return "NotPrime";
    case Errc::NotBinarySpec: return "NotBinarySpec";
    case Errc::SizeNotInLambda: return "SizeNotInLambda";
    case Errc::DiameterTooSmall: return "DiameterTooSmall";
    case Errc::NotArchipelagoShaped: return "NotArchipelagoShaped";
  }
  return "Unknown";
}

/// Structured rejection raised by every module. `indices` carries the
/// witnessing point (or summand/island) indices, in the order the error
/// kind documents.
class Error : public std::runtime_error {
public:
  Error(Errc code, std::string message, std::vector<std::size_t> indices = {})
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code),
        indices_(std::move(indices)) {}

  Errc code() const noexcept { return code_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }

private:
  Errc code_;
  std::vector<std::size_t> indices_;
};

}  // namespace ultrazero
