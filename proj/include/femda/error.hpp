// Copyright 2026 The femda Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FEMDA__ERROR_HPP_
#define FEMDA__ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace femda
{

/// Failure categories raised by the library. Every throw site uses femda::Error
/// so callers can branch on the code instead of parsing messages.
enum class Errc
{
  InvalidArgument,
  NotSymmetric,
  NotPositiveDefinite,
  DimensionMismatch,
  EmptyCluster,
  SingletonCluster,
  InvalidDimension,
  QuadratureFailure,
  MissingNu,
  LengthMismatch,
  EmptyInput,
  ZeroTruthNorm,
  CountMismatch,
  ParseError,
  RaggedRows,
  EmptyFile,
  RankDeficient,
  ClassMissingFromTrain,
  IoError,
  ConfigError,
};

inline constexpr std::string_view errc_name(Errc code) noexcept
{
  switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NotPositiveDefinite: return "NotPositiveDefinite";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::EmptyCluster: return "EmptyCluster";
    case Errc::SingletonCluster: return "SingletonCluster";
    case Errc::InvalidDimension: return "InvalidDimension";
    case Errc::QuadratureFailure: return "QuadratureFailure";
    case Errc::MissingNu: return "MissingNu";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::ZeroTruthNorm: return "ZeroTruthNorm";
    case Errc::CountMismatch: return "CountMismatch";
    case Errc::ParseError: return "ParseError";
    case Errc::RaggedRows: return "RaggedRows";
    case Errc::EmptyFile: return "EmptyFile";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::ClassMissingFromTrain: return "ClassMissingFromTrain";
    case Errc::IoError: return "IoError";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

class Error : public std::runtime_error
{
public:
  Error(Errc code, const std::string & what)
  : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code)
  {
  }

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string & what) { throw Error(code, what); }

}  // namespace femda

#endif  // FEMDA__ERROR_HPP_
