#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

namespace ultra {

/// Base for all library errors. Carries a stable machine-readable code and a
/// JSON detail object (witnesses: violating triples, offending values, ...).
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message,
        nlohmann::ordered_json details = nlohmann::ordered_json::object())
      : std::runtime_error(code + ": " + message),
        code_(std::move(code)),
        details_(std::move(details)) {}

  const std::string& code() const { return code_; }
  const nlohmann::ordered_json& details() const { return details_; }

 private:
  std::string code_;
  nlohmann::ordered_json details_;
};

#define ULTRA_DEFINE_ERROR(NAME)                                        \
  struct NAME : Error {                                                 \
    explicit NAME(const std::string& message,                           \
                  nlohmann::ordered_json details =                      \
                      nlohmann::ordered_json::object())                 \
        : Error(#NAME, message, std::move(details)) {}                  \
  }

ULTRA_DEFINE_ERROR(InvalidArgument);
ULTRA_DEFINE_ERROR(ParseError);

// values
ULTRA_DEFINE_ERROR(OutOfRange);
ULTRA_DEFINE_ERROR(NoCoinitiality);
ULTRA_DEFINE_ERROR(EmptyPositivePart);
ULTRA_DEFINE_ERROR(DomainError);

// core
ULTRA_DEFINE_ERROR(TriangleViolation);
ULTRA_DEFINE_ERROR(NotInRangeSet);
ULTRA_DEFINE_ERROR(ZeroOffDiagonal);
ULTRA_DEFINE_ERROR(UnknownPoint);

// amalgam
ULTRA_DEFINE_ERROR(DuplicateLabel);
ULTRA_DEFINE_ERROR(HypothesisViolation);
ULTRA_DEFINE_ERROR(BoundViolation);

// extend
ULTRA_DEFINE_ERROR(DisjointnessViolation);

// embed
ULTRA_DEFINE_ERROR(RankDeficient);

// telescope
ULTRA_DEFINE_ERROR(DiameterViolation);
ULTRA_DEFINE_ERROR(TailNotFound);

// generic
ULTRA_DEFINE_ERROR(TooSmall);
ULTRA_DEFINE_ERROR(ApproximationImpossible);
ULTRA_DEFINE_ERROR(NoWitnessFound);

#undef ULTRA_DEFINE_ERROR

}  // namespace ultra
