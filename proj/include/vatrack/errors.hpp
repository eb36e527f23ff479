#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vatrack {

struct DegenerateBox : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InvalidN : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonFinite : std::domain_error {
  using std::domain_error::domain_error;
};

struct DegenerateRegion : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct NonNormalized : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MissingImage : std::logic_error {
  using std::logic_error::logic_error;
};

struct SingularInnovation : std::domain_error {
  using std::domain_error::domain_error;
};

struct ZeroMass : std::domain_error {
  using std::domain_error::domain_error;
};

struct MalformedRow : std::runtime_error {
  MalformedRow(const std::string& what, std::size_t line_number)
      : std::runtime_error(what + " (line " + std::to_string(line_number) + ")"),
        line(line_number) {}
  std::size_t line;
};

struct UnsupportedFormat : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmptyGroundTruth : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct MissingPath : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace vatrack
