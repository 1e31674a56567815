#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace botdetect {

enum class Errc {
  MalformedLine,
  OutOfRange,
  UnknownCall,
  UnsortedInput,
  UnsortedTrace,
  EmptyPopulation,
  NoAntigen,
  EmptySample,
  AllZero,
  LengthMismatch,
  DegenerateSeries,
  TickMismatch,
  InvalidScenario,
  InvalidConfig,
  Io,
};

std::string_view to_string(Errc code);

// All library failures surface as this exception; callers switch on code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace botdetect
