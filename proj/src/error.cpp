#include "botdetect/error.hpp"

namespace botdetect {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::MalformedLine: return "MalformedLine";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::UnknownCall: return "UnknownCall";
    case Errc::UnsortedInput: return "UnsortedInput";
    case Errc::UnsortedTrace: return "UnsortedTrace";
    case Errc::EmptyPopulation: return "EmptyPopulation";
    case Errc::NoAntigen: return "NoAntigen";
    case Errc::EmptySample: return "EmptySample";
    case Errc::AllZero: return "AllZero";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::DegenerateSeries: return "DegenerateSeries";
    case Errc::TickMismatch: return "TickMismatch";
    case Errc::InvalidScenario: return "InvalidScenario";
    case Errc::InvalidConfig: return "InvalidConfig";
    case Errc::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace botdetect
