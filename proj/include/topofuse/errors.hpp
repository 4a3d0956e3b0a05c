#pragma once

#include <stdexcept>
#include <string>

namespace topofuse {

enum class Errc {
  EmptyInput,
  InvalidCopy,
  DuplicateConflict,
  SizeLimit,
  TooLarge,
  NotConflicting,
  InconsistentObservation,
  SingularCovariance,
  NoRoute,
  BadConfig,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::InvalidCopy: return "InvalidCopy";
    case Errc::DuplicateConflict: return "DuplicateConflict";
    case Errc::SizeLimit: return "SizeLimit";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotConflicting: return "NotConflicting";
    case Errc::InconsistentObservation: return "InconsistentObservation";
    case Errc::SingularCovariance: return "SingularCovariance";
    case Errc::NoRoute: return "NoRoute";
    case Errc::BadConfig: return "BadConfig";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace topofuse
