#pragma once

#include <stdexcept>
#include <string>

namespace iod {

enum class Errc {
  MalformedAddress,
  UnknownElement,
  UnknownDrone,
  UnknownTask,
  NoPath,
  NoContingency,
  PerformanceInsufficient,
  AccessDenied,
  NotOnPathway,
  NoCompatibleStation,
  NoCandidates,
  Unreachable,
  AlreadyClaimed,
  ParseError,
  ValidationFailed,
  MalformedTrace,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::MalformedAddress: return "MalformedAddress";
    case Errc::UnknownElement: return "UnknownElement";
    case Errc::UnknownDrone: return "UnknownDrone";
    case Errc::UnknownTask: return "UnknownTask";
    case Errc::NoPath: return "NoPath";
    case Errc::NoContingency: return "NoContingency";
    case Errc::PerformanceInsufficient: return "PerformanceInsufficient";
    case Errc::AccessDenied: return "AccessDenied";
    case Errc::NotOnPathway: return "NotOnPathway";
    case Errc::NoCompatibleStation: return "NoCompatibleStation";
    case Errc::NoCandidates: return "NoCandidates";
    case Errc::Unreachable: return "Unreachable";
    case Errc::AlreadyClaimed: return "AlreadyClaimed";
    case Errc::ParseError: return "ParseError";
    case Errc::ValidationFailed: return "ValidationFailed";
    case Errc::MalformedTrace: return "MalformedTrace";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace iod
