#pragma once

#include <stdexcept>
#include <string>

namespace irbl {

enum class Errc {
  // config / usage
  ConfigError,
  UnknownLanguage,
  LeakageGuard,
  // data
  MissingField,
  MalformedTimestamp,
  DuplicateId,
  UnreadableSource,
  EmptyHistory,
  EmptyCorpus,
  NoLinkedCommits,
  EmptyIndex,
  EmptySnapshot,
  EmptyTruth,
  EmptySample,
  TooFewBugs,
  SingleClass,
  NonFinite,
  ZeroVariance,
  LengthMismatch,
  InsufficientOverlap,
  // internal
  InvariantViolation,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

  // Process exit status buckets used by the CLI: 1 config, 2 data, 3 invariant.
  int exit_status() const noexcept {
    switch (code_) {
      case Errc::ConfigError:
      case Errc::UnknownLanguage:
      case Errc::LeakageGuard:
        return 1;
      case Errc::InvariantViolation:
        return 3;
      default:
        return 2;
    }
  }

private:
  Errc code_;
};

}  // namespace irbl
