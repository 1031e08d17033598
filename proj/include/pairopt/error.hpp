#ifndef PAIROPT_ERROR_HPP
#define PAIROPT_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace pairopt {

enum class Errc {
  OddN,
  TooSmall,
  TooLarge,
  NotSymmetric,
  NonZeroDiagonal,
  DimensionMismatch,
  IndexOutOfRange,
  InvalidPairing,
  UnknownDistribution,
  RankDeficient,
  ParseError,
  IoError,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::OddN: return "OddN";
    case Errc::TooSmall: return "TooSmall";
    case Errc::TooLarge: return "TooLarge";
    case Errc::NotSymmetric: return "NotSymmetric";
    case Errc::NonZeroDiagonal: return "NonZeroDiagonal";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InvalidPairing: return "InvalidPairing";
    case Errc::UnknownDistribution: return "UnknownDistribution";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::ParseError: return "ParseError";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

/// Exception carrying a machine-checkable error code alongside the message.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pairopt

#endif  // PAIROPT_ERROR_HPP
