#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace wavedenoise {

enum class ErrorCode {
  FileNotFound,
  UnsupportedFormat,
  CorruptData,
  IoError,
  UnknownWavelet,
  ShapeMismatch,
  DepthTooLarge,
  DomainError,
  EmptySubband,
  ImageTooSmall,
  EmptyCorpus,
  EmptyInput,
  InvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptData: return "CorruptData";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::UnknownWavelet: return "UnknownWavelet";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::DepthTooLarge: return "DepthTooLarge";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::EmptySubband: return "EmptySubband";
    case ErrorCode::ImageTooSmall: return "ImageTooSmall";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library. The code identifies the failure
/// class; what() carries a human-readable message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

class DepthTooLarge : public Error {
 public:
  DepthTooLarge(int requested, int max_depth)
      : Error(ErrorCode::DepthTooLarge,
              "requested depth " + std::to_string(requested) + " exceeds maximum depth " +
                  std::to_string(max_depth)),
        requested_(requested),
        max_depth_(max_depth) {}

  int requested() const noexcept { return requested_; }
  int max_depth() const noexcept { return max_depth_; }

 private:
  int requested_;
  int max_depth_;
};

}  // namespace wavedenoise
