#pragma once

#include <stdexcept>
#include <string>

namespace srt {

// Base class for all library failures so callers can catch them wholesale.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- input / parsing ----

struct ParseError : Error {
  using Error::Error;
};

struct MissingColumnError : ParseError {
  MissingColumnError(std::string column_, const std::string& file)
      : ParseError("missing required column '" + column_ + "' in " + file),
        column(std::move(column_)) {}
  std::string column;
};

struct FrameGapError : ParseError {
  FrameGapError(int track_id_, long frame_)
      : ParseError("track " + std::to_string(track_id_) +
                   ": non-consecutive frame " + std::to_string(frame_)),
        track_id(track_id_), frame(frame_) {}
  int track_id;
  long frame;
};

struct ClassUnknownError : ParseError {
  explicit ClassUnknownError(std::string label_)
      : ParseError("unknown road-user class '" + label_ + "'"),
        label(std::move(label_)) {}
  std::string label;
};

struct SchemaError : Error {
  using Error::Error;
};

// ---- trajectory / scenario extraction ----

struct NoCrossingReachedError : Error {
  explicit NoCrossingReachedError(int track_id_)
      : Error("track " + std::to_string(track_id_) +
              " never reaches the crossing entry line"),
        track_id(track_id_) {}
  int track_id;
};

struct EmptyWindowError : Error {
  using Error::Error;
};

struct NoDecelerationError : Error {
  using Error::Error;
};

struct DegenerateDistanceError : Error {
  using Error::Error;
};

struct NoConflictZoneTransitError : Error {
  explicit NoConflictZoneTransitError(int track_id_)
      : Error("track " + std::to_string(track_id_) +
              " does not transit the conflict zone"),
        track_id(track_id_) {}
  int track_id;
};

// ---- statistics ----

struct InsufficientDataError : Error {
  using Error::Error;
};

struct NonConvergenceError : Error {
  NonConvergenceError(int iterations_, double grad_norm_, std::string trace_)
      : Error("optimizer did not converge after " +
              std::to_string(iterations_) +
              " iterations (gradient max-norm " + std::to_string(grad_norm_) +
              ")"),
        iterations(iterations_), grad_norm(grad_norm_),
        trace(std::move(trace_)) {}
  int iterations;
  double grad_norm;
  std::string trace;  // per-iteration log, one line per step
};

struct SingularHessianError : Error {
  using Error::Error;
};

struct RankDeficientError : Error {
  explicit RankDeficientError(std::string column_)
      : Error("design matrix is rank deficient (column '" + column_ + "')"),
        column(std::move(column_)) {}
  std::string column;
};

struct UnknownLevelError : Error {
  using Error::Error;
};

struct NotNestedError : Error {
  using Error::Error;
};

struct UnknownCoefficientError : Error {
  explicit UnknownCoefficientError(const std::string& name)
      : Error("unknown coefficient '" + name + "'") {}
};

struct ZeroVarianceError : Error {
  explicit ZeroVarianceError(std::string column_)
      : Error("column '" + column_ + "' has zero variance"),
        column(std::move(column_)) {}
  std::string column;
};

struct TooFewPointsError : Error {
  using Error::Error;
};

// Raised by pipeline commands when a step legitimately produces nothing.
struct EmptyResultError : Error {
  using Error::Error;
};

}  // namespace srt
