#ifndef DISF_ERRORS_HPP
#define DISF_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace disf {

enum class ErrorCode {
  io,
  parse,
  invalid_argument,
  precondition,
  one_sided_correspondence,
  singular_system,
  degenerate_aperture,
  degenerate,
  internal,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(ErrorCode::parse, msg) {}
};

// Correspondence search produced fewer than the required pairs on one finger.
struct OneSidedCorrespondence : Error {
  OneSidedCorrespondence(int finger, const std::string& msg)
      : Error(ErrorCode::one_sided_correspondence, msg), finger_index(finger) {}
  int finger_index;  // 1 or 2, the starved finger
};

struct SingularSystem : Error {
  explicit SingularSystem(const std::string& msg)
      : Error(ErrorCode::singular_system, msg) {}
};

// All projected object normals are perpendicular to the finger axis.
struct DegenerateAperture : Error {
  explicit DegenerateAperture(const std::string& msg)
      : Error(ErrorCode::degenerate_aperture, msg) {}
};

}  // namespace disf

#endif
