#ifndef FORGE_ERRORS_HPP_
#define FORGE_ERRORS_HPP_

#include <stdexcept>  // for runtime_error
#include <string>     // for string

namespace forge {

  // Base of every exception thrown by the library.
  class Error : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
  };

  // An argument violates a documented precondition.
  class PreconditionError : public Error {
   public:
    using Error::Error;
  };

  // A brute-force or enumeration cap would be exceeded.
  class CapExceeded : public Error {
   public:
    using Error::Error;
  };

  // A lazy object was asked about something its staging plan does not
  // reach.
  class CoverageError : public Error {
   public:
    using Error::Error;
  };

  // Malformed textual input (JSON, vertex names, index lists).
  class ParseError : public Error {
   public:
    using Error::Error;
  };

}  // namespace forge

#endif  // FORGE_ERRORS_HPP_
