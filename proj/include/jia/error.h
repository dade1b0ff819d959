#ifndef JIA_ERROR_H_
#define JIA_ERROR_H_

#include <stdexcept>
#include <string>

namespace jia {

// Malformed input data or an invalid configuration.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A file could not be opened, read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace jia

#endif  // JIA_ERROR_H_
