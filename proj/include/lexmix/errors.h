#ifndef LEXMIX_ERRORS_H_
#define LEXMIX_ERRORS_H_

#include <stdexcept>
#include <string>

namespace lexmix {

// Bad arguments, bad config, failed validation of inputs. Exit code 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

// Data problems encountered mid-run (I/O failure, exhausted stream,
// malformed record). Exit code 3.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace lexmix

#endif  // LEXMIX_ERRORS_H_
