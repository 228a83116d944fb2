#ifndef LABNER_ERROR_HPP
#define LABNER_ERROR_HPP

#include <stdexcept>
#include <string>

namespace labner {

// Base class for all recoverable toolkit errors (bad input data, malformed
// files, misaligned corpora). The CLI maps these to exit code 2.
class error : public std::runtime_error {
public:
  explicit error(const std::string& message) : std::runtime_error(message) {}
};

// Malformed input file. Carries a human-readable location ("file:line")
// prepended to the message when known.
class parse_error : public error {
public:
  explicit parse_error(const std::string& message) : error(message) {}
  parse_error(const std::string& where, std::size_t line, const std::string& message)
      : error(where + ":" + std::to_string(line) + ": " + message) {}
};

}  // namespace labner

#endif  // LABNER_ERROR_HPP
