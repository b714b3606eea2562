#pragma once

#include <stdexcept>
#include <string>

namespace rkbench {

// Contract violations and bad arguments.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Text input that does not match a file grammar. Carries the source name,
// 1-based line and the grammar production that was expected there.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, std::string expected,
             std::string found = {})
      : Error(format(source, line, expected, found)),
        source_(std::move(source)),
        line_(line),
        expected_(std::move(expected)) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  const std::string& expected() const noexcept { return expected_; }

 private:
  static std::string format(const std::string& source, std::size_t line,
                            const std::string& expected,
                            const std::string& found) {
    std::string msg = source + ":" + std::to_string(line) + ": expected " +
                      expected;
    if (!found.empty()) msg += ", found '" + found + "'";
    return msg;
  }

  std::string source_;
  std::size_t line_;
  std::string expected_;
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw Error(what);
}

}  // namespace rkbench
