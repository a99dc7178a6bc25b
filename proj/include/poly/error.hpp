#pragma once

#include <stdexcept>
#include <string>

namespace poly {

enum class ErrorCode { Parse = 1, Arity = 2, Domain = 3, NotFound = 4, Io = 5 };

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &msg) : std::runtime_error(msg), code_(code) {}
  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

class ParseError : public Error {
public:
  ParseError(int line, int col, const std::string &msg)
      : Error(ErrorCode::Parse, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                    ": " + msg),
        line_(line), col_(col), detail_(msg) {}
  int line() const { return line_; }
  int column() const { return col_; }
  const std::string &detail() const { return detail_; }

private:
  int line_;
  int col_;
  std::string detail_;
};

} // namespace poly
