#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kwnet {

// Process exit codes used by the command-line tool.
enum class ExitCode : int { ok = 0, usage = 1, input = 2, analysis = 3 };

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ExitCode code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ExitCode::usage, what) {}
};

// Unreadable, malformed or undecodable input.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ExitCode::input, what) {}
};

class ParseError : public InputError {
 public:
  ParseError(std::string_view source, std::size_t line, const std::string& what)
      : InputError(std::string(source) + ":" + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

// JSON document that does not match the expected schema; `path` names the offending value.
class SchemaError : public InputError {
 public:
  SchemaError(const std::string& path, const std::string& what)
      : InputError(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class AnalysisError : public Error {
 public:
  explicit AnalysisError(const std::string& what) : Error(ExitCode::analysis, what) {}
};

}  // namespace kwnet
