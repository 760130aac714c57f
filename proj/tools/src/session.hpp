#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "stm/adams.hpp"

namespace stmtoda {

using nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& msg);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// An engine failure while executing the command on `line`.
class CommandError : public std::runtime_error {
 public:
  CommandError(int line, const std::string& command, const std::string& msg);
  int line() const { return line_; }

 private:
  int line_;
};

struct Token {
  std::string text;
  int column = 1;
};

struct Command {
  int line = 0;
  std::string name;
  std::vector<Token> args;
  std::string source;
};

struct Session {
  std::optional<stm::Ring> ring;
  std::vector<std::string> order;  // declaration order of modules and maps
  std::map<std::string, stm::RModule> modules;
  std::map<std::string, stm::StableMap> maps;
  std::vector<Command> commands;
};

struct RunOptions {
  std::uint64_t max_enumerate = stm::kDefaultEnumerationCap;
  std::uint64_t seed = 1;
};

// Parses and validates a session; declarations are checked as they are read.
Session parse_session(const std::string& text);
// Executes every command in order and returns the {ring, objects, results} document.
json run_session(const Session& session, const RunOptions& opts);
// Plain-text tables for a report produced by run_session.
std::string render_text(const json& report);

}  // namespace stmtoda
