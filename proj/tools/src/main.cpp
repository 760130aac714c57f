#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "session.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Toda brackets and Adams differentials in stable module categories of F_p[x]/x^m"};
  std::string path;
  bool as_json = false;
  stmtoda::RunOptions opts;
  app.add_option("session", path, "Session file")->required();
  app.add_flag("--json", as_json, "Print the report as one JSON document");
  app.add_option("--max-enumerate", opts.max_enumerate, "Largest set a command may enumerate")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", opts.seed, "Seed for randomized commands")->capture_default_str();
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  std::ifstream in(path);
  if (!in) {
    std::cerr << path << ": cannot open session file\n";
    return 2;
  }
  std::stringstream buf;
  buf << in.rdbuf();

  stmtoda::Session session;
  try {
    session = stmtoda::parse_session(buf.str());
  } catch (const stmtoda::ParseError& e) {
    std::cerr << path << ":" << e.what() << "\n";
    return 2;
  }
  try {
    const stmtoda::json report = stmtoda::run_session(session, opts);
    std::cout << (as_json ? report.dump(2) + "\n" : stmtoda::render_text(report));
  } catch (const stmtoda::CommandError& e) {
    std::cerr << path << ": " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << path << ": internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
