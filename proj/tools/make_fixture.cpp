// Writes the synthetic end-to-end fixture into a directory.

#include "newsflow/error.hpp"
#include "newsflow/fixture.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
  CLI::App app{"write the synthetic fixture"};
  std::string dir = "fixture";
  newsflow::fixture::FixtureOptions opt;
  app.add_option("dir", dir, "target directory")->capture_default_str();
  app.add_option("--symbols", opt.n_symbols)->capture_default_str();
  app.add_option("--days", opt.n_days)->capture_default_str();
  app.add_option("--seed", opt.seed)->capture_default_str();
  CLI11_PARSE(app, argc, argv);
  try {
    std::cout << newsflow::fixture::write_fixture(dir, opt).string() << '\n';
  } catch (const newsflow::Error& e) {
    std::cerr << "error: " << newsflow::errc_name(e.code()) << ": " << e.what() << '\n';
    return 2;
  }
  return 0;
}
