// Regenerates the committed fixtures under tests/fixtures.
// Usage: make_fixtures <fixture-dir>

#include <fstream>
#include <iostream>

#include "sipg/coordinator.hpp"
#include "sipg/transport.hpp"
#include "support/golden.hpp"
#include "support/sessions.hpp"

namespace {

void write(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
  std::cout << path << " (" << text.size() << " bytes)\n";
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures <fixture-dir>\n";
    return 2;
  }
  const std::string dir = argv[1];
  sipg::Coordinator coordinator(fixtures::tinyScenario(), sipg::wire::Variant::Sync1A);
  write(dir + "/golden_transcript.txt", sipg::formatTranscript(golden::scriptedSession(coordinator)));
  write(dir + "/async_session.ndjson", sessions::asyncSession(sipg::defaultScenario()).toNdjson());
  return 0;
}
