// Regenerates the shipped data tree.

#include <filesystem>
#include <fstream>
#include <iostream>

#include "veerfix/corpus.hpp"

int main(int argc, char** argv) {
  namespace fs = std::filesystem;
  const fs::path root = argc > 1 ? fs::path(argv[1]) : fs::path(veerfix::data_dir());
  try {
    for (const auto& [rel, text] : veerfix::corpus_files()) {
      fs::path p = root / rel;
      fs::create_directories(p.parent_path());
      std::ofstream(p, std::ios::binary) << text;
      std::cout << p.string() << "\n";
    }
  } catch (const veerfix::Error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  return 0;
}
