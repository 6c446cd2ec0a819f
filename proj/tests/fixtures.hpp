#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "attackmap/catalog.hpp"

namespace fixtures {

inline std::string data_path(const std::string& name) { return std::string(ATTACKMAP_DATA_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline attackmap::ComponentRegistry shipped_registry() {
  return attackmap::load_registry(read_file(data_path("components.csv")));
}

inline attackmap::Catalog shipped_catalog() {
  return attackmap::load_catalog(read_file(data_path("patterns.txt")), shipped_registry());
}

// Six groups, one member each except Repudiation.
inline std::string minimal_groups() {
  return "group: 1\nmember: Authenticator,Blakley2004\n"
         "group: 2\nmember: Secure Pipe,Steel2005\n"
         "group: 3\n"
         "group: 4\nmember: Secure Logger,Steel2005\n"
         "group: 5\nmember: Standby,Blakley2004\n"
         "group: 6\nmember: Limited View,Blakley2004\n";
}

inline attackmap::ComponentRegistry small_registry() {
  attackmap::ComponentRegistry r;
  r.add("User", 1);
  r.add("Server", 2);
  r.add("Log", 58);
  r.add("HardDrive", 42);
  return r;
}

}  // namespace fixtures
