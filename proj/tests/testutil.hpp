#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "tact/parser.hpp"
#include "tact/state.hpp"

namespace tact::test {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string repo_path(const std::string& rel) {
#ifdef TACT_SOURCE_DIR
  return std::string(TACT_SOURCE_DIR) + "/" + rel;
#else
  return rel;
#endif
}

/// The request/response example: requester delays 3, request leg takes 8,
/// response leg takes 5.
inline const char* kRequestResponseSource = R"tam(
reactiveclass Requester(5) {
  knownrebecs { Responder res; }
  msgsrv Requester() { self.request(); }
  msgsrv request() { delay(3); res.request() after(8); }
  msgsrv response() { self.request(); }
}
reactiveclass Responder(5) {
  knownrebecs { Requester req; }
  msgsrv Responder() { }
  msgsrv request() { req.response() after(5); }
}
main {
  Requester req(res):();
  Responder res(req):();
}
)tam";

inline LinkedModel link_fixture() { return LinkedModel(parse_model(kRequestResponseSource)); }

/// Deterministic RNG for property tests; honor TACT_SEED when set.
inline std::uint64_t test_seed(std::uint64_t fallback = 20260809ull) {
  if (const char* s = std::getenv("TACT_SEED")) {
    return static_cast<std::uint64_t>(std::strtoull(s, nullptr, 10));
  }
  return fallback;
}

struct Xoroshiro {
  std::uint64_t a, b;
  explicit Xoroshiro(std::uint64_t seed) : a(seed ^ 0x9e3779b97f4a7c15ull), b(seed | 1) {
    for (int i = 0; i < 10; ++i) next();
  }
  std::uint64_t next() {
    std::uint64_t x = a, y = b;
    a = y;
    x ^= x << 23;
    b = x ^ y ^ (x >> 17) ^ (y >> 26);
    return b + y;
  }
  std::int64_t range(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }
  bool chance(double p) { return (next() % 10000) < static_cast<std::uint64_t>(p * 10000); }
};

}  // namespace tact::test
