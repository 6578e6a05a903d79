// SPDX-License-Identifier: Apache-2.0
//
// Scriptable wire-protocol peer used by the tests. Deliberately standalone:
// it shares no code with the library, so a protocol round trip exercises two
// independent implementations of the format.
//
// Usage: stub_oracle [mode] [--touch FILE]
//   zero        one all-zero sample (default)
//   pattern     num_reads deterministic pseudo-random samples
//   junk-energy all-zero sample with a wrong energy field
//   short-bits  sample whose bits string is one character short
//   malformed   non-JSON output line
//   fail        valid response line, then exit status 7
//   hang        no output until killed
// --touch FILE creates FILE before anything else, proving the process ran.
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>

#include <json.hpp>

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::string pattern_bits(int n, std::uint64_t seed, int read) {
  std::string bits(static_cast<std::size_t>(n), '0');
  std::uint64_t state = splitmix64(seed ^ (0x5bd1e995ULL * static_cast<std::uint64_t>(read + 1)));
  for (int v = 0; v < n; ++v) {
    state = splitmix64(state);
    if (state & 1) bits[static_cast<std::size_t>(v)] = '1';
  }
  return bits;
}

double zero_energy(const nlohmann::json& req) {
  // All-zero assignment: only the offset survives.
  return req.value("offset", 0.0);
}

}  // namespace

int main(int argc, char** argv) {
  std::string mode = "zero";
  std::string touch_file;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--touch" && i + 1 < argc) {
      touch_file = argv[++i];
    } else {
      mode = arg;
    }
  }

  if (!touch_file.empty()) {
    std::ofstream touch(touch_file);
    touch << "launched\n";
  }

  if (mode == "hang") {
    std::this_thread::sleep_for(std::chrono::seconds(3600));
    return 0;
  }

  std::string line;
  if (!std::getline(std::cin, line)) return 1;
  nlohmann::json req;
  try {
    req = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception&) {
    return 1;
  }
  const int n = req.at("n").get<int>();
  const int num_reads = req.value("num_reads", 1);
  const std::uint64_t seed = req.value("seed", std::uint64_t{0});

  if (mode == "malformed") {
    std::puts("this is not a response");
    return 0;
  }
  if (mode == "fail") {
    nlohmann::json resp;
    resp["samples"] = {{{"bits", std::string(static_cast<std::size_t>(n), '0')},
                        {"energy", zero_energy(req)}}};
    std::puts(resp.dump().c_str());
    return 7;
  }

  nlohmann::json samples = nlohmann::json::array();
  if (mode == "zero") {
    samples.push_back({{"bits", std::string(static_cast<std::size_t>(n), '0')},
                       {"energy", zero_energy(req)}});
  } else if (mode == "junk-energy") {
    samples.push_back({{"bits", std::string(static_cast<std::size_t>(n), '0')},
                       {"energy", 123456789.0}});
  } else if (mode == "short-bits") {
    samples.push_back(
        {{"bits", std::string(static_cast<std::size_t>(n > 0 ? n - 1 : 0), '0')},
         {"energy", 0.0}});
  } else if (mode == "pattern") {
    for (int read = 0; read < num_reads; ++read) {
      samples.push_back({{"bits", pattern_bits(n, seed, read)}, {"energy", 0.0}});
    }
  } else {
    std::fprintf(stderr, "unknown mode: %s\n", mode.c_str());
    return 1;
  }

  nlohmann::json resp;
  resp["samples"] = samples;
  std::puts(resp.dump().c_str());
  return 0;
}
