// config.hpp — strict JSON configuration parsing and command runners
//
// Every key is unit-annotated (suffix names the unit) and every section is
// closed with an unknown-key check, so typos fail loudly instead of being
// ignored. Runners write their outputs plus a normalized copy of the parsed
// config into the output directory; with a fixed config and seed the bytes
// are identical run to run.
#pragma once

#include "bjj/errors.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace bjj::config {

using json = nlohmann::json;

json load_file(const std::string& path);

// View over one JSON object that tracks which keys were consumed.
class Section {
  public:
    Section(const json& j, std::string path);

    bool has(const char* key) const;
    double number(const char* key);
    double number_or(const char* key, double fallback);
    long long integer(const char* key);
    long long integer_or(const char* key, long long fallback);
    bool flag_or(const char* key, bool fallback);
    std::string text(const char* key);
    std::string text_or(const char* key, const std::string& fallback);
    std::vector<double> number_list(const char* key);
    Section child(const char* key);
    Section child_or_empty(const char* key);

    // rejects keys that were never consumed
    void done();

    const std::string& path() const { return path_; }

  private:
    const json* j_;
    std::string path_;
    std::vector<std::string> seen_;
    static const json empty_;

    const json& fetch(const char* key);
    [[noreturn]] void fail(const std::string& msg) const;
};

struct RunContext {
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int threads = 0; // 0 keeps the runtime default
};

void apply_thread_count(int threads);

int run_ground(const json& cfg, const RunContext& ctx);
int run_evolve(const json& cfg, const RunContext& ctx);
int run_semiclassical(const json& cfg, const RunContext& ctx);
int run_sweep(const json& cfg, const RunContext& ctx);
int run_rates(const json& cfg, const RunContext& ctx);
int run_lifetime(const json& cfg, const RunContext& ctx);

} // namespace bjj::config
