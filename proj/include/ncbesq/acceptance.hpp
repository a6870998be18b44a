#pragma once

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace ncbesq::acceptance {

struct Options {
    std::uint64_t seed = 20241017;
    std::size_t jobs = 0;  // 0 = default worker count
};

struct Result {
    int id = 0;
    std::string name;
    std::vector<std::string> tags;
    bool pass = false;
    std::string summary;
    nlohmann::json checks = nlohmann::json::array();  // one record per sub-test
    double seconds = 0.0;
};

struct Criterion {
    int id;
    std::string name;
    std::vector<std::string> tags;
    std::function<Result(const Options&)> run;
};

const std::vector<Criterion>& criteria();

// Runs the criteria whose id or tags match one of `select` (all when empty).
// Progress lines "PASS <id> <name> ..." / "FAIL ..." go to `log` when given.
std::vector<Result> run(const std::vector<std::string>& select, const Options& opts, std::ostream* log);

nlohmann::json to_json(const Result& r);

}  // namespace ncbesq::acceptance
