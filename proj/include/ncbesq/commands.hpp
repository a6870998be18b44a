#pragma once

#include <json.hpp>

#include <iosfwd>
#include <stdexcept>
#include <string>

namespace ncbesq::commands {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Format { Csv, Json };
Format parse_format(const std::string& s);

// Floats are written with 17 significant digits; non-finite values become null / nan.
std::string format_double(double v);
void write_json(const nlohmann::json& j, std::ostream& out);

// Tabulate a kernel on a grid. Returns false when a requested check (symmetry) fails.
bool kernel_eval(const nlohmann::json& cfg, Format fmt, std::ostream& out, std::ostream& log);

// Simulate trials of one target; output rows are ordered by trial and time.
void simulate(const nlohmann::json& cfg, Format fmt, std::size_t jobs, std::ostream& out);

}  // namespace ncbesq::commands
