#include "ncbesq/acceptance.hpp"
#include "ncbesq/commands.hpp"
#include "ncbesq/parallel.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

using nlohmann::json;
namespace cmd = ncbesq::commands;

namespace {

json load_config(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) throw cmd::UsageError("cannot open config '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw cmd::UsageError("config '" + path + "' is not valid JSON: " + e.what());
    }
}

// Writes to --out when given, else stdout. Files are opened in binary mode so bytes are exact.
void write_output(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
        std::cout << data << std::flush;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw cmd::UsageError("cannot write '" + path + "'");
    f << data;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Noncolliding squared Bessel processes: kernels, simulation and checks"};
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv";
    std::optional<std::uint64_t> seed, trials;
    std::optional<double> dt;
    std::size_t jobs = ncbesq::parallel::default_jobs();
    std::vector<std::string> tags;

    auto common = [&](CLI::App* s, bool need_config) {
        auto* c = s->add_option("--config", config_path, "JSON configuration file");
        if (need_config) c->required();
        s->add_option("--out", out_path, "output file (default stdout)");
        s->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        s->add_option("--jobs", jobs, "worker threads (default NCBESQ_JOBS or hardware)")->check(CLI::PositiveNumber);
    };

    auto* ke = app.add_subcommand("kernel-eval", "tabulate a transition density");
    common(ke, true);
    auto* sim = app.add_subcommand("simulate", "simulate paths");
    common(sim, true);
    sim->add_option("--seed", seed, "base seed");
    sim->add_option("--trials", trials, "number of trials");
    sim->add_option("--dt", dt, "Euler step")->check(CLI::PositiveNumber);
    auto* ver = app.add_subcommand("verify", "run the acceptance criteria");
    ver->add_option("--seed", seed, "base seed");
    ver->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);
    ver->add_option("--tag", tags, "criterion id or tag to run (repeatable)");
    ver->add_option("--out", out_path, "JSON report file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (ke->parsed()) {
            const json cfg = load_config(config_path);
            std::ostringstream out;
            const bool ok = cmd::kernel_eval(cfg, cmd::parse_format(format), out, std::cerr);
            write_output(out_path, out.str());
            return ok ? 0 : 1;
        }
        if (sim->parsed()) {
            json cfg = load_config(config_path);
            if (!cfg.is_object()) throw cmd::UsageError("config must be a JSON object");
            if (seed) cfg["seed"] = *seed;
            if (trials) cfg["trials"] = *trials;
            if (dt) cfg["dt"] = *dt;
            std::ostringstream out;
            cmd::simulate(cfg, cmd::parse_format(format), jobs, out);
            write_output(out_path, out.str());
            return 0;
        }
        ncbesq::acceptance::Options opts;
        if (seed) opts.seed = *seed;
        opts.jobs = jobs;
        for (const auto& t : tags) {
            bool known = false;
            for (const auto& c : ncbesq::acceptance::criteria()) {
                known = known || t == std::to_string(c.id);
                for (const auto& ct : c.tags) known = known || t == ct;
            }
            if (!known) throw cmd::UsageError("unknown criterion or tag '" + t + "'");
        }
        const auto results = ncbesq::acceptance::run(tags, opts, &std::cout);
        bool all = true;
        json report = {{"seed", opts.seed}, {"criteria", json::array()}};
        for (const auto& r : results) {
            all = all && r.pass;
            report["criteria"].push_back(ncbesq::acceptance::to_json(r));
        }
        report["pass"] = all;
        if (!out_path.empty()) {
            std::ostringstream s;
            cmd::write_json(report, s);
            s << '\n';
            write_output(out_path, s.str());
        }
        return all ? 0 : 1;
    } catch (const cmd::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
