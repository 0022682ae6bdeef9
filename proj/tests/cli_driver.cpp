// Integration checks for the CLI surface: exit codes, JSON schema fields,
// CSV shape, and agreement with the in-process oracles. Takes the binary
// path as argv[1].

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qproc/oracle.hpp"

namespace {

int failures = 0;

void expect(bool pass, const std::string& what) {
    std::printf("%s %s\n", pass ? "ok  " : "FAIL", what.c_str());
    if (!pass) ++failures;
}

struct CliRun {
    int status = -1;
    std::string output;
};

CliRun run_cli(const std::string& cli, const std::string& args, bool keep_stderr = false) {
    CliRun result;
    const std::string cmd = cli + " " + args + (keep_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return result;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) result.output.append(buf, got);
    const int rc = pclose(pipe);
    result.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return result;
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) lines.push_back(line);
    return lines;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: cli_driver <path-to-qproc-cli>\n");
        return 2;
    }
    const std::string cli = argv[1];

    {
        const CliRun run = run_cli(cli, "connectivity --dim 3 --p 0.5 --exact");
        expect(run.status == 0, "exact connectivity exits 0");
        const auto doc = nlohmann::json::parse(run.output, nullptr, false);
        expect(!doc.is_discarded(), "exact connectivity emits JSON");
        if (!doc.is_discarded()) {
            expect(doc["command"] == "connectivity", "envelope carries the command");
            expect(doc.contains("version") && doc.contains("config") &&
                       doc.contains("provenance") && doc.contains("duration_ms"),
                   "envelope carries version/config/provenance/duration_ms");
            expect(doc["result"]["method"] == "exact", "result method is exact");
            const double probability = doc["result"]["probability"].get<double>();
            expect(probability == qproc::exact_connectivity_probability(3, 0.5),
                   "probability equals the in-process oracle value");
            expect(doc["duration_ms"].get<std::uint64_t>() == 0,
                   "duration_ms is 0 without --timing");
        }
    }

    expect(run_cli(cli, "connectivity --dim 0 --p 0.5").status == 2,
           "dimension 0 exits 2");
    expect(run_cli(cli, "connectivity --dim 4 --p 0.5 --exact").status == 2,
           "exact cap d<=3 enforced with exit 2");
    expect(run_cli(cli, "connectivity --dim 3 --p 1.5 --exact").status == 2,
           "probability outside [0,1] exits 2");
    expect(run_cli(cli, "hitting --dim 3").status == 2, "missing --seed exits 2");
    expect(run_cli(cli, "hitting --dim 3 --seed 0").status == 2,
           "--seed 0 is rejected as ambiguous");
    expect(run_cli(cli, "nonsense --dim 3").status == 2, "unknown command exits 2");
    expect(run_cli(cli, "hitting --dim 3 --seed 4 --bogus").status == 2,
           "unknown flag exits 2");
    expect(run_cli(cli, "verify --dim 5").status == 2, "verify cap d<=4 exits 2");
    expect(run_cli(cli, "--help").status == 0, "--help exits 0");

    {
        const CliRun run = run_cli(cli, "verify --dim 4");
        expect(run.status == 0, "verify --dim 4 exits 0");
        const auto doc = nlohmann::json::parse(run.output, nullptr, false);
        expect(!doc.is_discarded() &&
                   doc["result"]["total_violations"].get<std::uint64_t>() == 0,
               "verify --dim 4 reports zero violations");
        expect(!doc.is_discarded() && doc["result"]["sweeps"].size() == 3,
               "verify reports all three sweeps");
        expect(!doc.is_discarded() &&
                   doc["result"]["trees"]["root_independent"].get<bool>(),
               "verify reports root-independent tree counts");
    }

    {
        const CliRun run = run_cli(cli, "process --dim 3 --seed 9 --emit-order");
        expect(run.status == 0, "process exits 0");
        const auto doc = nlohmann::json::parse(run.output, nullptr, false);
        if (!doc.is_discarded()) {
            const std::uint64_t tau_d = doc["result"]["tau_d"].get<std::uint64_t>();
            const std::uint64_t tau_c = doc["result"]["tau_c"].get<std::uint64_t>();
            expect(tau_d >= 1 && tau_d <= tau_c && tau_c >= 7 && tau_c <= 12,
                   "trace hitting times are ordered and in range");
            expect(doc["result"]["order"].size() == 12, "emitted order has all 12 edges");
            expect(doc["result"]["provenance"]["master_seed"] == 9 &&
                       doc["result"]["provenance"]["label"] == "process",
                   "trace embeds its seed provenance");
        } else {
            expect(false, "process emits JSON");
        }
    }

    {
        const CliRun run =
            run_cli(cli, "bounds --dim 4 --dim 8 --p 0.4 --p 0.5 --format csv");
        expect(run.status == 0, "bounds csv exits 0");
        const auto lines = split_lines(run.output);
        expect(lines.size() == 5, "bounds csv has header plus 4 grid rows");
        if (!lines.empty())
            expect(lines[0].rfind("dim,p,eps,", 0) == 0, "bounds csv header starts with dim,p,eps");
        for (const auto& line : lines) {
            std::size_t commas = 0;
            for (char ch : line) commas += ch == ',';
            expect(commas == 9, "bounds csv row has 10 fields");
        }
    }

    {
        const CliRun run = run_cli(cli, "hitting --dim 4 --trials 200 --seed 3 --format csv");
        expect(run.status == 0, "hitting csv exits 0");
        const auto lines = split_lines(run.output);
        expect(lines.size() == 2 && lines[0].rfind("command,", 0) == 0,
               "hitting csv is header plus one row");
    }

    {
        const CliRun run = run_cli(
            cli, "tworound --dim 3 --p 0.45 --epsilon 0.05 --trials 20000 --seed 5");
        expect(run.status == 0, "tworound exits 0 when the chi-square test passes");
        const auto doc = nlohmann::json::parse(run.output, nullptr, false);
        expect(!doc.is_discarded() && doc["result"]["chi_square_ok"].get<bool>(),
               "tworound reports chi_square_ok");
        expect(!doc.is_discarded() && doc["result"]["per_edge_frequency"].size() == 12,
               "tworound reports per-edge frequencies");
    }

    {
        const CliRun run =
            run_cli(cli, "census --dim 6 --p 0.45 --trials 50 --seed 11");
        expect(run.status == 0, "census exits 0");
        const auto doc = nlohmann::json::parse(run.output, nullptr, false);
        expect(!doc.is_discarded() && doc["result"].contains("verdict_rate") &&
                   doc["result"].contains("min_giant_fraction"),
               "census reports verdict rate and aggregates");
    }

    {
        const CliRun timed = run_cli(cli, "process --dim 3 --seed 9 --timing");
        const auto doc = nlohmann::json::parse(timed.output, nullptr, false);
        expect(!doc.is_discarded() && doc.contains("duration_ms"),
               "--timing embeds a duration_ms field");
    }

    if (failures == 0) {
        std::printf("all cli integration checks passed\n");
        return 0;
    }
    std::printf("%d cli integration checks FAILED\n", failures);
    return 1;
}
