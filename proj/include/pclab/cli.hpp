#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pclab/constants.hpp"
#include "pclab/report.hpp"

namespace pclab::cli {

/// Exit codes shared by every subcommand.
enum ExitCode : int { kOk = 0, kGateFailed = 1, kUsage = 2 };

struct RunConfig {
    std::uint64_t seed = 42;
    std::size_t samples = 100000;
    std::size_t chunk_size = kDefaultChunkSize;
    report::Format format = report::Format::csv;
    std::optional<std::string> out;

    /// Throws std::invalid_argument unless samples >= 2 and chunk_size >= 1.
    void validate() const;
    McConfig mc(std::uint64_t stream_offset = 0) const;
};

/// "a..b" (inclusive) or "a,b,c". Throws std::invalid_argument.
std::vector<int> parse_dims(const std::string& spec);

/// Each command writes its report to `out` and diagnostics to `err`.
int cmd_lambda(constants::Space space, const std::vector<int>& dims, const RunConfig& cfg, double quad_tol,
               std::ostream& out, std::ostream& err);

int cmd_weingarten(const std::vector<int>& dims, const RunConfig& cfg, std::ostream& out, std::ostream& err);

enum class RudinStart { skewed, identity };
int cmd_rudin(int n, RudinStart start, const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Checks `trials` random Ginibre matrices, or `matrix` alone when given.
int cmd_duality(int n, int trials, const std::optional<ComplexMatrix>& matrix, const RunConfig& cfg,
                std::ostream& out, std::ostream& err);

enum class HarmonicsAction { evaluate, bidegree, laplacian, project };
int cmd_harmonics(HarmonicsAction action, const std::string& poly_path, const std::optional<std::string>& at_path,
                  const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command-line entry point: parses argv, dispatches, writes the report
/// to stdout or atomically to --out.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// Writes `content` to `path` via a temporary file and rename, so readers
/// never observe a partial file.
void write_atomically(const std::string& path, const std::string& content);

} // namespace pclab::cli
