#pragma once

#include <Eigen/Core>

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>

namespace gheat {

/// A real-valued function on the vertices of a graph, indexed 0..n-1.
using Field = Eigen::VectorXd;

/// Error categories surfaced by the library. The CLI maps each to a
/// distinct exit code.
enum class errc {
    invalid_parameter = 1,
    parse_error,
    asymmetric_weights,
    nonpositive_measure,
    disconnected_graph,
    unknown_vertex,
    dimension_mismatch,
    size_over_cap,
    eigensolver_failure,
    truncation_insufficient,
    degenerate_fit,
    singular_evaluation,
    divergence,
    malformed_input,
    io_error,
};

inline std::string_view errc_name(errc c) {
    switch (c) {
        case errc::invalid_parameter: return "invalid_parameter";
        case errc::parse_error: return "parse_error";
        case errc::asymmetric_weights: return "asymmetric_weights";
        case errc::nonpositive_measure: return "nonpositive_measure";
        case errc::disconnected_graph: return "disconnected_graph";
        case errc::unknown_vertex: return "unknown_vertex";
        case errc::dimension_mismatch: return "dimension_mismatch";
        case errc::size_over_cap: return "size_over_cap";
        case errc::eigensolver_failure: return "eigensolver_failure";
        case errc::truncation_insufficient: return "truncation_insufficient";
        case errc::degenerate_fit: return "degenerate_fit";
        case errc::singular_evaluation: return "singular_evaluation";
        case errc::divergence: return "divergence";
        case errc::malformed_input: return "malformed_input";
        case errc::io_error: return "io_error";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    errc code() const { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& message) {
    throw error(code, message);
}

inline void require(bool condition, errc code, const std::string& message) {
    if (!condition) fail(code, message);
}

/// Shortest round-trip decimal form of a double. Deterministic: all file
/// emitters go through this so identical inputs yield identical bytes.
inline std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

/// Write content to path via a sibling temp file plus rename, so readers
/// never observe a half-written file.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path(), ec);
        if (ec) fail(errc::io_error, "cannot create directory " + path.parent_path().string());
    }
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(errc::io_error, "cannot open " + tmp.string() + " for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) fail(errc::io_error, "write to " + tmp.string() + " failed");
    }
    fs::rename(tmp, path, ec);
    if (ec) fail(errc::io_error, "cannot rename " + tmp.string() + " to " + path.string());
}

/// Counter-free deterministic uniform doubles in [0,1). Built on
/// mt19937_64 so streams keyed by (seed, stream) are reproducible and
/// schedule-independent.
class SplitRng {
public:
    SplitRng(std::uint64_t seed, std::uint64_t stream) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
        engine_.seed(seq);
    }

    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    std::uint64_t next_u64() { return engine_(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace gheat
