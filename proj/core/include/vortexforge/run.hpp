#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

namespace vortex {

/// Flat key=value configuration (one key per line, `#` starts a comment).
/// Typed getters parse on access; require_* variants throw
/// std::invalid_argument naming the missing or malformed key, which run()
/// maps to exit code 1.
class RunConfig {
public:
    static RunConfig from_file(const std::filesystem::path& path);
    static RunConfig from_text(std::string_view text);

    bool has(const std::string& key) const;
    void set(const std::string& key, std::string value);

    std::string get_string(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    bool get_bool(const std::string& key, bool fallback) const;

    std::string require_string(const std::string& key) const;
    double require_double(const std::string& key) const;
    int require_int(const std::string& key) const;

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

/// Executes one configured run (modes: minimize, mpass, refine, verify,
/// sweep, quadcheck), writing profile.csv / report.json / path_history.csv /
/// sweep_summary.csv under the configured output directory.
///
/// Returns process exit status: 0 on success, 1 on invalid configuration or
/// unreadable inputs (with a one-line diagnostic on stderr), 2 on solver
/// non-convergence or failed verification.
int run(const RunConfig& config);

} // namespace vortex
