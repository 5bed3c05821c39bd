#pragma once

#include <functional>
#include <iosfwd>

#include "config.hpp"
#include "ricciglue/errors.hpp"

namespace ricciglue::app {

enum ExitCode : int {
    kOk = 0,
    kConfigError = 1,
    kHypothesis = 2,
    kExhausted = 3,
    kSelftestFailed = 4,
    kInternal = 5,
};

int exit_code(ErrorKind kind);

/// Each command writes its artifacts under cfg.output_dir and one summary line to `out`.
int cmd_glue(const RunConfig& cfg, std::ostream& out);
int cmd_ellipsoid(const RunConfig& cfg, std::ostream& out);
int cmd_family(const RunConfig& cfg, std::ostream& out);
int cmd_selftest(const RunConfig& cfg, std::ostream& out);

/// Validates cfg, runs the command and turns library errors into exit codes (message to `err`).
int run_command(const std::function<int(const RunConfig&, std::ostream&)>& cmd, const RunConfig& cfg,
                std::ostream& out, std::ostream& err);

}  // namespace ricciglue::app
