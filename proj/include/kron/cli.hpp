#pragma once

namespace kron {

// Full command-line front end: parses argv, dispatches to the module
// pipelines, writes the CSV report and JSON sidecar (plus optional SVG).
// Returns the process exit code: 0 all contracts pass, 1 usage error,
// 2 contract violation or runtime failure.
int run_cli(int argc, const char* const* argv);

}  // namespace kron
