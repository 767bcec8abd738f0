#pragma once

namespace schrolab {

/// Command-line front end. Subcommands: gen-mesh, run, validate-mesh,
/// show-report. Returns 0 when every assertion passed, 1 on an assertion
/// failure (or an invalid mesh / failing report) and 2 on usage,
/// configuration or input errors.
int cli_main(int argc, char** argv);

}  // namespace schrolab
