#pragma once

namespace priorpaint::cli {

// Exit codes: 0 success, 1 usage/config error, 2 missing dependency,
// 3 runtime or training failure.
int run(int argc, const char* const* argv);

}  // namespace priorpaint::cli
