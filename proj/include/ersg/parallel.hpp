#pragma once

#include <functional>

namespace ersg {

// Resolves a thread-count request: 0 means "auto", which honors the
// ERSG_THREADS environment variable and otherwise uses the hardware count.
// The result is clamped to [1, 64].
int resolve_threads(int requested);

// Runs fn(i) for i in [0, n) on up to `threads` workers. Work items are
// handed out through a shared counter; each item must write only to its own
// slots so results do not depend on scheduling. Exceptions are captured and
// the first one is rethrown on the calling thread.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace ersg
