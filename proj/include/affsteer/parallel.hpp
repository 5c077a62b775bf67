#pragma once

namespace affsteer {

// Worker threads the parallel kernels may use (1 without OpenMP).
int max_threads();

// Caps the OpenMP thread count at $STEER_THREADS when it is set to a positive
// integer. Returns the resulting cap.
int apply_thread_cap_from_env();

void set_max_threads(int n);

}  // namespace affsteer
