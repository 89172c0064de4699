#pragma once

namespace ctgboost {

/// Worker thread cap. Defaults to CTG_BOOST_THREADS when set, otherwise
/// the OpenMP default.
int worker_threads();

/// Overrides the worker cap for the current process; 0 restores the default.
void set_worker_threads(int n);

}  // namespace ctgboost
