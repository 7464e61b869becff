#ifndef LOOPCAS_RUNNER_HPP
#define LOOPCAS_RUNNER_HPP

#include "loopcas/manifest.hpp"
#include "loopcas/report.hpp"

namespace loopcas {

// Executes the manifest's job; deterministic for a fixed (manifest, seed).
Report run_job(const Manifest& m, int jobs = 1);

// Built-in battery of worked examples; used by `selftest` and as a golden
// regression target.
Report run_selftest();

}  // namespace loopcas

#endif
