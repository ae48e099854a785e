#pragma once

// Execution policy for the data-parallel kernels. Every kernel has a
// serial reference path that the tests compare against.

namespace cp1 {

enum class Exec { Serial, Parallel };

int max_threads();

}  // namespace cp1
