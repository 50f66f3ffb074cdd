#pragma once

namespace monex {

// Kernel execution mode. Every parallel kernel has a serial reference path
// that produces bit-identical results; tests compare the two directly.
enum class Exec { serial, parallel };

int thread_count(Exec mode);

}  // namespace monex
