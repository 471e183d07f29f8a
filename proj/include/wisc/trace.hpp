#pragma once

namespace wisc {

// Per-run counters surfaced in CLI reports and used by tests to confirm
// which pipeline branches an instance exercised. All fields are optional
// bookkeeping; passing nullptr everywhere disables tracing.
struct PipelineTrace {
    long atoms_small_alpha = 0;   // atoms settled by direct W_0..W_4 enumeration
    long atoms_elementary = 0;    // atoms routed through colouring + root recovery
    long augments_replaced = 0;
    long permanent_calls = 0;
    long exact_cap_fallbacks = 0; // exact engine refused, chain used instead
    long cutset_stages = 0;
    long modular_leaves = 0;
    long partition_terms = 0;
};

inline void trace_add(PipelineTrace* t, long PipelineTrace::*field, long delta = 1) {
    if (t) (t->*field) += delta;
}

}  // namespace wisc
