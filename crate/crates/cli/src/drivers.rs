//! Deterministic parallel drivers.
//!
//! Work is split into the same canonical windows the core library uses
//! (enumeration chunks, fixed-size sampling blocks), the windows are
//! evaluated in parallel, and the partial results are combined in window
//! order. Per-window results are exact functions of the window alone, so
//! the combined output is bit-identical at any worker count.

use anyhow::Result;
use num_bigint::BigInt;
use rayon::prelude::*;
use std::sync::Arc;

use fqtrace_core::characters::CharacterFn;
use fqtrace_core::ffield::FieldSpec;
use fqtrace_core::fpoly::monic_count;
use fqtrace_core::glmatrix::{empirical_trace_counts_block, SAMPLE_BLOCK};
use fqtrace_core::sums::{
    assemble_record, char_sum_window, fold_windows, SumRecord, Weight, WeightTable,
};
use fqtrace_core::util::chunk_ranges;

/// `S(n, α)` with the given weight, windows evaluated in parallel and
/// folded in enumeration order.
pub fn char_sum_par(
    alpha: &dyn CharacterFn,
    n: usize,
    weight: Weight,
    table: Option<&WeightTable>,
) -> Result<SumRecord> {
    let total = monic_count(alpha.spec(), n)?;
    let parts = chunk_ranges(total)
        .into_par_iter()
        .map(|(start, end)| char_sum_window(alpha, n, weight, table, start..end))
        .collect::<fqtrace_core::Result<Vec<_>>>()?;
    Ok(assemble_record(alpha, n, weight, fold_windows(parts)))
}

/// Per-value sample counts of `Tr(g^k)` over `samples` draws, blocks run
/// in parallel. Block `b` always consumes stream `b` of the seed, so the
/// counts depend only on `(seed, samples)`.
pub fn empirical_trace_counts_par(
    spec: &Arc<FieldSpec>,
    n: usize,
    k: &BigInt,
    samples: u64,
    seed: u64,
) -> Result<Vec<u64>> {
    let blocks: Vec<(u64, u64)> = (0..samples.div_ceil(SAMPLE_BLOCK))
        .map(|b| (b, SAMPLE_BLOCK.min(samples - b * SAMPLE_BLOCK)))
        .collect();
    let parts = blocks
        .into_par_iter()
        .map(|(block, count)| empirical_trace_counts_block(spec, n, k, seed, block, count))
        .collect::<fqtrace_core::Result<Vec<_>>>()?;
    let mut counts = vec![0u64; spec.q() as usize];
    for part in parts {
        for (slot, c) in counts.iter_mut().zip(&part) {
            *slot += c;
        }
    }
    Ok(counts)
}
