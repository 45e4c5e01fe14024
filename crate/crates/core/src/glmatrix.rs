//! Invertible matrices over `F_q`: exactly uniform sampling, characteristic
//! polynomials, traces of arbitrary powers `Tr(g^k)`, the exact probability
//! mass `P_GL` of a characteristic polynomial, and the trace distributions
//! built from it.
//!
//! The bridge to the polynomial side is
//! `p_i(det(I_n T − g)) = Tr(g^i)`: every trace statistic of a uniform
//! `g ∈ GL_n(F_q)` is a statistic of a random monic polynomial drawn from
//! the `P_GL` measure. [`trace_power`] computes `Tr(g^k)` through that
//! bridge (so `k` may have thousands of bits, positive or negative), and
//! [`trace_matrix_power`] keeps the literal matrix-power route as an
//! oracle.
//!
//! Exact distributions use big-rational masses so that normalization and
//! point-mass statements are identities, not tolerance checks. Empirical
//! sampling draws from a seedable stream-splittable generator in fixed
//! blocks of [`SAMPLE_BLOCK`] samples — block `b` always uses stream `b`
//! of the seed, so results are reproducible at any worker count.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::characters::{IotaTransformed, PowerTraceCharacter, ShortIntervalCharacter};
use crate::dist::{Provenance, TraceDistribution};
use crate::ffield::{AdditiveCharacter, FieldElement, FieldSpec};
use crate::fpoly::powersum::{newton_full, power_sum_full};
use crate::fpoly::{
    for_each_monic_range, irreducible_count, monic_count, power_sum, Factorizer, MonicPoly,
};
use crate::sums::{char_sum, Weight};
use crate::util::chunk_ranges;
use crate::{Error, Result};

/// Tolerance for float comparisons of quantities that are exact in math.
const TOL: f64 = 1e-9;

/// Number of samples drawn from one RNG stream; empirical experiments
/// advance to stream `b` for block `b` regardless of which worker runs it.
pub const SAMPLE_BLOCK: u64 = 4096;

// ---------------------------------------------------------------------------
// Matrices

/// An invertible `n×n` matrix over `F_q`, entries stored row-major as
/// element indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixGL {
    spec: Arc<FieldSpec>,
    n: usize,
    entries: Vec<u64>,
}

impl MatrixGL {
    /// Wraps explicit entries, checking the dimensions, the entry range,
    /// and invertibility.
    pub fn from_entries(spec: &Arc<FieldSpec>, n: usize, entries: Vec<u64>) -> Result<MatrixGL> {
        if n == 0 || entries.len() != n * n {
            return Err(Error::InvalidParameter(
                "matrix needs n ≥ 1 and n² entries".into(),
            ));
        }
        if entries.iter().any(|&e| e >= spec.q()) {
            return Err(Error::InvalidParameter("matrix entry out of range".into()));
        }
        let m = MatrixGL {
            spec: Arc::clone(spec),
            n,
            entries,
        };
        if m.determinant() == 0 {
            return Err(Error::InvalidParameter("matrix is singular".into()));
        }
        Ok(m)
    }

    pub fn identity(spec: &Arc<FieldSpec>, n: usize) -> Result<MatrixGL> {
        if n == 0 {
            return Err(Error::InvalidParameter("matrix needs n ≥ 1".into()));
        }
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        Ok(MatrixGL {
            spec: Arc::clone(spec),
            n,
            entries,
        })
    }

    /// The companion matrix of a monic polynomial with nonzero constant
    /// term: ones on the subdiagonal, `−c_i` down the last column. Its
    /// characteristic polynomial is the input itself.
    pub fn companion(f: &MonicPoly) -> Result<MatrixGL> {
        let n = f.degree();
        if n == 0 {
            return Err(Error::InvalidParameter(
                "companion matrix needs degree ≥ 1".into(),
            ));
        }
        if f.constant_term() == 0 {
            return Err(Error::InvalidParameter(
                "companion matrix of a multiple of T is singular".into(),
            ));
        }
        let spec = f.spec();
        let mut entries = vec![0u64; n * n];
        for i in 0..n - 1 {
            entries[(i + 1) * n + i] = 1;
        }
        for i in 0..n {
            entries[i * n + (n - 1)] = spec.neg_idx(f.coeff(i));
        }
        Ok(MatrixGL {
            spec: Arc::clone(spec),
            n,
            entries,
        })
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entry(&self, row: usize, col: usize) -> u64 {
        self.entries[row * self.n + col]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    /// `Tr(g)` as an element index.
    pub fn trace(&self) -> u64 {
        (0..self.n).fold(0u64, |acc, i| self.spec.add_idx(acc, self.entry(i, i)))
    }

    /// Determinant by Gaussian elimination (exact field arithmetic).
    pub fn determinant(&self) -> u64 {
        let n = self.n;
        let s = &self.spec;
        let mut a = self.entries.clone();
        let mut det = 1u64;
        for col in 0..n {
            let pivot = match (col..n).find(|&r| a[r * n + col] != 0) {
                Some(r) => r,
                None => return 0,
            };
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                }
                det = s.neg_idx(det);
            }
            let p = a[col * n + col];
            det = s.mul_idx(det, p);
            let inv = s.inv_idx(p).expect("pivot nonzero");
            for r in col + 1..n {
                let factor = s.mul_idx(a[r * n + col], inv);
                if factor == 0 {
                    continue;
                }
                for j in col..n {
                    let delta = s.mul_idx(factor, a[col * n + j]);
                    a[r * n + j] = s.sub_idx(a[r * n + j], delta);
                }
            }
        }
        det
    }

    pub fn mul(&self, rhs: &MatrixGL) -> Result<MatrixGL> {
        if **self.spec() != **rhs.spec() || self.n != rhs.n {
            return Err(Error::MismatchedField);
        }
        let n = self.n;
        let s = &self.spec;
        let mut entries = vec![0u64; n * n];
        for i in 0..n {
            for k in 0..n {
                let aik = self.entry(i, k);
                if aik == 0 {
                    continue;
                }
                for j in 0..n {
                    let prod = s.mul_idx(aik, rhs.entry(k, j));
                    entries[i * n + j] = s.add_idx(entries[i * n + j], prod);
                }
            }
        }
        Ok(MatrixGL {
            spec: Arc::clone(s),
            n,
            entries,
        })
    }

    /// Inverse by Gauss–Jordan elimination; always succeeds on a value
    /// constructed through this type's invariant-checking paths.
    pub fn inverse(&self) -> Result<MatrixGL> {
        let n = self.n;
        let s = &self.spec;
        let mut a = self.entries.clone();
        let mut b = MatrixGL::identity(&self.spec, n)?.entries;
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| a[r * n + col] != 0)
                .ok_or(Error::DivisionByZero)?;
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    b.swap(pivot * n + j, col * n + j);
                }
            }
            let inv = s.inv_idx(a[col * n + col]).expect("pivot nonzero");
            for j in 0..n {
                a[col * n + j] = s.mul_idx(a[col * n + j], inv);
                b[col * n + j] = s.mul_idx(b[col * n + j], inv);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let factor = a[r * n + col];
                if factor == 0 {
                    continue;
                }
                for j in 0..n {
                    let da = s.mul_idx(factor, a[col * n + j]);
                    a[r * n + j] = s.sub_idx(a[r * n + j], da);
                    let db = s.mul_idx(factor, b[col * n + j]);
                    b[r * n + j] = s.sub_idx(b[r * n + j], db);
                }
            }
        }
        Ok(MatrixGL {
            spec: Arc::clone(s),
            n,
            entries: b,
        })
    }

    /// `g^k` by repeated squaring; negative exponents go through the
    /// inverse (always defined here).
    pub fn pow(&self, k: &BigInt) -> Result<MatrixGL> {
        let base = if k.is_negative() {
            self.inverse()?
        } else {
            self.clone()
        };
        let mut acc = MatrixGL::identity(&self.spec, self.n)?;
        let mag = k.magnitude();
        for bit in (0..mag.bits()).rev() {
            acc = acc.mul(&acc)?;
            if mag.bit(bit) {
                acc = acc.mul(&base)?;
            }
        }
        Ok(acc)
    }
}

/// `|GL_n(F_q)| = Π_{i=0}^{n−1} (q^n − q^i)`, exactly.
pub fn gl_order(n: usize, q: u64) -> BigUint {
    let qb = BigUint::from(q);
    let qn = qb.pow(n as u32);
    let mut order = BigUint::one();
    for i in 0..n as u32 {
        order *= &qn - qb.pow(i);
    }
    order
}

// ---------------------------------------------------------------------------
// Sampling

/// The generator for block `stream` of a seeded experiment.
pub fn sampler_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws an exactly uniform element of `GL_n(F_q)`.
///
/// Rows are sampled one at a time, uniformly over `F_q^n`, and resampled
/// until the new row lies outside the span of the rows already accepted
/// (membership tested by reducing against an incrementally maintained
/// row-echelon basis). Row `i` is then uniform on the complement of an
/// `(i−1)`-dimensional subspace, which is exactly the conditional law of
/// a uniform invertible matrix; the expected number of resamples per row
/// is below `2` for every `q`.
pub fn sample_gl<R: Rng>(spec: &Arc<FieldSpec>, n: usize, rng: &mut R) -> Result<MatrixGL> {
    if n == 0 {
        return Err(Error::InvalidParameter("matrix needs n ≥ 1".into()));
    }
    let q = spec.q();
    let mut entries = Vec::with_capacity(n * n);
    // Reduced rows of the accepted prefix, with their pivot columns.
    let mut basis: Vec<(usize, Vec<u64>)> = Vec::with_capacity(n);
    let mut row = vec![0u64; n];
    while basis.len() < n {
        for slot in row.iter_mut() {
            *slot = rng.gen_range(0..q);
        }
        let mut reduced = row.clone();
        for (pivot, b) in &basis {
            let c = reduced[*pivot];
            if c != 0 {
                for (r, &bv) in reduced.iter_mut().zip(b.iter()) {
                    *r = spec.sub_idx(*r, spec.mul_idx(c, bv));
                }
            }
        }
        let pivot = match reduced.iter().position(|&c| c != 0) {
            Some(p) => p,
            None => continue, // inside the span: reject and resample
        };
        let inv = spec.inv_idx(reduced[pivot]).expect("pivot nonzero");
        for r in reduced.iter_mut() {
            *r = spec.mul_idx(*r, inv);
        }
        entries.extend_from_slice(&row);
        basis.push((pivot, reduced));
    }
    Ok(MatrixGL {
        spec: Arc::clone(spec),
        n,
        entries,
    })
}

// ---------------------------------------------------------------------------
// Characteristic polynomials

/// `det(I_n T − g)` via similarity reduction to upper Hessenberg form
/// followed by the three-term determinant recurrence on leading principal
/// minors; `O(n³)` field operations.
pub fn char_poly(g: &MatrixGL) -> MonicPoly {
    let n = g.n;
    let s = &g.spec;
    let mut h = g.entries.clone();
    // Similarity reduction: zero out below the subdiagonal, column by
    // column, pairing each row operation with the inverse column operation.
    for col in 0..n.saturating_sub(2) {
        let pivot = match (col + 1..n).find(|&r| h[r * n + col] != 0) {
            Some(r) => r,
            None => continue,
        };
        if pivot != col + 1 {
            for j in 0..n {
                h.swap(pivot * n + j, (col + 1) * n + j);
            }
            for i in 0..n {
                h.swap(i * n + pivot, i * n + col + 1);
            }
        }
        let inv = s.inv_idx(h[(col + 1) * n + col]).expect("pivot nonzero");
        for r in col + 2..n {
            let factor = s.mul_idx(h[r * n + col], inv);
            if factor == 0 {
                continue;
            }
            for j in 0..n {
                let delta = s.mul_idx(factor, h[(col + 1) * n + j]);
                h[r * n + j] = s.sub_idx(h[r * n + j], delta);
            }
            for i in 0..n {
                let delta = s.mul_idx(factor, h[i * n + r]);
                h[i * n + col + 1] = s.add_idx(h[i * n + col + 1], delta);
            }
        }
    }
    // p_m = (x − h_{m,m}) p_{m−1} − Σ_i h_{m−i,m} (Π subdiagonal) p_{m−1−i},
    // the Laplace expansion of det(xI − H) along the last column.
    let mut polys: Vec<Vec<u64>> = Vec::with_capacity(n + 1);
    polys.push(vec![1u64]);
    for m in 1..=n {
        let hmm = h[(m - 1) * n + (m - 1)];
        let neg_hmm = s.neg_idx(hmm);
        let mut cur = vec![0u64; m + 1];
        for (d, &c) in polys[m - 1].iter().enumerate() {
            cur[d + 1] = s.add_idx(cur[d + 1], c);
            cur[d] = s.add_idx(cur[d], s.mul_idx(neg_hmm, c));
        }
        let mut prod = 1u64;
        for i in 1..m {
            prod = s.mul_idx(prod, h[(m - i) * n + (m - i - 1)]);
            if prod == 0 {
                break;
            }
            let w = s.mul_idx(h[(m - 1 - i) * n + (m - 1)], prod);
            if w == 0 {
                continue;
            }
            for (d, &c) in polys[m - 1 - i].iter().enumerate() {
                cur[d] = s.sub_idx(cur[d], s.mul_idx(w, c));
            }
        }
        polys.push(cur);
    }
    let mut full = polys.pop().expect("n ≥ 1");
    debug_assert_eq!(full.pop(), Some(1), "characteristic polynomial is monic");
    MonicPoly::from_coeffs(s, full).expect("entries are reduced")
}

/// Brute-force `det(I_n T − g)` by recursive cofactor expansion with
/// polynomial entries — an independent oracle for [`char_poly`], sensible
/// only for small `n`.
pub fn char_poly_cofactor(g: &MatrixGL) -> Result<MonicPoly> {
    let n = g.n;
    let s = &g.spec;
    // Entries of xI − g as coefficient vectors (index = power of x).
    let cells: Vec<Vec<u64>> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let c = s.neg_idx(g.entries[idx]);
            if i == j {
                vec![c, 1]
            } else {
                vec![c]
            }
        })
        .collect();

    fn pmul(s: &FieldSpec, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = s.add_idx(out[i + j], s.mul_idx(x, y));
            }
        }
        out
    }

    // Straightforward recursion over index subsets, expanding the first
    // remaining row.
    fn expand(s: &FieldSpec, n: usize, cells: &[Vec<u64>], rows: &[usize], cols: &[usize]) -> Vec<u64> {
        if rows.len() == 1 {
            return cells[rows[0] * n + cols[0]].clone();
        }
        let mut acc = vec![0u64];
        for (pos, &c) in cols.iter().enumerate() {
            let entry = &cells[rows[0] * n + c];
            if entry.iter().all(|&v| v == 0) {
                continue;
            }
            let sub_cols: Vec<usize> = cols
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != pos)
                .map(|(_, &v)| v)
                .collect();
            let minor = expand(s, n, cells, &rows[1..], &sub_cols);
            let mut term = pmul(s, entry, &minor);
            if pos % 2 == 1 {
                for v in term.iter_mut() {
                    *v = s.neg_idx(*v);
                }
            }
            if term.len() > acc.len() {
                core::mem::swap(&mut acc, &mut term);
            }
            for (d, &v) in term.iter().enumerate() {
                acc[d] = s.add_idx(acc[d], v);
            }
        }
        acc
    }

    let rows: Vec<usize> = (0..n).collect();
    let cols: Vec<usize> = (0..n).collect();
    let mut full = expand(s, n, &cells, &rows, &cols);
    if full.len() != n + 1 || full.pop() != Some(1) {
        return Err(Error::InvalidParameter(
            "cofactor expansion produced a non-monic result".into(),
        ));
    }
    MonicPoly::from_coeffs(s, full)
}

/// `Tr(g^k)` for arbitrary-precision signed `k`, through the power sums of
/// the characteristic polynomial (`p_k(det(I_nT − g)) = Tr(g^k)`).
pub fn trace_power(g: &MatrixGL, k: &BigInt) -> Result<FieldElement> {
    power_sum(&char_poly(g), k)
}

/// `Tr(g^k)` by literal repeated-squaring matrix powers — the oracle route
/// for moderate `|k|`.
pub fn trace_matrix_power(g: &MatrixGL, k: &BigInt) -> Result<FieldElement> {
    let powered = g.pow(k)?;
    FieldElement::from_index(&g.spec, powered.trace())
}

// ---------------------------------------------------------------------------
// The P_GL measure

/// The exact probability that a uniform `g ∈ GL_{deg f}(F_q)` has
/// characteristic polynomial `f`: zero when `T | f`, else the product over
/// prime powers `P^e ‖ f` of `q^{−e·deg P} Π_{i=1}^{e}(1 − q^{−i·deg P})^{−1}`,
/// as a big rational.
pub fn pgl_mass(fz: &Factorizer, f: &MonicPoly) -> Result<BigRational> {
    if f.degree() == 0 {
        return Ok(BigRational::one());
    }
    if f.constant_term() == 0 {
        return Ok(BigRational::zero());
    }
    let q = BigInt::from(f.spec().q());
    let mut mass = BigRational::one();
    for (p, e) in fz.factorize(f)?.pairs() {
        let d = p.degree() as u32;
        let e = *e as u32;
        mass /= BigRational::from(q.pow(e * d));
        for i in 1..=e {
            let qid = q.pow(i * d);
            mass *= BigRational::new(qid.clone(), qid - BigInt::one());
        }
    }
    Ok(mass)
}

// ---------------------------------------------------------------------------
// Trace distributions

fn masses_from_enumeration(
    spec: &Arc<FieldSpec>,
    n: usize,
    mut value_of: impl FnMut(&[u64]) -> Result<u64>,
) -> Result<Vec<BigRational>> {
    let total = monic_count(spec, n)?;
    let fz = Factorizer::new(spec);
    let mut masses = vec![BigRational::zero(); spec.q() as usize];
    let mut err = None;
    for (start, end) in chunk_ranges(total) {
        for_each_monic_range(spec, n, start..end, |_, low| {
            if err.is_some() {
                return;
            }
            if n >= 1 && low[0] == 0 {
                return; // P_GL vanishes on multiples of T
            }
            let f = match MonicPoly::from_coeffs(spec, low.to_vec()) {
                Ok(f) => f,
                Err(e) => {
                    err = Some(e);
                    return;
                }
            };
            let mass = match pgl_mass(&fz, &f) {
                Ok(m) => m,
                Err(e) => {
                    err = Some(e);
                    return;
                }
            };
            match value_of(low) {
                Ok(x) => masses[x as usize] += mass,
                Err(e) => err = Some(e),
            }
        });
        if let Some(e) = err.take() {
            return Err(e);
        }
    }
    Ok(masses)
}

/// The exact distribution of `Tr(g^k)` over uniform `g ∈ GL_n(F_q)`:
/// mass at `x` is the `P_GL`-measure of `{f ∈ M_{n,q} : p_k(f) = x}`.
/// The masses are exact rationals and must sum to one — the construction
/// re-proves the normalization of `P_GL` on every run.
pub fn exact_trace_distribution(
    spec: &Arc<FieldSpec>,
    n: usize,
    k: &BigInt,
) -> Result<TraceDistribution> {
    let mut full = vec![0u64; n + 1];
    full[n] = 1;
    let masses = masses_from_enumeration(spec, n, |low| {
        full[..n].copy_from_slice(low);
        power_sum_full(spec, &full, k)
    })?;
    TraceDistribution::from_masses(spec, masses, Provenance::ExactPgl)
}

/// Per-value counts of `Tr(g^k)` over `count` samples drawn from stream
/// `block` of `seed`. Blocks merge by elementwise addition, in any order.
pub fn empirical_trace_counts_block(
    spec: &Arc<FieldSpec>,
    n: usize,
    k: &BigInt,
    seed: u64,
    block: u64,
    count: u64,
) -> Result<Vec<u64>> {
    let mut rng = sampler_rng(seed, block);
    let mut counts = vec![0u64; spec.q() as usize];
    for _ in 0..count {
        let g = sample_gl(spec, n, &mut rng)?;
        let x = trace_power(&g, k)?;
        counts[x.index() as usize] += 1;
    }
    Ok(counts)
}

/// Empirical distribution of `Tr(g^k)` from `samples` uniform draws,
/// deterministic given `(seed, samples)`.
pub fn empirical_trace_distribution(
    spec: &Arc<FieldSpec>,
    n: usize,
    k: &BigInt,
    samples: u64,
    seed: u64,
) -> Result<TraceDistribution> {
    if samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let mut counts = vec![0u64; spec.q() as usize];
    let mut done = 0u64;
    let mut block = 0u64;
    while done < samples {
        let take = SAMPLE_BLOCK.min(samples - done);
        let part = empirical_trace_counts_block(spec, n, k, seed, block, take)?;
        for (slot, c) in counts.iter_mut().zip(&part) {
            *slot += c;
        }
        done += take;
        block += 1;
    }
    TraceDistribution::from_counts(spec, &counts, Provenance::Empirical)
}

/// `q^{−n} Σ_{ψ ≠ ψ_0} Σ_{i=0}^{n} |S(i, χ_{k,ψ})|` — the chain of
/// triangle inequalities bounding how far `Tr(g^k)` sits from uniform.
pub fn single_power_chain_bound(spec: &Arc<FieldSpec>, n: usize, k: &BigUint) -> Result<f64> {
    let mut total = 0.0;
    for psi in AdditiveCharacter::nontrivial(spec) {
        let chi = PowerTraceCharacter::new(psi, k.clone())?;
        for i in 0..=n {
            total += char_sum(&chi, i, Weight::Unit, None)?.value.norm();
        }
    }
    Ok(total / libm::pow(spec.q() as f64, n as f64))
}

/// `q^{−n} Σ_{ψ ≠ ψ_0} Σ_{i=0}^{n} |S(i, ι_{ξ_{a,ψ}})|` — the same chain
/// for a linear combination `Σ a_i Tr(g^i)`.
pub fn linear_combination_chain_bound(
    spec: &Arc<FieldSpec>,
    n: usize,
    a: &[u64],
) -> Result<f64> {
    let mut total = 0.0;
    for psi in AdditiveCharacter::nontrivial(spec) {
        let xi = ShortIntervalCharacter::with_coeffs(psi, a.to_vec())?;
        let iota = IotaTransformed::of_short_interval(xi);
        for i in 0..=n {
            total += char_sum(&iota, i, Weight::Unit, None)?.value.norm();
        }
    }
    Ok(total / libm::pow(spec.q() as f64, n as f64))
}

/// How [`linear_combination_distribution`] obtains its masses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistMode {
    /// Exact `P_GL`-weighted enumeration of `M_{n,q}`.
    Exact,
    /// Monte Carlo over uniform samples from `GL_n(F_q)`.
    Empirical { samples: u64, seed: u64 },
}

/// A trace-statistic distribution together with its distance from uniform
/// and the character-sum cap on that distance.
#[derive(Clone, Debug)]
pub struct GlDistributionReport {
    pub dist: TraceDistribution,
    /// `Σ_x |mass(x) − 1/q|`.
    pub l1: f64,
    /// [`linear_combination_chain_bound`] (or its single-`k` analogue).
    /// In exact mode the inequality `l1 ≤ chain_bound` is a theorem and is
    /// asserted at construction; empirical masses carry sampling noise, so
    /// there it is reported but not asserted.
    pub chain_bound: f64,
}

/// The distribution of `Σ_{i=1}^{len(a)} a_i · Tr(g^i)` over
/// `g ∈ GL_n(F_q)`, exactly or by sampling. At least one `a_i` must be
/// nonzero.
pub fn linear_combination_distribution(
    spec: &Arc<FieldSpec>,
    n: usize,
    a: &[u64],
    mode: DistMode,
) -> Result<GlDistributionReport> {
    if a.iter().all(|&c| c == 0) {
        return Err(Error::InvalidParameter(
            "linear combination needs a nonzero coefficient".into(),
        ));
    }
    if a.iter().any(|&c| c >= spec.q()) {
        return Err(Error::InvalidParameter(
            "combination coefficient out of range".into(),
        ));
    }
    let chain_bound = linear_combination_chain_bound(spec, n, a)?;
    let combine = |spec: &FieldSpec, ps: &[u64]| -> u64 {
        let mut acc = 0u64;
        for (ai, pi) in a.iter().zip(ps.iter()) {
            acc = spec.add_idx(acc, spec.mul_idx(*ai, *pi));
        }
        acc
    };
    let dist = match mode {
        DistMode::Exact => {
            let mut full = vec![0u64; n + 1];
            full[n] = 1;
            let masses = masses_from_enumeration(spec, n, |low| {
                full[..n].copy_from_slice(low);
                let ps = newton_full(spec, &full, a.len());
                Ok(combine(spec, &ps))
            })?;
            TraceDistribution::from_masses(spec, masses, Provenance::ExactPgl)?
        }
        DistMode::Empirical { samples, seed } => {
            if samples == 0 {
                return Err(Error::InvalidParameter("need at least one sample".into()));
            }
            let mut counts = vec![0u64; spec.q() as usize];
            let mut done = 0u64;
            let mut block = 0u64;
            while done < samples {
                let take = SAMPLE_BLOCK.min(samples - done);
                let mut rng = sampler_rng(seed, block);
                for _ in 0..take {
                    let g = sample_gl(spec, n, &mut rng)?;
                    let f = char_poly(&g);
                    let ps = newton_full(spec, &f.full(), a.len());
                    counts[combine(spec, &ps) as usize] += 1;
                }
                done += take;
                block += 1;
            }
            TraceDistribution::from_counts(spec, &counts, Provenance::Empirical)?
        }
    };
    let l1 = dist.l1_distance();
    if matches!(mode, DistMode::Exact) {
        assert!(
            l1 <= chain_bound + TOL,
            "character-sum cap violated: l1={l1} cap={chain_bound}"
        );
    }
    Ok(GlDistributionReport {
        dist,
        l1,
        chain_bound,
    })
}

// ---------------------------------------------------------------------------
// Counterexample constructions

/// The product `F` of all monic irreducibles of degree at most `n`
/// (including `T`). Every element of every `F_{q^d}` with `d ≤ n` is a
/// root of `F`, so `Σ_i a_i Tr(g^i) = 0` identically on `GL_m(F_q)` for
/// `m ≤ n` when `(a_i)` are the coefficients of `F` (the constant `a_0`
/// is zero since `T | F`).
pub fn product_of_irreducibles(spec: &Arc<FieldSpec>, n: usize) -> Result<MonicPoly> {
    let mut degree = 0u64;
    for d in 1..=n {
        degree += d as u64 * irreducible_count(spec, d);
    }
    if degree > 1 << 20 {
        return Err(Error::BudgetExceeded {
            q: spec.q(),
            n: n as u32,
        });
    }
    let fz = Factorizer::new(spec);
    let mut f = MonicPoly::one(spec);
    for d in 1..=n {
        for p in fz.irreducibles(d)?.iter() {
            f = f.mul(p)?;
        }
    }
    Ok(f)
}

// ---------------------------------------------------------------------------
// The convolution identity

/// Result of verifying `P_GL = α₁ * α₂` on all of `M_{n,q}`.
#[derive(Clone, Debug)]
pub struct ConvolutionCheck {
    /// How many polynomials were checked.
    pub checked: u64,
    /// First `f` where the two sides differed (never expected).
    pub witness: Option<MonicPoly>,
}

impl ConvolutionCheck {
    pub fn passed(&self) -> bool {
        self.witness.is_none()
    }
}

/// Verifies, in exact rational arithmetic, that
/// `P_GL(f) = Σ_{gh=f} α₁(g)·α₂(h)` with `α₁(g) = |g|^{−1}·1_{T∤g}` and
/// `α₂(h) = P_GL(h)/|h|`, for every `f ∈ M_{n,q}`.
pub fn convolution_check(spec: &Arc<FieldSpec>, n: usize) -> Result<ConvolutionCheck> {
    let total = monic_count(spec, n)?;
    let fz = Factorizer::new(spec);
    let q = BigInt::from(spec.q());
    let mut checked = 0u64;
    let mut witness = None;
    let mut err = None;
    for_each_monic_range(spec, n, 0..total, |_, low| {
        if err.is_some() || witness.is_some() {
            return;
        }
        let run = || -> Result<bool> {
            let f = MonicPoly::from_coeffs(spec, low.to_vec())?;
            let lhs = pgl_mass(&fz, &f)?;
            let pairs = fz.factorize(&f)?.pairs().to_vec();
            // Walk every divisor g via an exponent odometer.
            let mut exps = vec![0usize; pairs.len()];
            let mut rhs = BigRational::zero();
            loop {
                let mut g = MonicPoly::one(spec);
                let mut h = MonicPoly::one(spec);
                for (slot, (p, e)) in exps.iter().zip(pairs.iter()) {
                    g = g.mul(&p.pow(*slot))?;
                    h = h.mul(&p.pow(e - slot))?;
                }
                if g.coprime_to_t() {
                    let alpha1 = BigRational::new(BigInt::one(), q.pow(g.degree() as u32));
                    let alpha2 =
                        pgl_mass(&fz, &h)? / BigRational::from(q.pow(h.degree() as u32));
                    rhs += alpha1 * alpha2;
                }
                // Advance the odometer.
                let mut pos = 0;
                loop {
                    if pos == exps.len() {
                        return Ok(lhs == rhs);
                    }
                    if exps[pos] < pairs[pos].1 {
                        exps[pos] += 1;
                        break;
                    }
                    exps[pos] = 0;
                    pos += 1;
                }
            }
        };
        match run() {
            Ok(true) => checked += 1,
            Ok(false) => witness = Some(MonicPoly::from_coeffs(spec, low.to_vec()).unwrap()),
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(ConvolutionCheck { checked, witness })
}
