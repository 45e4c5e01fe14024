//! Extension towers `F_{q^n} / F_q`.
//!
//! The top field is always represented over the *prime* field: for a base
//! `F_q` with `q = p^m`, the extension of relative degree `n` is
//! `F_p[y]/(h)` with `h` the canonical (lexicographically smallest) monic
//! irreducible of degree `m·n` over `F_p`. The base is then located inside
//! the top field by finding a root `β` of the base modulus:
//!
//! 1. the subfield of cardinality `q` is computed exactly as the kernel of
//!    the `F_p`-linear map `z ↦ z^{p^m} - z` (Gaussian elimination on an
//!    `mn × mn` matrix over `F_p`), and
//! 2. its `q ≤ 9` elements are scanned in a fixed order for a root of the
//!    base modulus.
//!
//! Both steps are deterministic, so the embedding is reproducible across
//! runs and machines. The relative trace `Tr_{F_{q^n}/F_q}` is precomputed
//! as base-field coordinates of the traces of the `mn` basis monomials,
//! which makes per-element trace evaluation a short linear pass.

use super::{FieldElement, FieldSpec};
use crate::util::{add_mod, kernel_basis_mod_p, mul_mod, solve_mod_p};
use crate::{Error, Result};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigUint;

/// An extension `F_{q^n}` of a base field `F_q`, with the embedding and the
/// relative Frobenius/trace maps.
pub struct Extension {
    base: Arc<FieldSpec>,
    top: Arc<FieldSpec>,
    n: usize,
    /// Root of the base modulus inside the top field.
    beta: Vec<u64>,
    /// `β^j` for `j < m`: images of the base basis monomials.
    embed_basis: Vec<Vec<u64>>,
    /// Base-field coordinates (length `m`) of `Tr(y^i)` for each top basis
    /// monomial `y^i`.
    trace_coords: Vec<Vec<u64>>,
}

/// Builds `F_{q^n}` over `base`, with `q^n` capped by the enumeration budget.
pub fn extend_field(base: &Arc<FieldSpec>, n: usize) -> Result<Extension> {
    if n == 0 {
        return Err(Error::InvalidParameter("relative degree n = 0".into()));
    }
    let p = base.p();
    let m = base.degree();
    let top = if n == 1 {
        base.clone()
    } else {
        FieldSpec::new(p, m * n)?
    };

    // Locate the base subfield: kernel of z -> z^{p^m} - z.
    let top_deg = m * n;
    let w = top.pow_vec(&unit_vec(top_deg, 1.min(top_deg - 1)), &BigUint::from(base.q()));
    // Columns are w^i - e_i; build the row-major matrix.
    let mut cols: Vec<Vec<u64>> = Vec::with_capacity(top_deg);
    let mut wi = top.one_vec();
    for i in 0..top_deg {
        let mut col = wi.clone();
        col[i] = crate::util::sub_mod(col[i], 1, p);
        cols.push(col);
        if i + 1 < top_deg {
            wi = top.mul_vec(&wi, &w);
        }
    }
    let rows: Vec<Vec<u64>> = (0..top_deg)
        .map(|r| (0..top_deg).map(|c| cols[c][r]).collect())
        .collect();
    let kernel = kernel_basis_mod_p(&rows, p);
    debug_assert_eq!(
        kernel.len(),
        m,
        "subfield of F_{{p^{top_deg}}} fixed by x -> x^q has F_p-dimension m"
    );

    // Scan the q subfield elements in a fixed order for a root of the base
    // modulus g(x) = x^m + Σ c_j x^j.
    let mut beta = None;
    let combos = p.pow(m as u32);
    'combo: for t in 0..combos {
        let mut digits = t;
        let mut z = vec![0u64; top_deg];
        for basis_vec in &kernel {
            let d = digits % p;
            digits /= p;
            if d != 0 {
                for (zi, &bi) in z.iter_mut().zip(basis_vec) {
                    *zi = add_mod(*zi, mul_mod(d, bi, p), p);
                }
            }
        }
        // Horner evaluation of the base modulus at z.
        let mut acc = top.one_vec();
        for j in (0..m).rev() {
            acc = top.mul_vec(&acc, &z);
            acc[0] = add_mod(acc[0], base.modulus()[j], p);
        }
        if acc.iter().all(|&c| c == 0) {
            beta = Some(z);
            break 'combo;
        }
    }
    let beta = beta.expect("an irreducible base modulus splits in the top field");

    let mut embed_basis = Vec::with_capacity(m);
    let mut bj = top.one_vec();
    for _ in 0..m {
        embed_basis.push(bj.clone());
        bj = top.mul_vec(&bj, &beta);
    }

    let ext = Extension {
        base: base.clone(),
        top,
        n,
        beta,
        embed_basis,
        trace_coords: Vec::new(),
    };

    // Relative traces of the basis monomials, expressed in base coordinates.
    let q_big = BigUint::from(base.q());
    let mut trace_coords = Vec::with_capacity(top_deg);
    for i in 0..top_deg {
        let e_i = unit_vec(top_deg, i);
        let mut acc = e_i.clone();
        let mut cur = e_i;
        for _ in 1..n {
            cur = ext.top.pow_vec(&cur, &q_big);
            acc = ext.top.add_vec(&acc, &cur);
        }
        let coords = ext
            .solve_to_base(&acc)
            .expect("relative trace lands in the embedded base field");
        trace_coords.push(coords);
    }

    Ok(Extension {
        trace_coords,
        ..ext
    })
}

fn unit_vec(len: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0u64; len];
    v[i] = 1;
    v
}

impl Extension {
    pub fn base(&self) -> &Arc<FieldSpec> {
        &self.base
    }

    pub fn top(&self) -> &Arc<FieldSpec> {
        &self.top
    }

    /// Relative degree `n` (so `|top| = q^n`).
    pub fn relative_degree(&self) -> usize {
        self.n
    }

    /// The chosen root of the base modulus inside the top field.
    pub fn beta(&self) -> FieldElement {
        FieldElement::from_repr(&self.top, self.beta.clone()).expect("valid repr")
    }

    fn check_base(&self, x: &FieldElement) -> Result<()> {
        if **x.spec() == *self.base {
            Ok(())
        } else {
            Err(Error::MismatchedField)
        }
    }

    fn check_top(&self, x: &FieldElement) -> Result<()> {
        if **x.spec() == *self.top {
            Ok(())
        } else {
            Err(Error::MismatchedField)
        }
    }

    /// Coefficient-vector embedding (hot path).
    pub fn embed_vec(&self, repr: &[u64]) -> Vec<u64> {
        let p = self.top.p();
        let mut acc = vec![0u64; self.top.degree()];
        for (a, basis) in repr.iter().zip(&self.embed_basis) {
            if *a == 0 {
                continue;
            }
            for (slot, &b) in acc.iter_mut().zip(basis) {
                *slot = add_mod(*slot, mul_mod(*a, b, p), p);
            }
        }
        acc
    }

    /// The field embedding `F_q -> F_{q^n}`.
    pub fn embed(&self, x: &FieldElement) -> Result<FieldElement> {
        self.check_base(x)?;
        FieldElement::from_repr(&self.top, self.embed_vec(x.repr()))
    }

    /// Relative Frobenius `x -> x^q` on the top field.
    pub fn frobenius(&self, x: &FieldElement) -> Result<FieldElement> {
        self.check_top(x)?;
        let v = self.top.pow_vec(x.repr(), &BigUint::from(self.base.q()));
        FieldElement::from_repr(&self.top, v)
    }

    /// Base-field coordinates of the relative trace (hot path).
    pub fn rel_trace_coords(&self, repr: &[u64]) -> Vec<u64> {
        let p = self.top.p();
        let m = self.base.degree();
        let mut acc = vec![0u64; m];
        for (&a, coords) in repr.iter().zip(&self.trace_coords) {
            if a == 0 {
                continue;
            }
            for (slot, &c) in acc.iter_mut().zip(coords) {
                *slot = add_mod(*slot, mul_mod(a, c, p), p);
            }
        }
        acc
    }

    /// Relative trace `Tr_{F_{q^n}/F_q}(x)` as a base-field element.
    pub fn relative_trace(&self, x: &FieldElement) -> Result<FieldElement> {
        self.check_top(x)?;
        FieldElement::from_repr(&self.base, self.rel_trace_coords(x.repr()))
    }

    /// Relative trace via the defining sum `Σ_{j<n} x^{q^j}` (kept as an
    /// independent slow path for cross-checks).
    pub fn relative_trace_by_powers(&self, x: &FieldElement) -> Result<FieldElement> {
        self.check_top(x)?;
        let q_big = BigUint::from(self.base.q());
        let mut acc = x.repr().to_vec();
        let mut cur = x.repr().to_vec();
        for _ in 1..self.n {
            cur = self.top.pow_vec(&cur, &q_big);
            acc = self.top.add_vec(&acc, &cur);
        }
        let coords = self
            .solve_to_base(&acc)
            .expect("trace lands in the embedded base field");
        FieldElement::from_repr(&self.base, coords)
    }

    fn solve_to_base(&self, v: &[u64]) -> Option<Vec<u64>> {
        let top_deg = self.top.degree();
        let m = self.base.degree();
        let rows: Vec<Vec<u64>> = (0..top_deg)
            .map(|r| (0..m).map(|c| self.embed_basis[c][r]).collect())
            .collect();
        solve_mod_p(&rows, v, self.top.p())
    }

    /// Preimage under the embedding, or `None` if `x` lies outside the
    /// embedded copy of the base field.
    pub fn to_base(&self, x: &FieldElement) -> Result<Option<FieldElement>> {
        self.check_top(x)?;
        match self.solve_to_base(x.repr()) {
            Some(coords) => {
                // The solver returns some solution of the (overdetermined)
                // system; confirm it reproduces x exactly.
                if self.embed_vec(&coords) == x.repr() {
                    Ok(Some(FieldElement::from_repr(&self.base, coords)?))
                } else {
                    Ok(None)
                }
            }
            None => Ok(None),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::FieldSpec;

    fn elements(spec: &Arc<FieldSpec>) -> Vec<FieldElement> {
        (0..spec.q())
            .map(|i| FieldElement::from_index(spec, i).unwrap())
            .collect()
    }

    #[test]
    fn rejects_degree_zero_and_budget() {
        let f2 = FieldSpec::from_cardinality(2).unwrap();
        assert!(extend_field(&f2, 0).is_err());
        assert!(matches!(
            extend_field(&f2, 27),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn identity_extension() {
        let f4 = FieldSpec::from_cardinality(4).unwrap();
        let ext = extend_field(&f4, 1).unwrap();
        assert_eq!(**ext.top(), *f4);
        for x in elements(&f4) {
            assert_eq!(ext.embed(&x).unwrap(), x);
            // Relative Frobenius x -> x^q is the identity.
            assert_eq!(ext.frobenius(&x).unwrap(), x);
            assert_eq!(ext.relative_trace(&x).unwrap(), x);
        }
    }

    #[test]
    fn embedding_is_a_field_homomorphism() {
        for (q, n) in [(2u64, 4usize), (3, 2), (4, 2), (9, 2), (8, 2), (5, 3)] {
            let base = FieldSpec::from_cardinality(q).unwrap();
            let ext = extend_field(&base, n).unwrap();
            let elems = elements(&base);
            for a in &elems {
                for b in &elems {
                    let sum = ext.embed(&a.add(b).unwrap()).unwrap();
                    assert_eq!(sum, ext.embed(a).unwrap().add(&ext.embed(b).unwrap()).unwrap());
                    let prod = ext.embed(&a.mul(b).unwrap()).unwrap();
                    assert_eq!(prod, ext.embed(a).unwrap().mul(&ext.embed(b).unwrap()).unwrap());
                }
                // Round trip through the subfield.
                let img = ext.embed(a).unwrap();
                assert_eq!(ext.to_base(&img).unwrap().unwrap(), *a);
            }
        }
    }

    #[test]
    fn frobenius_fixes_exactly_the_embedded_base() {
        for (q, n) in [(2u64, 3usize), (3, 2), (4, 2)] {
            let base = FieldSpec::from_cardinality(q).unwrap();
            let ext = extend_field(&base, n).unwrap();
            let top = ext.top().clone();
            let embedded: Vec<FieldElement> = elements(&base)
                .iter()
                .map(|x| ext.embed(x).unwrap())
                .collect();
            let mut fixed = 0u64;
            for x in elements(&top) {
                if ext.frobenius(&x).unwrap() == x {
                    fixed += 1;
                    assert!(embedded.contains(&x), "fixed point outside embedded base");
                }
            }
            assert_eq!(fixed, q, "q={q} n={n}");
        }
    }

    #[test]
    fn frobenius_orbit_size_divides_relative_degree() {
        let f2 = FieldSpec::from_cardinality(2).unwrap();
        let ext = extend_field(&f2, 8).unwrap();
        let y = FieldElement::generator(ext.top()).unwrap();
        let mut orbit = 1usize;
        let mut cur = ext.frobenius(&y).unwrap();
        while cur != y {
            cur = ext.frobenius(&cur).unwrap();
            orbit += 1;
            assert!(orbit <= 8);
        }
        assert_eq!(8 % orbit, 0);
    }

    #[test]
    fn relative_trace_matches_power_sum_definition() {
        for (q, n) in [(2u64, 4usize), (3, 3), (4, 2)] {
            let base = FieldSpec::from_cardinality(q).unwrap();
            let ext = extend_field(&base, n).unwrap();
            for x in elements(ext.top()) {
                let fast = ext.relative_trace(&x).unwrap();
                let slow = ext.relative_trace_by_powers(&x).unwrap();
                assert_eq!(fast, slow);
            }
        }
    }

    #[test]
    fn relative_trace_is_base_linear_and_surjective() {
        let base = FieldSpec::from_cardinality(3).unwrap();
        let ext = extend_field(&base, 2).unwrap();
        let top_elems = elements(ext.top());
        // Additivity.
        for a in top_elems.iter().take(9) {
            for b in top_elems.iter().take(9) {
                let lhs = ext.relative_trace(&a.add(b).unwrap()).unwrap();
                let rhs = ext
                    .relative_trace(a)
                    .unwrap()
                    .add(&ext.relative_trace(b).unwrap())
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
        // Every base value is hit equally often (q^{n-1} times).
        let mut counts = alloc::collections::BTreeMap::new();
        for x in &top_elems {
            *counts
                .entry(ext.relative_trace(x).unwrap().index())
                .or_insert(0u64) += 1;
        }
        for v in counts.values() {
            assert_eq!(*v, 3);
        }
    }
}
