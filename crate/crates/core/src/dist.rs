//! Distributions of field-valued statistics, with exact rational masses.
//!
//! Equidistribution claims here are always measured by the unhalved L1
//! distance `Σ_{x∈F_q} |P(X = x) − 1/q|`. The interesting assertions are
//! exact (a distribution *is* a point mass, masses sum to *exactly* one),
//! so masses are stored as arbitrary-precision rationals and converted to
//! floating point only at the reporting boundary.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ffield::FieldSpec;
use crate::{Error, Result};

/// How a distribution's masses were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    /// Exact characteristic-polynomial masses of a uniform invertible
    /// matrix.
    ExactPgl,
    /// Empirical frequencies from sampling.
    Empirical,
    /// Exact counts from enumerating monic polynomials uniformly.
    ExactUniformPoly,
}

impl Provenance {
    /// Stable lowercase token for CSV output.
    pub fn token(&self) -> &'static str {
        match self {
            Provenance::ExactPgl => "exact_pgl",
            Provenance::Empirical => "empirical",
            Provenance::ExactUniformPoly => "exact_uniform_poly",
        }
    }
}

/// A probability distribution on the elements of `F_q`, indexed by element
/// index. Masses are exact rationals summing to exactly one.
#[derive(Clone, Debug)]
pub struct TraceDistribution {
    spec: Arc<FieldSpec>,
    masses: Vec<BigRational>,
    provenance: Provenance,
}

impl TraceDistribution {
    /// Distribution from occurrence counts per element index.
    pub fn from_counts(
        spec: &Arc<FieldSpec>,
        counts: &[u64],
        provenance: Provenance,
    ) -> Result<TraceDistribution> {
        if counts.len() != spec.q() as usize {
            return Err(Error::InvalidParameter(
                "count vector length must equal the field size".into(),
            ));
        }
        let total: u64 = counts.iter().sum();
        if total == 0 {
            return Err(Error::InvalidParameter(
                "cannot normalize an empty count vector".into(),
            ));
        }
        let denom = BigUint::from(total);
        let masses = counts
            .iter()
            .map(|&c| BigRational::new(BigUint::from(c).into(), denom.clone().into()))
            .collect();
        Ok(TraceDistribution {
            spec: Arc::clone(spec),
            masses,
            provenance,
        })
    }

    /// Distribution from exact masses, which must be nonnegative and sum
    /// to exactly one.
    pub fn from_masses(
        spec: &Arc<FieldSpec>,
        masses: Vec<BigRational>,
        provenance: Provenance,
    ) -> Result<TraceDistribution> {
        if masses.len() != spec.q() as usize {
            return Err(Error::InvalidParameter(
                "mass vector length must equal the field size".into(),
            ));
        }
        if masses.iter().any(|m| m.is_negative()) {
            return Err(Error::InvalidParameter(
                "distribution mass is negative".into(),
            ));
        }
        let total: BigRational = masses.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidParameter(
                "distribution masses do not sum to one".into(),
            ));
        }
        Ok(TraceDistribution {
            spec: Arc::clone(spec),
            masses,
            provenance,
        })
    }

    pub fn spec(&self) -> &Arc<FieldSpec> {
        &self.spec
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Exact mass of the element with index `idx`.
    pub fn mass(&self, idx: u64) -> &BigRational {
        &self.masses[idx as usize]
    }

    pub fn masses(&self) -> &[BigRational] {
        &self.masses
    }

    pub fn mass_f64(&self, idx: u64) -> f64 {
        self.masses[idx as usize].to_f64().unwrap_or(f64::NAN)
    }

    /// `Σ_x |P(X = x) − 1/q|` as an exact rational.
    pub fn l1_distance_exact(&self) -> BigRational {
        let uniform = BigRational::new(1.into(), (self.spec.q() as i64).into());
        self.masses.iter().map(|m| (m - &uniform).abs()).sum()
    }

    /// `Σ_x |P(X = x) − 1/q|`, rounded to floating point at the end.
    pub fn l1_distance(&self) -> f64 {
        self.l1_distance_exact().to_f64().unwrap_or(f64::NAN)
    }

    /// Index of the unique element with mass exactly one, when the
    /// distribution is a point mass.
    pub fn point_mass(&self) -> Option<u64> {
        let mut found = None;
        for (i, m) in self.masses.iter().enumerate() {
            if m.is_one() {
                found = Some(i as u64);
            } else if !m.is_zero() {
                return None;
            }
        }
        found
    }

    /// True when every element has mass exactly `1/q`.
    pub fn is_uniform_exact(&self) -> bool {
        let uniform = BigRational::new(1.into(), (self.spec.q() as i64).into());
        self.masses.iter().all(|m| *m == uniform)
    }
}
