//! Text formats for monic polynomials, used by the CLI and CSV files.
//!
//! Two forms, both round-tripping bit-exactly:
//!
//! * canonical term form, highest degree first, coefficients written as
//!   encoded element indices: `"T^3+2*T+1"`, `"T^2+T"`, `"1"`;
//! * compact coefficient-vector form carrying the field cardinality:
//!   `"q=3;[1,2,0,1]"` — the full low-to-high coefficient list including
//!   the leading `1`.
//!
//! A leading `-` on a term is accepted on input (meaning the negated
//! element index) but never produced on output.

use super::MonicPoly;
use crate::ffield::FieldSpec;
use crate::{Error, Result};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;

/// Canonical term form of a monic polynomial.
pub fn format_monic(f: &MonicPoly) -> String {
    let n = f.degree();
    if n == 0 {
        return "1".to_string();
    }
    let mut out = String::new();
    for i in (0..=n).rev() {
        let c = f.coeff(i);
        if c == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('+');
        }
        match (i, c) {
            (0, _) => out.push_str(&c.to_string()),
            (_, 1) => {}
            (_, _) => {
                out.push_str(&c.to_string());
                out.push('*');
            }
        }
        if i == 1 {
            out.push('T');
        } else if i >= 2 {
            out.push_str(&format!("T^{i}"));
        }
    }
    out
}

/// Compact coefficient-vector form, `q=<q>;[c_0,…,c_n]`.
pub fn format_compact(f: &MonicPoly) -> String {
    let coeffs: Vec<String> = f.full().iter().map(|c| c.to_string()).collect();
    format!("q={};[{}]", f.spec().q(), coeffs.join(","))
}

/// Parses either text form against a known field. The compact form must
/// agree with the field's cardinality.
pub fn parse_monic(spec: &Arc<FieldSpec>, s: &str) -> Result<MonicPoly> {
    let s = s.trim();
    if s.starts_with("q=") {
        let (q, full) = parse_compact_parts(s)?;
        if q != spec.q() {
            return Err(Error::Parse(format!(
                "polynomial cardinality q={q} does not match field q={}",
                spec.q()
            )));
        }
        return from_full(spec, full);
    }
    parse_terms(spec, s)
}

/// Parses the compact form alone, constructing the field it names.
pub fn parse_monic_auto(s: &str) -> Result<MonicPoly> {
    let (q, full) = parse_compact_parts(s.trim())?;
    let spec = FieldSpec::from_cardinality(q)?;
    from_full(&spec, full)
}

fn from_full(spec: &Arc<FieldSpec>, mut full: Vec<u64>) -> Result<MonicPoly> {
    if full.last() != Some(&1) {
        return Err(Error::Parse(
            "coefficient vector must end with the leading 1".into(),
        ));
    }
    full.pop();
    MonicPoly::from_coeffs(spec, full)
}

fn parse_compact_parts(s: &str) -> Result<(u64, Vec<u64>)> {
    let rest = s
        .strip_prefix("q=")
        .ok_or_else(|| Error::Parse("expected q=<cardinality>;[coefficients]".into()))?;
    let (qs, vs) = rest
        .split_once(';')
        .ok_or_else(|| Error::Parse("missing ';' in compact polynomial".into()))?;
    let q: u64 = qs
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad cardinality {qs:?}")))?;
    let inner = vs
        .trim()
        .strip_prefix('[')
        .and_then(|v| v.strip_suffix(']'))
        .ok_or_else(|| Error::Parse("coefficients must be bracketed".into()))?;
    let mut full = Vec::new();
    for part in inner.split(',') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        full.push(
            part.parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {part:?}")))?,
        );
    }
    if full.is_empty() {
        return Err(Error::Parse("empty coefficient vector".into()));
    }
    Ok((q, full))
}

fn parse_terms(spec: &Arc<FieldSpec>, s: &str) -> Result<MonicPoly> {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if compact.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    // Split into signed terms at '+' and '-' (a leading sign binds to the
    // first term).
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for (i, ch) in compact.chars().enumerate() {
        match ch {
            '+' | '-' if i > 0 => {
                terms.push((neg, core::mem::take(&mut cur)));
                neg = ch == '-';
            }
            '-' => neg = true,
            _ => cur.push(ch),
        }
    }
    terms.push((neg, cur));

    let mut full: Vec<u64> = Vec::new();
    for (negated, term) in terms {
        let (coeff, power) = parse_term(spec, &term)?;
        let coeff = if negated { spec.neg_idx(coeff) } else { coeff };
        if full.len() <= power {
            full.resize(power + 1, 0);
        }
        full[power] = spec.add_idx(full[power], coeff);
    }
    while full.last() == Some(&0) {
        full.pop();
    }
    if full.last() != Some(&1) {
        return Err(Error::Parse("polynomial is not monic".into()));
    }
    from_full(spec, full)
}

/// One term: `<idx>`, `T`, `T^<e>`, `<idx>*T`, or `<idx>*T^<e>`.
fn parse_term(spec: &FieldSpec, term: &str) -> Result<(u64, usize)> {
    let bad = || Error::Parse(format!("bad polynomial term {term:?}"));
    let (coeff_s, var_s) = match term.split_once('*') {
        Some((c, v)) => (Some(c), v),
        None if term.starts_with('T') => (None, term),
        None => (Some(term), ""),
    };
    let coeff = match coeff_s {
        None | Some("") => 1,
        Some(c) => c.parse::<u64>().map_err(|_| bad())?,
    };
    if coeff >= spec.q() {
        return Err(Error::Parse(format!(
            "coefficient index {coeff} out of range for q={}",
            spec.q()
        )));
    }
    let power = match var_s {
        "" => 0,
        "T" => 1,
        _ => {
            let e = var_s.strip_prefix("T^").ok_or_else(bad)?;
            e.parse::<usize>().map_err(|_| bad())?
        }
    };
    Ok((coeff, power))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpoly::enumerate_monic;
    use alloc::vec;

    #[test]
    fn known_strings_format_and_parse() {
        let spec = FieldSpec::prime_field(3).unwrap();
        let f = MonicPoly::from_coeffs(&spec, vec![1, 2, 0]).unwrap();
        assert_eq!(format_monic(&f), "T^3+2*T+1");
        assert_eq!(format_compact(&f), "q=3;[1,2,0,1]");
        assert_eq!(parse_monic(&spec, "T^3+2*T+1").unwrap(), f);
        assert_eq!(parse_monic(&spec, "q=3;[1,2,0,1]").unwrap(), f);
        assert_eq!(parse_monic_auto("q=3;[1,2,0,1]").unwrap(), f);
        assert_eq!(parse_monic(&spec, " T^3 + 2*T + 1 ").unwrap(), f);
        // '-' means the negated element index: -T = 2*T over F_3.
        assert_eq!(
            parse_monic(&spec, "T^3-T+1").unwrap(),
            MonicPoly::from_coeffs(&spec, vec![1, 2, 0]).unwrap()
        );
    }

    #[test]
    fn degree_zero_and_bare_monomials() {
        let spec = FieldSpec::prime_field(2).unwrap();
        assert_eq!(format_monic(&MonicPoly::one(&spec)), "1");
        assert_eq!(parse_monic(&spec, "1").unwrap(), MonicPoly::one(&spec));
        let t = MonicPoly::t_pow(&spec, 1);
        assert_eq!(format_monic(&t), "T");
        assert_eq!(parse_monic(&spec, "T").unwrap(), t);
        let t5 = MonicPoly::t_pow(&spec, 5);
        assert_eq!(format_monic(&t5), "T^5");
        assert_eq!(parse_monic(&spec, "T^5").unwrap(), t5);
    }

    #[test]
    fn round_trips_are_bit_exact_exhaustively() {
        for q in [2u64, 3, 4, 9] {
            let spec = FieldSpec::from_cardinality(q).unwrap();
            for n in 0..=3usize {
                for f in enumerate_monic(&spec, n).unwrap() {
                    assert_eq!(parse_monic(&spec, &format_monic(&f)).unwrap(), f);
                    assert_eq!(parse_monic(&spec, &format_compact(&f)).unwrap(), f);
                    assert_eq!(parse_monic_auto(&format_compact(&f)).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn malformed_inputs_are_rejected() {
        let spec = FieldSpec::prime_field(3).unwrap();
        for bad in [
            "", "q=3;[]", "q=3;[1,2", "q=2;[1,1]", "T^", "5*T", "2*T^2+T", "x+1", "q=6;[1,1]",
        ] {
            assert!(parse_monic(&spec, bad).is_err(), "accepted {bad:?}");
        }
        // Non-monic after collecting terms: 2*T^2 alone.
        assert!(parse_monic(&spec, "2*T^2").is_err());
    }
}
