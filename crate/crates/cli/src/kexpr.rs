//! The exponent expression language.
//!
//! Exponents `k` in experiments are often astronomically large but highly
//! structured — products of values `q^i − 1`. The accepted grammar is
//! exactly products and powers of such factors and decimal literals:
//!
//! ```text
//! expr := term ('*' term)*
//! term := atom ('^' uint)?
//! atom := uint | 'q^' uint '-1' | 'prod(q^i-1,i=' uint '..' uint ')' | '(' expr ')'
//! ```
//!
//! `q` is substituted with the experiment's field cardinality, and
//! `prod(q^i-1,i=a..b)` expands to `Π_{i=a}^{b} (q^i − 1)` (inclusive).
//! Whitespace is ignored. Examples, at `q = 2`:
//!
//! ```text
//! 18446744073709551629            (a decimal literal, 2^64 + 13)
//! q^64-1                          (2^64 − 1)
//! prod(q^i-1,i=1..4)*64           (|GL_4(F_2)| = 20160)
//! (q^3-1)^2 * 5                   (245)
//! ```

use anyhow::{anyhow, bail, Result};
use num_bigint::BigUint;
use num_traits::One;

/// Parses an exponent expression, substituting `q`.
pub fn parse_k(src: &str, q: u64) -> Result<BigUint> {
    let compact: String = src.chars().filter(|c| !c.is_whitespace()).collect();
    let mut p = Parser {
        bytes: compact.as_bytes(),
        pos: 0,
        q,
    };
    let value = p.expr()?;
    if p.pos != p.bytes.len() {
        bail!("trailing input at byte {} of {src:?}", p.pos);
    }
    Ok(value)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    q: u64,
}

impl Parser<'_> {
    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        if self.bytes[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            bail!("expected {token:?} at byte {}", self.pos)
        }
    }

    fn uint(&mut self) -> Result<BigUint> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        if self.pos == start {
            bail!("expected a number at byte {start}");
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        digits
            .parse::<BigUint>()
            .map_err(|e| anyhow!("bad number {digits:?}: {e}"))
    }

    fn small_uint(&mut self) -> Result<u32> {
        let v = self.uint()?;
        u32::try_from(&v).map_err(|_| anyhow!("exponent {v} does not fit in 32 bits"))
    }

    fn expr(&mut self) -> Result<BigUint> {
        let mut acc = self.term()?;
        while self.eat("*") {
            acc *= self.term()?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<BigUint> {
        let base = self.atom()?;
        if self.eat("^") {
            let e = self.small_uint()?;
            Ok(base.pow(e))
        } else {
            Ok(base)
        }
    }

    fn q_pow_minus_one(&mut self, i: u32) -> BigUint {
        BigUint::from(self.q).pow(i) - BigUint::one()
    }

    fn atom(&mut self) -> Result<BigUint> {
        if self.eat("prod(q^i-1,i=") {
            let lo = self.small_uint()?;
            self.expect("..")?;
            let hi = self.small_uint()?;
            self.expect(")")?;
            if lo == 0 || lo > hi {
                bail!("prod needs 1 ≤ a ≤ b, got {lo}..{hi}");
            }
            let mut acc = BigUint::one();
            for i in lo..=hi {
                acc *= self.q_pow_minus_one(i);
            }
            return Ok(acc);
        }
        if self.eat("q^") {
            let i = self.small_uint()?;
            self.expect("-1")?;
            if i == 0 {
                bail!("q^0-1 is zero");
            }
            return Ok(self.q_pow_minus_one(i));
        }
        if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(inner);
        }
        self.uint()
    }
}
