//! Certified continued-fraction expansion.
//!
//! A high-precision value `x` with absolute error bound `e` is turned into the
//! exact rational interval `[x - e, x + e]`. The Euclidean algorithm runs on
//! both endpoints in lockstep; a partial quotient is emitted only while the
//! endpoints agree on it, so every quotient is valid for every real in the
//! interval. When they disagree the stream ends and reports truncation.

use rug::{Integer, Rational};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::highprec::HpReal;

/// `p / q`, the `index`-th convergent.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Convergent {
    pub index: usize,
    #[serde(serialize_with = "crate::report::serialize_integer")]
    pub p: Integer,
    #[serde(serialize_with = "crate::report::serialize_integer")]
    pub q: Integer,
}

/// Partial quotients and whether precision ran out before the requested count.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CfExpansion {
    pub quotients: Vec<Integer>,
    pub truncated: bool,
}

/// Why a [`ConvergentStream`] stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamEnd {
    /// The input is an exact rational and its expansion is complete.
    Terminated,
    /// The interval straddles a quotient boundary: more digits are needed.
    Truncated,
}

/// Convergents of a real, one certified partial quotient at a time.
#[derive(Debug, Clone)]
pub struct ConvergentStream {
    lo: Rational,
    hi: Rational,
    index: usize,
    prev: (Integer, Integer),
    current: (Integer, Integer),
    end: Option<StreamEnd>,
}

/// Inflate the tracked error by 16 to cover rounding in the digit estimate.
const ERROR_SLACK_BITS: i32 = 4;

fn interval(x: &HpReal) -> Result<(Rational, Rational)> {
    let centre = x
        .value()
        .to_rational()
        .ok_or_else(|| Error::InvalidArgument("continued fraction of a non-finite value".into()))?;
    if x.is_exact() {
        return Ok((centre.clone(), centre));
    }
    let err_log10 = x.abs_error_log10();
    if !err_log10.is_finite() {
        return Err(Error::PrecisionExhausted { certified: 0 });
    }
    let exp = (err_log10 * std::f64::consts::LOG2_10).ceil() as i32 + ERROR_SLACK_BITS;
    let radius = if exp >= 0 {
        Rational::from(Integer::from(1) << exp as u32)
    } else {
        Rational::from((Integer::from(1), Integer::from(1) << exp.unsigned_abs()))
    };
    let lo = Rational::from(&centre - &radius);
    let hi = centre + radius;
    Ok((lo, hi))
}

fn floor_of(r: &Rational) -> Integer {
    Integer::from(r.floor_ref())
}

impl ConvergentStream {
    pub fn new(x: &HpReal) -> Result<Self> {
        if x.certified_sign()? != std::cmp::Ordering::Greater {
            return Err(Error::InvalidArgument("continued fraction needs x > 0".into()));
        }
        let (lo, hi) = interval(x)?;
        Ok(Self {
            lo,
            hi,
            index: 0,
            // (p_-2, q_-2) = (0, 1), (p_-1, q_-1) = (1, 0)
            prev: (Integer::from(0), Integer::from(1)),
            current: (Integer::from(1), Integer::from(0)),
            end: None,
        })
    }

    /// `None` while the stream can still produce convergents.
    pub fn end(&self) -> Option<StreamEnd> {
        self.end
    }

    /// Number of quotients emitted so far.
    pub fn certified(&self) -> usize {
        self.index
    }

    fn next_quotient(&mut self) -> Option<Integer> {
        if self.end.is_some() {
            return None;
        }
        let a = floor_of(&self.lo);
        if a != floor_of(&self.hi) {
            self.end = Some(StreamEnd::Truncated);
            return None;
        }
        self.lo -= &a;
        self.hi -= &a;
        match (self.lo.cmp0(), self.hi.cmp0()) {
            (std::cmp::Ordering::Equal, std::cmp::Ordering::Equal) => {
                self.end = Some(StreamEnd::Terminated);
            }
            (std::cmp::Ordering::Equal, _) | (_, std::cmp::Ordering::Equal) => {
                // one endpoint is rational with this quotient last: the next
                // quotient is unbounded on the interval
                self.end = Some(StreamEnd::Truncated);
            }
            _ => {
                // x -> 1/x reverses the order of the endpoints
                let lo = std::mem::take(&mut self.lo).recip();
                let hi = std::mem::take(&mut self.hi).recip();
                self.lo = hi;
                self.hi = lo;
            }
        }
        Some(a)
    }

    /// The next convergent together with the partial quotient that produced it.
    pub fn next_with_quotient(&mut self) -> Option<(Integer, Convergent)> {
        let a = self.next_quotient()?;
        let p = Integer::from(&a * &self.current.0) + &self.prev.0;
        let q = Integer::from(&a * &self.current.1) + &self.prev.1;
        self.prev = std::mem::replace(&mut self.current, (p.clone(), q.clone()));
        let conv = Convergent {
            index: self.index,
            p,
            q,
        };
        self.index += 1;
        Some((a, conv))
    }
}

impl Iterator for ConvergentStream {
    type Item = Convergent;

    fn next(&mut self) -> Option<Convergent> {
        self.next_with_quotient().map(|(_, c)| c)
    }
}

/// Up to `count` certified partial quotients of `x > 0`.
pub fn cf_expand(x: &HpReal, count: usize) -> Result<CfExpansion> {
    let mut stream = ConvergentStream::new(x)?;
    let mut quotients = Vec::with_capacity(count);
    while quotients.len() < count {
        match stream.next_quotient() {
            Some(a) => quotients.push(a),
            None => break,
        }
    }
    let truncated = quotients.len() < count && stream.end() == Some(StreamEnd::Truncated);
    Ok(CfExpansion { quotients, truncated })
}

pub fn convergents(x: &HpReal) -> Result<ConvergentStream> {
    ConvergentStream::new(x)
}

/// The first convergent of `x` with `q > min_q`.
pub fn first_convergent_with(x: &HpReal, min_q: &Integer) -> Result<Convergent> {
    let mut stream = convergents(x)?;
    for conv in stream.by_ref() {
        if conv.q > *min_q {
            return Ok(conv);
        }
    }
    Err(Error::PrecisionExhausted {
        certified: stream.certified(),
    })
}
