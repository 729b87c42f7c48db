//! Repdigits, three-block palindromes `d1^l d2^m d1^l`, and the exhaustive
//! search over small Perrin indices.

use std::fmt;

use rayon::prelude::*;
use rug::ops::Pow;
use rug::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perrin::perrin_stream;

/// The digit string `d1` repeated `ell` times, `d2` repeated `m` times, then
/// `d1` repeated `ell` times again.
///
/// `m = 0` is the two-block case `d1^(2 ell)`; it carries no middle digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PalindromicPattern {
    d1: u8,
    d2: Option<u8>,
    ell: u32,
    m: u32,
}

impl PalindromicPattern {
    pub fn new(d1: u8, d2: Option<u8>, ell: u32, m: u32) -> Result<Self> {
        if !(1..=9).contains(&d1) {
            return Err(Error::InvalidArgument(format!("leading digit must be 1..=9, got {d1}")));
        }
        if ell == 0 {
            return Err(Error::InvalidArgument("outer block length must be at least 1".into()));
        }
        match (d2, m) {
            (Some(d), _) if d > 9 => Err(Error::InvalidArgument(format!("middle digit must be 0..=9, got {d}"))),
            (Some(_), 0) => Err(Error::InvalidArgument("a middle digit needs m >= 1".into())),
            (None, m) if m > 0 => Err(Error::InvalidArgument("m >= 1 needs a middle digit".into())),
            _ => Ok(Self { d1, d2, ell, m }),
        }
    }

    pub fn d1(&self) -> u8 {
        self.d1
    }

    pub fn d2(&self) -> Option<u8> {
        self.d2
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of decimal digits, `2 ell + m`.
    pub fn digit_count(&self) -> u32 {
        2 * self.ell + self.m
    }

    /// The digit string assembled block by block.
    pub fn to_digit_string(&self) -> String {
        let outer = char::from(b'0' + self.d1).to_string().repeat(self.ell as usize);
        let middle = self
            .d2
            .map(|d| char::from(b'0' + d).to_string().repeat(self.m as usize))
            .unwrap_or_default();
        format!("{outer}{middle}{outer}")
    }
}

impl fmt::Display for PalindromicPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.d2 {
            Some(d2) => write!(f, "{}^{} {}^{} {}^{}", self.d1, self.ell, d2, self.m, self.d1, self.ell),
            None => write!(f, "{}^{} {}^{}", self.d1, self.ell, self.d1, self.ell),
        }
    }
}

/// `d (10^len - 1) / 9`.
///
/// # Panics
/// If `d > 9` or `len == 0`.
pub fn repdigit_value(d: u8, len: u32) -> Integer {
    assert!(d <= 9 && len >= 1, "repdigit needs d in 0..=9 and len >= 1");
    (Integer::from(10).pow(len) - 1u32) / 9u32 * u32::from(d)
}

/// Closed form
/// `(d1 10^(2l+m) - (d1-d2) 10^(l+m) + (d1-d2) 10^l - d1) / 9`.
pub fn concat3(p: &PalindromicPattern) -> Integer {
    let d1 = i64::from(p.d1);
    // with m = 0 the middle terms cancel whatever d2 is
    let diff = d1 - i64::from(p.d2.unwrap_or(p.d1));
    let total: Integer = Integer::from(Integer::u_pow_u(10, 2 * p.ell + p.m)) * d1
        - Integer::from(Integer::u_pow_u(10, p.ell + p.m)) * diff
        + Integer::from(Integer::u_pow_u(10, p.ell)) * diff
        - d1;
    let (q, r) = total.div_rem(Integer::from(9));
    debug_assert_eq!(r, 0);
    q
}

pub fn is_palindrome(n: &Integer) -> bool {
    let s = n.to_string_radix(10);
    s.bytes().eq(s.bytes().rev())
}

fn run_length(digits: &[u8]) -> usize {
    digits.iter().take_while(|&&c| c == digits[0]).count()
}

/// The pattern with the largest `ell` whose value is `n`, if any.
///
/// Even-length repdigits such as `22` come back as the two-block pattern with
/// `m = 0`.
pub fn match_pattern(n: &Integer) -> Option<PalindromicPattern> {
    match_digits(n, false)
}

/// Like [`match_pattern`] but only accepts `ell >= 1` and `m >= 1`.
pub fn match_pattern_strict(n: &Integer) -> Option<PalindromicPattern> {
    match_digits(n, true)
}

fn match_digits(n: &Integer, strict: bool) -> Option<PalindromicPattern> {
    if *n < 1 {
        return None;
    }
    let s = n.to_string_radix(10).into_bytes();
    let len = s.len();
    let d1 = s[0] - b'0';
    let lead = run_length(&s);
    if lead == len {
        // repdigit: d1^len
        let (ell, m) = if len.is_multiple_of(2) && !strict {
            (len / 2, 0)
        } else {
            let ell = (len - 1) / 2;
            (ell, len - 2 * ell)
        };
        if ell == 0 || (strict && m == 0) {
            return None;
        }
        let d2 = (m > 0).then_some(d1);
        return PalindromicPattern::new(d1, d2, ell as u32, m as u32).ok();
    }
    let mut rev = s.clone();
    rev.reverse();
    if rev[0] != s[0] || run_length(&rev) != lead {
        return None;
    }
    let middle = &s[lead..len - lead];
    if run_length(middle) != middle.len() {
        return None;
    }
    PalindromicPattern::new(d1, Some(middle[0] - b'0'), lead as u32, middle.len() as u32).ok()
}

/// A Perrin number of palindromic three-block shape.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchHit {
    pub index: u64,
    #[serde(serialize_with = "crate::report::serialize_integer")]
    pub value: Integer,
    pub pattern: PalindromicPattern,
}

/// Scan `P_3 ..= P_{n_max}` for palindromic concatenations of two repdigits.
///
/// `strict_three_block` requires `m >= 1`; otherwise the two-block `m = 0`
/// shape is admitted too. Hits come back in index order.
pub fn search_low_range(n_max: u64, strict_three_block: bool) -> Result<Vec<SearchHit>> {
    if n_max < 2 {
        return Err(Error::InvalidArgument(format!("n_max must be at least 2, got {n_max}")));
    }
    let values = perrin_stream(n_max);
    let hits = values
        .into_par_iter()
        .filter(|v| v.index >= 3)
        .filter_map(|v| {
            let pattern = if strict_three_block {
                match_pattern_strict(&v.value)?
            } else {
                match_pattern(&v.value)?
            };
            assert_eq!(concat3(&pattern), v.value, "closed form disagrees with digit match");
            Some(SearchHit {
                index: v.index,
                value: v.value,
                pattern,
            })
        })
        .collect();
    Ok(hits)
}
