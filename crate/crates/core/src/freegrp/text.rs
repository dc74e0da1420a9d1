//! Plain-text polynomial format.
//!
//! One term per line, `re im : letters...`, letters as signed generator
//! indices and `:` alone for the identity. Blank lines and lines starting
//! with `#` are ignored, except a `# rank N` header which fixes the rank.
//! Floats are written in shortest round-trip form, so writing and reading
//! back is bit-exact.
//!
//! ```text
//! # rank 2
//! 1e0 0e0 :
//! -2.5e-1 1e0 : 1 -2
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_complex::Complex64;

use super::poly::GroupPolynomial;
use super::word::Word;
use crate::error::{Error, Result};

pub fn format_polynomial(x: &GroupPolynomial) -> String {
    let mut out = format!("# rank {}\n", x.rank());
    for (w, c) in x.iter() {
        let _ = write!(out, "{:e} {:e} :", c.re, c.im);
        for l in w.letters() {
            let _ = write!(out, " {l}");
        }
        out.push('\n');
    }
    out
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Parses the text format. The rank is `rank` if given, else the `# rank`
/// header, else the largest generator index used (at least 1). Repeated
/// words, non-reduced words and non-finite coefficients are errors; zero
/// coefficients are dropped.
pub fn parse_polynomial(text: &str, rank: Option<usize>) -> Result<GroupPolynomial> {
    let mut header_rank = None;
    let mut terms = Vec::new();
    let mut seen = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            let mut parts = comment.split_whitespace();
            if parts.next() == Some("rank") {
                let r = parts
                    .next()
                    .and_then(|s| s.parse::<usize>().ok())
                    .ok_or_else(|| parse_err(line_no, "malformed rank header"))?;
                header_rank = Some(r);
            }
            continue;
        }
        let (coeff, letters) = line
            .split_once(':')
            .ok_or_else(|| parse_err(line_no, "expected 're im : letters'"))?;
        let nums: Vec<&str> = coeff.split_whitespace().collect();
        if nums.len() != 2 {
            return Err(parse_err(line_no, "expected exactly two coefficient fields"));
        }
        let parse_f = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| parse_err(line_no, format!("bad number '{s}'")))?;
            if !v.is_finite() {
                return Err(parse_err(line_no, "coefficients must be finite"));
            }
            Ok(v)
        };
        let c = Complex64::new(parse_f(nums[0])?, parse_f(nums[1])?);
        let letters = letters
            .split_whitespace()
            .map(|s| s.parse::<i32>().map_err(|_| parse_err(line_no, format!("bad letter '{s}'"))))
            .collect::<Result<Vec<_>>>()?;
        let word = Word::new(letters).map_err(|e| parse_err(line_no, e.to_string()))?;
        if !seen.insert(word.clone()) {
            return Err(parse_err(line_no, format!("word {word} appears twice")));
        }
        terms.push((word, c));
    }
    let used = terms.iter().map(|(w, _)| w.max_generator()).max().unwrap_or(0).max(1);
    let rank = rank.or(header_rank).unwrap_or(used);
    if used > rank && !terms.is_empty() {
        return Err(parse_err(0, format!("generator {used} exceeds rank {rank}")));
    }
    GroupPolynomial::from_terms(rank, terms)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::trial_rng;
    use proptest::prelude::*;

    #[test]
    fn example_round_trip() {
        let text = "# rank 2\n1e0 0e0 :\n-2.5e-1 1e0 : 1 -2\n";
        let x = parse_polynomial(text, None).unwrap();
        assert_eq!(x.rank(), 2);
        assert_eq!(x.len(), 2);
        assert_eq!(format_polynomial(&x), text);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_polynomial("1 0 : 1 -1", None), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_polynomial("1 0 : 1\n\n2 0 : 1", None),
            Err(Error::Parse { line: 3, .. })
        ));
        assert!(parse_polynomial("1 : 1", None).is_err());
        assert!(parse_polynomial("1 0 1", None).is_err());
        assert!(parse_polynomial("nan 0 : 1", None).is_err());
        assert!(parse_polynomial("1 0 : x", None).is_err());
        assert!(parse_polynomial("1 0 : 3", Some(2)).is_err());
        assert!(parse_polynomial("# rank two\n1 0 :", None).is_err());
    }

    #[test]
    fn zeros_are_dropped_and_rank_inferred() {
        let x = parse_polynomial("# a comment\n0 0 : 1\n1 0 : -3 2\n", None).unwrap();
        assert_eq!(x.rank(), 3);
        assert_eq!(x.len(), 1);
    }

    proptest! {
        #[test]
        fn random_polynomials_round_trip_bit_exactly(seed in any::<u64>(), rank in 1usize..4, radius in 0usize..3) {
            let x = GroupPolynomial::random_on_ball(rank, radius, &mut trial_rng(seed, 0));
            let back = parse_polynomial(&format_polynomial(&x), None).unwrap();
            prop_assert_eq!(back.rank(), x.rank());
            for ((w1, c1), (w2, c2)) in x.iter().zip(back.iter()) {
                prop_assert_eq!(w1, w2);
                prop_assert_eq!(c1.re.to_bits(), c2.re.to_bits());
                prop_assert_eq!(c1.im.to_bits(), c2.im.to_bits());
            }
            prop_assert_eq!(back.len(), x.len());
        }
    }
}
