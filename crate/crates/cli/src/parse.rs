//! Small parsers for command-line values: t-grids, complex numbers, Cartan elements.

use horokit_core::rational::{self, Q};
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

/// Either "start:end:step" or an explicit list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TGrid {
    Range(String),
    List(Vec<f64>),
}

impl TGrid {
    pub fn values(&self) -> Result<Vec<f64>, String> {
        match self {
            TGrid::List(v) => Ok(v.clone()),
            TGrid::Range(s) => parse_range(s),
        }
    }
}

/// "a:b:h" walks from a towards b in steps of |h|, both ends included.
pub fn parse_range(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').map(str::trim).collect();
    if parts.len() == 1 && parts[0].is_empty() {
        return Ok(Vec::new());
    }
    if parts.len() == 1 {
        return s
            .split(',')
            .map(|x| {
                x.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("bad t value {x:?}"))
            })
            .collect();
    }
    if parts.len() != 3 {
        return Err(format!("t-grid {s:?} is not start:end:step"));
    }
    let num = |x: &str| {
        x.parse::<f64>()
            .map_err(|_| format!("bad number {x:?} in t-grid"))
    };
    let (a, b, h) = (num(parts[0])?, num(parts[1])?, num(parts[2])?.abs());
    if !(a.is_finite() && b.is_finite() && h > 0.0) {
        return Err(format!("t-grid {s:?} needs finite ends and a nonzero step"));
    }
    let count = ((b - a).abs() / h + 1e-9).floor() as usize;
    if count > 1_000_000 {
        return Err(format!("t-grid {s:?} has too many points"));
    }
    let dir = if b < a { -1.0 } else { 1.0 };
    Ok((0..=count).map(|k| a + dir * h * k as f64).collect())
}

/// "1.5-2i", "3i", "-0.25", "2+i".
pub fn parse_complex(s: &str) -> Result<Complex64, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("not a complex number: {s:?}");
    let Some(body) = t.strip_suffix('i') else {
        return t
            .parse::<f64>()
            .map(|re| Complex64::new(re, 0.0))
            .map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        x => x,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Diagonal entries of H in sl(n): a comma list "1/2,-1/2" or a combination of
/// h_k = E_kk - E_{k+1,k+1} such as "h/2" (sl(2) only) or "2h1 - h2/3".
pub fn parse_cartan(s: &str, n: usize) -> Result<Vec<Q>, String> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if !t.contains('h') {
        let v = t
            .split(',')
            .map(rational::parse)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| e.to_string())?;
        if v.len() != n {
            return Err(format!("expected {n} diagonal entries, got {}", v.len()));
        }
        return Ok(v);
    }
    let mut diag = vec![Q::zero(); n];
    let mut terms = Vec::new();
    let mut start = 0;
    for (k, c) in t.char_indices() {
        if (c == '+' || c == '-') && k > 0 {
            terms.push(&t[start..k]);
            start = k;
        }
    }
    terms.push(&t[start..]);
    for term in terms {
        let bad = || format!("cannot read term {term:?} of {s:?}");
        let (coef, rest) = term.split_once('h').ok_or_else(bad)?;
        let coef = coef.trim_end_matches('*');
        let mut c = match coef {
            "" | "+" => Q::one(),
            "-" => -Q::one(),
            x => rational::parse(x).map_err(|_| bad())?,
        };
        let digits: String = rest.chars().take_while(|c| c.is_ascii_digit()).collect();
        let tail = &rest[digits.len()..];
        let k = if digits.is_empty() {
            if n != 2 {
                return Err(format!(
                    "bare h is only defined for sl2; use h1..h{}",
                    n - 1
                ));
            }
            1
        } else {
            digits.parse::<usize>().map_err(|_| bad())?
        };
        if k == 0 || k >= n {
            return Err(format!("h{k} is not a coroot of sl{n}"));
        }
        if let Some(den) = tail.strip_prefix('/') {
            let d = rational::parse(den).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            c /= d;
        } else if !tail.is_empty() {
            return Err(bad());
        }
        diag[k - 1] += c.clone();
        diag[k] -= c;
    }
    Ok(diag)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("-4:-12:1").unwrap().len(), 9);
        assert_eq!(parse_range("0:-1:0.5").unwrap(), vec![0.0, -0.5, -1.0]);
        assert_eq!(parse_range("-1,-2").unwrap(), vec![-1.0, -2.0]);
        assert!(parse_range("").unwrap().is_empty());
        assert!(parse_range("1:2").is_err());
    }

    #[test]
    fn complex() {
        assert_eq!(parse_complex("1.5-2i").unwrap(), Complex64::new(1.5, -2.0));
        assert_eq!(parse_complex("3i").unwrap(), Complex64::new(0.0, 3.0));
        assert_eq!(parse_complex("-i").unwrap(), Complex64::new(0.0, -1.0));
        assert_eq!(parse_complex("-0.25").unwrap(), Complex64::new(-0.25, 0.0));
        assert_eq!(
            parse_complex("1e-3+1e2i").unwrap(),
            Complex64::new(1e-3, 100.0)
        );
        assert!(parse_complex("x").is_err());
    }

    #[test]
    fn cartan() {
        let q = |a: i64, b: i64| Q::new(a.into(), b.into());
        assert_eq!(parse_cartan("h/2", 2).unwrap(), vec![q(1, 2), q(-1, 2)]);
        assert_eq!(
            parse_cartan("1/2,-1/2", 2).unwrap(),
            vec![q(1, 2), q(-1, 2)]
        );
        assert_eq!(
            parse_cartan("2h1 - h2/3", 3).unwrap(),
            vec![q(2, 1), q(-7, 3), q(1, 3)]
        );
        assert!(parse_cartan("h", 3).is_err());
        assert!(parse_cartan("h3", 3).is_err());
    }
}
