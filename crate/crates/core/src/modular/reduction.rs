//! T/S reduction of points of the upper half plane to the standard fundamental domain.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Slack on |Re z| <= 1/2 and |z| >= 1.
pub const BOUNDARY_TOL: f64 = 1e-12;

const MAX_STEPS: usize = 100_000;

/// T(n): z -> z + n. S: z -> -1/z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Generator {
    T(i64),
    S,
}

impl Generator {
    pub fn matrix(self) -> [[i64; 2]; 2] {
        match self {
            Generator::T(n) => [[1, n], [0, 1]],
            Generator::S => [[0, -1], [1, 0]],
        }
    }

    pub fn apply(self, z: Complex64) -> Complex64 {
        match self {
            Generator::T(n) => z + n as f64,
            Generator::S => -z.inv(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfacePoint {
    pub z: Complex64,
    pub reduced: Complex64,
    /// Generators in the order they were applied to z.
    pub reducing_word: Vec<Generator>,
    /// The product of the word, so that matrix . z = reduced.
    pub matrix: [[i64; 2]; 2],
    pub height: f64,
}

pub fn mobius(m: &[[i64; 2]; 2], z: Complex64) -> Complex64 {
    (z * m[0][0] as f64 + m[0][1] as f64) / (z * m[1][0] as f64 + m[1][1] as f64)
}

pub fn apply_word(word: &[Generator], z: Complex64) -> Complex64 {
    word.iter().fold(z, |z, g| g.apply(z))
}

fn mat_mul(a: &[[i64; 2]; 2], b: &[[i64; 2]; 2]) -> Option<[[i64; 2]; 2]> {
    let e = |i: usize, j: usize| {
        a[i][0]
            .checked_mul(b[0][j])?
            .checked_add(a[i][1].checked_mul(b[1][j])?)
    };
    Some([[e(0, 0)?, e(0, 1)?], [e(1, 0)?, e(1, 1)?]])
}

pub fn in_fundamental_domain(z: Complex64) -> bool {
    z.re.abs() <= 0.5 + BOUNDARY_TOL && z.norm_sqr() >= 1.0 - BOUNDARY_TOL && z.im > 0.0
}

pub fn reduce_point(z: Complex64) -> Result<SurfacePoint> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Argument(format!("non-finite point {z}")));
    }
    if z.im <= 0.0 {
        return Err(Error::Argument(format!(
            "point {z} is not in the upper half plane"
        )));
    }
    let mut w = z;
    let mut word = Vec::new();
    let mut m = [[1i64, 0], [0, 1]];
    let overflow = || Error::Argument(format!("reduction of {z} overflows 64-bit matrix entries"));
    for _ in 0..MAX_STEPS {
        let n = (-w.re).round();
        if n != 0.0 {
            if n.abs() > i64::MAX as f64 / 2.0 {
                return Err(overflow());
            }
            let g = Generator::T(n as i64);
            w = g.apply(w);
            m = mat_mul(&g.matrix(), &m).ok_or_else(overflow)?;
            word.push(g);
        }
        if w.norm_sqr() < 1.0 - BOUNDARY_TOL {
            w = Generator::S.apply(w);
            m = mat_mul(&Generator::S.matrix(), &m).ok_or_else(overflow)?;
            word.push(Generator::S);
        } else {
            return Ok(SurfacePoint {
                z,
                reduced: w,
                reducing_word: word,
                matrix: m,
                height: w.im.sqrt(),
            });
        }
    }
    Err(Error::Argument(format!(
        "reduction of {z} did not terminate"
    )))
}

/// sqrt of the largest imaginary part on the orbit; NaN off the upper half plane.
pub fn invariant_height(z: Complex64) -> f64 {
    reduce_point(z).map(|p| p.height).unwrap_or(f64::NAN)
}
