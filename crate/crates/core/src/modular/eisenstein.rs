//! Incomplete Eisenstein series sum over Gamma_inf \ Gamma of psi(Im gamma z).

use std::f64::consts::PI;

use num_complex::Complex64;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::quad;
use super::reduction::reduce_point;
use crate::{Error, Result};

/// exp(1 - 1/(1 - u^2)) with u the affine coordinate of [lo, hi] onto [-1, 1]; peak value 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub lo: f64,
    pub hi: f64,
}

impl Bump {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Argument(format!(
                "bump support [{lo}, {hi}] is empty or not finite"
            )));
        }
        Ok(Bump { lo, hi })
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x <= self.lo || x >= self.hi {
            return 0.0;
        }
        let u = (2.0 * x - self.lo - self.hi) / (self.hi - self.lo);
        (1.0 - 1.0 / (1.0 - u * u)).exp()
    }

    pub fn integral(&self) -> f64 {
        quad::composite(&|x| self.eval(x), self.lo, self.hi, 64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub psi: Bump,
    pub amplitude: f64,
    /// (3/pi) int psi(y) y^-2 dy.
    pub mean: f64,
}

impl TestFunction {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        Self::with_amplitude(a, b, 1.0)
    }

    pub fn with_amplitude(a: f64, b: f64, amplitude: f64) -> Result<Self> {
        if !(a > 1.0) {
            return Err(Error::Argument(format!(
                "profile support must start above 1, got a = {a}"
            )));
        }
        if !amplitude.is_finite() {
            return Err(Error::Argument("amplitude is not finite".into()));
        }
        let psi = Bump::new(a, b)?;
        let q = quad::composite(&|y| psi.eval(y) / (y * y), a, b, 400);
        Ok(TestFunction {
            psi,
            amplitude,
            mean: 3.0 / PI * amplitude * q,
        })
    }

    pub fn profile(&self, y: f64) -> f64 {
        self.amplitude * self.psi.eval(y)
    }

    /// Sum over coprime (c, d) with c > 0, plus (0, 1), restricted to |cz + d|^2 <= y/a.
    pub fn eval_unreduced(&self, z: Complex64) -> f64 {
        let (x, y, a) = (z.re, z.im, self.psi.lo);
        let mut out = self.profile(y);
        let cmax = (1.0 / (a * y)).sqrt().floor() as i64;
        for c in 1..=cmax {
            let cf = c as f64;
            let r2 = y / a - (cf * y) * (cf * y);
            if r2 < 0.0 {
                continue;
            }
            let r = r2.sqrt();
            let (dlo, dhi) = ((-cf * x - r).ceil() as i64, (-cf * x + r).floor() as i64);
            for d in dlo..=dhi {
                if c.gcd(&d) == 1 {
                    let df = d as f64;
                    out += self.profile(y / ((cf * x + df).powi(2) + (cf * y).powi(2)));
                }
            }
        }
        out
    }

    /// Evaluates at the reduced representative, where only c <= 1 can contribute.
    pub fn eval(&self, z: Complex64) -> Result<f64> {
        Ok(self.eval_unreduced(reduce_point(z)?.reduced))
    }

    pub fn eval_centered(&self, z: Complex64) -> Result<f64> {
        Ok(self.eval(z)? - self.mean)
    }
}
