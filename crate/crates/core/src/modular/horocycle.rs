//! Averages along translated horocycle pieces, with u(s) g_t . i = s + i e^t.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::eisenstein::{Bump, TestFunction};
use super::quad::{self, NODES};
use super::reduction::invariant_height;
use crate::{Error, Result};

/// Quadrature points per oscillation scale; N(t) >= 20 e^{|t|} follows.
pub const MIN_POINTS_PER_SCALE: f64 = 20.0;

/// Default density; at 20 the panel-halving estimate is not always below 10% of the error.
pub const DEFAULT_POINTS_PER_SCALE: f64 = 80.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Weight {
    /// Indicator of [0, 1] on the period-1 horocycle through x0.
    Closed,
    /// Smooth bump on [0, 1] along x0 u(s) g_t.
    Bump,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HoroExperiment {
    pub x0: Complex64,
    pub weight: Weight,
    pub t_grid: Vec<f64>,
    #[serde(default = "default_pps")]
    pub points_per_scale: f64,
}

fn default_pps() -> f64 {
    DEFAULT_POINTS_PER_SCALE
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HoroRow {
    pub t: f64,
    pub average: f64,
    pub mean_target: f64,
    pub error: f64,
    pub quad_err: f64,
    pub n: usize,
}

impl HoroRow {
    /// Quadrature estimate below 10% of the measured error.
    pub fn resolved(&self) -> bool {
        self.quad_err < 0.1 * self.error
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeightRow {
    pub t: f64,
    pub value: f64,
    pub height_x0: f64,
    pub ratio: f64,
    pub quad_err: f64,
    pub n: usize,
}

/// The parametrized piece s -> z(s), s in [0, 1], at flow time t.
#[derive(Debug, Clone, Copy)]
struct Path {
    base: f64,
    speed: f64,
    y: f64,
}

impl Path {
    fn new(x0: Complex64, closed: bool, t: f64) -> Self {
        let speed = if closed { 1.0 } else { x0.im };
        Path {
            base: x0.re,
            speed,
            y: x0.im * t.exp(),
        }
    }

    fn at(&self, s: f64) -> Complex64 {
        Complex64::new(self.base + self.speed * s, self.y)
    }

    /// Panels so that every stretch of length min(y, 1) in x gets `pps` nodes, and never fewer
    /// than pps e^{|t|} / NODES.
    fn panels(&self, t: f64, pps: f64) -> usize {
        let scales = (self.speed / self.y.min(1.0)).max(t.abs().exp());
        (scales * pps / NODES as f64).ceil() as usize
    }
}

/// Nodes used at flow time t (the panel-halving pass adds half as many).
pub fn quadrature_points(x0: Complex64, weight: Weight, t: f64, points_per_scale: f64) -> usize {
    Path::new(x0, weight == Weight::Closed, t).panels(t, points_per_scale) * NODES
}

fn check_grid(x0: Complex64, t_grid: &[f64], pps: f64) -> Result<()> {
    if !(x0.re.is_finite() && x0.im.is_finite() && x0.im > 0.0) {
        return Err(Error::Argument(format!(
            "base point {x0} is not in the upper half plane"
        )));
    }
    if t_grid.is_empty() {
        return Err(Error::Argument("empty t-grid".into()));
    }
    if let Some(t) = t_grid.iter().find(|t| !(t.is_finite() && **t <= 0.0)) {
        return Err(Error::Argument(format!(
            "t = {t} is not a finite value <= 0"
        )));
    }
    if !(pps >= MIN_POINTS_PER_SCALE) {
        return Err(Error::Resolution(format!(
            "{pps} points per scale is below {MIN_POINTS_PER_SCALE}, so N(t) < 20 e^|t|"
        )));
    }
    Ok(())
}

pub fn horocycle_average(exp: &HoroExperiment, f: &TestFunction) -> Result<Vec<HoroRow>> {
    check_grid(exp.x0, &exp.t_grid, exp.points_per_scale)?;
    let closed = exp.weight == Weight::Closed;
    let chi = Bump::new(0.0, 1.0)?;
    let chi_mass = if closed { 1.0 } else { chi.integral() };
    let mean_target = f.mean * chi_mass;
    exp.t_grid
        .par_iter()
        .map(|&t| {
            let path = Path::new(exp.x0, closed, t);
            let panels = path.panels(t, exp.points_per_scale);
            let g = |s: f64| {
                let w = if closed { 1.0 } else { chi.eval(s) };
                if w == 0.0 {
                    0.0
                } else {
                    w * f.eval(path.at(s)).unwrap_or(f64::NAN)
                }
            };
            let (average, quad_err) = quad::composite_with_estimate(&g, 0.0, 1.0, panels);
            if !average.is_finite() {
                return Err(Error::Invariant(format!(
                    "non-finite horocycle average at t = {t}"
                )));
            }
            Ok(HoroRow {
                t,
                average,
                mean_target,
                error: (average - mean_target).abs(),
                quad_err,
                n: panels * NODES,
            })
        })
        .collect()
}

/// int_0^1 height(x0 u(s) g_t) ds and its ratio to height(x0)^2.
pub fn height_average(
    x0: Complex64,
    t_grid: &[f64],
    points_per_scale: f64,
) -> Result<Vec<HeightRow>> {
    check_grid(x0, t_grid, points_per_scale)?;
    let height_x0 = invariant_height(x0);
    t_grid
        .par_iter()
        .map(|&t| {
            let path = Path::new(x0, false, t);
            let panels = path.panels(t, points_per_scale);
            let (value, quad_err) =
                quad::composite_with_estimate(&|s| invariant_height(path.at(s)), 0.0, 1.0, panels);
            if !value.is_finite() {
                return Err(Error::Invariant(format!(
                    "non-finite height average at t = {t}"
                )));
            }
            Ok(HeightRow {
                t,
                value,
                height_x0,
                ratio: value / (height_x0 * height_x0),
                quad_err,
                n: panels * NODES,
            })
        })
        .collect()
}

/// (3/pi) int_F g dx dy / y^2 over |x| <= 1/2, y >= sqrt(1 - x^2), with y = y_min / u^2.
pub fn fundamental_domain_integral<G>(g: &G, panels: usize) -> f64
where
    G: Fn(f64, f64) -> f64 + Sync,
{
    let inner = |x: f64| {
        let y_min = (1.0 - x * x).sqrt();
        quad::composite(
            &|u: f64| g(x, y_min / (u * u)) * 2.0 * u / y_min,
            0.0,
            1.0,
            panels,
        )
    };
    3.0 / PI * quad::composite(&inner, -0.5, 0.5, panels)
}

/// Normalized integral of the invariant height over the surface.
pub fn height_l1(panels: usize) -> f64 {
    fundamental_domain_integral(&|_, y| y.sqrt(), panels)
}

pub fn horo_csv(rows: &[HoroRow]) -> String {
    let mut out = String::from("t,average,mean_target,error,quad_err,N\n");
    for r in rows {
        out.push_str(&format!(
            "{},{:e},{:e},{:e},{:e},{}\n",
            r.t, r.average, r.mean_target, r.error, r.quad_err, r.n
        ));
    }
    out
}

pub fn height_csv(rows: &[HeightRow]) -> String {
    let mut out = String::from("t,value,height_x0,ratio,quad_err,N\n");
    for r in rows {
        out.push_str(&format!(
            "{},{:e},{:e},{:e},{:e},{}\n",
            r.t, r.value, r.height_x0, r.ratio, r.quad_err, r.n
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn closed(t_grid: Vec<f64>) -> HoroExperiment {
        HoroExperiment {
            x0: Complex64::i(),
            weight: Weight::Closed,
            t_grid,
            points_per_scale: 20.0,
        }
    }

    #[test]
    fn resolution_enforced() {
        let f = TestFunction::new(1.2, 3.0).unwrap();
        let mut e = closed(vec![-2.0]);
        e.points_per_scale = 10.0;
        assert!(matches!(
            horocycle_average(&e, &f),
            Err(Error::Resolution(_))
        ));
        assert!(matches!(
            horocycle_average(&closed(vec![]), &f),
            Err(Error::Argument(_))
        ));
        assert!(matches!(
            horocycle_average(&closed(vec![0.5]), &f),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn panel_count_meets_invariant() {
        for t in [0.0, -1.0, -5.0, -12.0] {
            for x0 in [
                Complex64::i(),
                Complex64::new(0.3, 7.0),
                Complex64::new(0.0, 0.2),
            ] {
                for closed in [true, false] {
                    let n = Path::new(x0, closed, t).panels(t, 20.0) * NODES;
                    assert!(n as f64 >= 20.0 * t.abs().exp());
                }
            }
        }
    }

    #[test]
    fn zero_function_average() {
        let f = TestFunction::with_amplitude(1.2, 3.0, 0.0).unwrap();
        let rows = horocycle_average(&closed(vec![0.0, -2.0]), &f).unwrap();
        assert!(rows.iter().all(|r| r.average == 0.0 && r.error == 0.0));
    }

    #[test]
    fn csv_header() {
        assert!(horo_csv(&[]).starts_with("t,average,mean_target,error,quad_err,N"));
    }
}
