//! Grid checks of |kernel| against the decay envelopes of the representation theorems.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernels::Burger1Kernels;
use super::schedule::Burger2Kernels;
use crate::rational;

/// Points lo * (i + 1) / n for i = 0..n, so the axis t = 0 is excluded.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub lo: f64,
    pub n: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { lo: -20.0, n: 50 }
    }
}

impl GridSpec {
    pub fn points(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| self.lo * (i + 1) as f64 / self.n as f64)
            .collect()
    }
}

/// Ratios above sup over [lo/2, 0] by this factor count as unbounded growth.
pub const GROWTH_FACTOR: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub t: f64,
    pub s: Option<f64>,
    pub value: f64,
    pub envelope: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub envelope: String,
    /// sup of |kernel| / envelope over the grid.
    pub constant: f64,
    /// sup over [lo k / 4, 0] for k = 1..4.
    pub nested_sups: Vec<f64>,
    pub diverging: bool,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    fn finish(name: String, envelope: String, rows: Vec<BoundRow>, lo: f64) -> Self {
        let sup = |cut: f64| {
            rows.iter()
                .filter(|r| r.t >= cut && r.s.is_none_or(|s| s >= cut))
                .map(|r| r.ratio)
                .fold(
                    0.0,
                    |a: f64, b| if b.is_nan() { f64::INFINITY } else { a.max(b) },
                )
        };
        let nested_sups: Vec<f64> = (1..=4).map(|k| sup(lo * k as f64 / 4.0 - 1e-12)).collect();
        let constant = nested_sups[3];
        let monotone = nested_sups[1] < nested_sups[2] && nested_sups[2] < nested_sups[3];
        let diverging = !constant.is_finite()
            || (monotone && nested_sups[3] > GROWTH_FACTOR * nested_sups[1].max(f64::MIN_POSITIVE));
        BoundReport {
            name,
            envelope,
            constant,
            nested_sups,
            diverging,
            rows,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,s,value,envelope,ratio\n");
        for r in &self.rows {
            let s = r.s.map(|s| format!("{s}")).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{:e},{:e},{:e}\n",
                r.t, s, r.value, r.envelope, r.ratio
            ));
        }
        out
    }
}

fn ratio(value: f64, envelope: f64) -> f64 {
    if value == 0.0 {
        0.0
    } else {
        value / envelope
    }
}

pub fn check_2d<K, E>(
    name: &str,
    envelope_desc: &str,
    grid: &GridSpec,
    kernel: K,
    envelope: E,
) -> BoundReport
where
    K: Fn(f64, f64) -> Complex64 + Sync,
    E: Fn(f64, f64) -> f64 + Sync,
{
    let pts = grid.points();
    let rows: Vec<BoundRow> = pts
        .par_iter()
        .flat_map_iter(|&t| {
            let (kernel, envelope) = (&kernel, &envelope);
            pts.iter().map(move |&s| {
                let value = kernel(t, s).norm();
                let env = envelope(t, s);
                BoundRow {
                    t,
                    s: Some(s),
                    value,
                    envelope: env,
                    ratio: ratio(value, env),
                }
            })
        })
        .collect();
    BoundReport::finish(name.into(), envelope_desc.into(), rows, grid.lo)
}

pub fn check_1d<K, E>(
    name: &str,
    envelope_desc: &str,
    grid: &GridSpec,
    kernel: K,
    envelope: E,
) -> BoundReport
where
    K: Fn(f64) -> Complex64 + Sync,
    E: Fn(f64) -> f64 + Sync,
{
    let rows: Vec<BoundRow> = grid
        .points()
        .par_iter()
        .map(|&t| {
            let value = kernel(t).norm();
            let env = envelope(t);
            BoundRow {
                t,
                s: None,
                value,
                envelope: env,
                ratio: ratio(value, env),
            }
        })
        .collect();
    BoundReport::finish(name.into(), envelope_desc.into(), rows, grid.lo)
}

/// |F| against |t|^{W-1-m0} |s|^{m0} e^{beta(t-s)}.
pub fn verify_f_bound(k: &Burger1Kernels, grid: &GridSpec) -> BoundReport {
    let (w, m0, beta) = (k.spec.w() as i32, k.spec.m0() as i32, k.spec.beta);
    check_2d(
        "F",
        "|t|^(W-1-m0) |s|^m0 e^(beta(t-s))",
        grid,
        |t, s| k.f.eval(t, s),
        |t, s| t.abs().powi(w - 1 - m0) * s.abs().powi(m0) * (beta * (t - s)).exp(),
    )
}

/// |F_i| against (1 + |lambda|^W)(1 + |t|^W) e^{beta t}.
pub fn verify_fi_bound(k: &Burger1Kernels, grid: &GridSpec) -> Vec<BoundReport> {
    let (w, beta) = (k.spec.w() as i32, k.spec.beta);
    let lam = 1.0 + k.spec.lambda_inf().powi(w);
    k.fi.iter()
        .enumerate()
        .map(|(i, p)| {
            check_1d(
                &format!("F_{i}"),
                "(1+|lambda|^W)(1+|t|^W) e^(beta t)",
                grid,
                |t| p.eval(t),
                |t| lam * (1.0 + t.abs().powi(w)) * (beta * t).exp(),
            )
        })
        .collect()
}

pub fn c_envelope(w: usize, eta: f64, alpha: f64) -> impl Fn(f64, f64) -> f64 + Sync {
    move |t: f64, s: f64| (1.0 + t.abs().powi(w as i32)) * (eta * t + alpha / 5.0 * s).exp()
}

fn index_name(prefix: &str, idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(|j| j.to_string()).collect();
    format!("{prefix}[{}]", parts.join(","))
}

/// |C_k| against (1+|t|^W) e^{eta t + alpha s / 5} and |D_{j,i}| against
/// (1+|lambda|^W)(1+|t|^W) e^{eta t}.
pub fn verify_burger2_bounds(k: &Burger2Kernels, grid: &GridSpec) -> Vec<BoundReport> {
    let eta = rational::parse(&k.schedule.eta)
        .map(|x| rational::to_f64(&x))
        .unwrap_or(f64::NAN);
    let alpha = rational::parse(&k.schedule.alpha)
        .map(|x| rational::to_f64(&x))
        .unwrap_or(f64::NAN);
    let w = k.w();
    let lam = 1.0 + k.lambda_inf().powi(w as i32);
    let mut out: Vec<BoundReport> =
        k.c.iter()
            .map(|c| {
                check_2d(
                    &index_name("C", &c.index),
                    "(1+|t|^W) e^(eta t + alpha s/5)",
                    grid,
                    |t, s| c.kernel.eval(t, s),
                    c_envelope(w, eta, alpha),
                )
            })
            .collect();
    for d in &k.d {
        for (i, p) in d.kernels.iter().enumerate() {
            out.push(check_1d(
                &format!("{}_{i}", index_name("D", &d.index)),
                "(1+|lambda|^W)(1+|t|^W) e^(eta t)",
                grid,
                |t| p.eval(t),
                |t| lam * (1.0 + t.abs().powi(w as i32)) * (eta * t).exp(),
            ));
        }
    }
    out
}

/// Kernel families accepted by `verify_kernel_bounds`.
#[derive(Debug, Clone)]
pub enum KernelSet<'a> {
    Burger1(&'a Burger1Kernels),
    Burger2(&'a Burger2Kernels),
}

pub fn verify_kernel_bounds(kernels: KernelSet<'_>, grid: &GridSpec) -> Vec<BoundReport> {
    match kernels {
        KernelSet::Burger1(k) => {
            let mut out = vec![verify_f_bound(k, grid)];
            out.extend(verify_fi_bound(k, grid));
            out
        }
        KernelSet::Burger2(k) => verify_burger2_bounds(k, grid),
    }
}

#[cfg(test)]
mod tests {
    use super::super::kernels::burger1_kernels;
    use super::super::lambda::{order_lambda, LambdaSpec};
    use super::*;

    #[test]
    fn indicator_constant_is_one() {
        let k = burger1_kernels(&order_lambda(&[Complex64::new(0.0, 0.0)], 0.5)).unwrap();
        let r = verify_f_bound(&k, &GridSpec::default());
        assert!((r.constant - 1.0).abs() < 1e-12, "{}", r.constant);
        assert!(!r.diverging);
    }

    #[test]
    fn misplaced_lambda_flagged() {
        let spec = LambdaSpec {
            beta: 1.0,
            minus: vec![Complex64::new(2.0, 0.0)],
            plus: vec![],
        };
        let k = burger1_kernels(&spec).unwrap();
        assert!(verify_f_bound(&k, &GridSpec::default()).diverging);
    }
}
