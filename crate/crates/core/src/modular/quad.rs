//! Composite Gauss-Legendre on equal panels, with a panel-halving error estimate.

use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use rayon::prelude::*;

/// Nodes per panel.
pub const NODES: usize = 20;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(NODES)
            .expect("valid degree")
            .into_node_weight_pairs()
    })
}

/// Integral of f over [a, b] with `panels` equal panels. Panel sums are assembled in order,
/// so the result does not depend on the thread count.
pub fn composite<F>(f: &F, a: f64, b: f64, panels: usize) -> f64
where
    F: Fn(f64) -> f64 + Sync,
{
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let sums: Vec<f64> = (0..panels)
        .into_par_iter()
        .map(|p| {
            let mid = a + (p as f64 + 0.5) * h;
            rule()
                .iter()
                .map(|&(x, w)| w * f(mid + 0.5 * h * x))
                .sum::<f64>()
                * 0.5
                * h
        })
        .collect();
    sums.iter().sum()
}

/// (value on `panels`, |value - value on panels / 2|).
pub fn composite_with_estimate<F>(f: &F, a: f64, b: f64, panels: usize) -> (f64, f64)
where
    F: Fn(f64) -> f64 + Sync,
{
    let panels = panels.max(2);
    let fine = composite(f, a, b, panels);
    let coarse = composite(f, a, b, panels / 2);
    (fine, (fine - coarse).abs())
}
