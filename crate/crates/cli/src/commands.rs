//! One runner per subcommand. Each returns its artifacts, a summary, and an optional
//! invariant failure detected after the artifacts were produced.

use std::path::Path;

use horokit_core::burger::{
    burger1_kernels, burger2_coefficients, order_lambda, verify_kernel_bounds, BoundReport,
    BurgerSchedule, GridSpec, KernelSet,
};
use horokit_core::enveloping::{
    lie_identity_certificate, verify_certificate, CertificateJson, LieIdentityCertificate, Limits,
    PbwAlgebra,
};
use horokit_core::lie::{build_split_sl, restricted_root_system, ChamberVector};
use horokit_core::modular::{
    fit_decay, height_average, height_csv, horo_csv, horocycle_average, quadrature_points,
    unipotent_lattice_count, DecaySample, HoroExperiment, TestFunction, Weight,
};
use horokit_core::{rational, Error};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::config::*;
use crate::output::Artifact;
use crate::parse::{parse_cartan, parse_complex};
use crate::Failure;

pub struct Report {
    pub artifacts: Vec<Artifact>,
    pub summary: Value,
    pub invariant_failure: Option<String>,
}

impl Report {
    fn ok(artifacts: Vec<Artifact>, summary: Value) -> Self {
        Report {
            artifacts,
            summary,
            invariant_failure: None,
        }
    }
}

pub fn run(cfg: &ExperimentConfig, limits: Limits) -> Result<Report, Failure> {
    let schema = Failure::schema;
    match cfg.command {
        CommandName::LieIdent => lie_ident(&typed_params(cfg).map_err(schema)?, limits),
        CommandName::Verify => verify(&typed_params(cfg).map_err(schema)?, limits),
        CommandName::Kernels => kernels(
            &typed_params(cfg).map_err(schema)?,
            cfg.limits.max_grid.unwrap_or(DEFAULT_MAX_GRID),
        ),
        CommandName::Horocycle => horocycle(
            &typed_params(cfg).map_err(schema)?,
            cfg.limits.max_n.unwrap_or(DEFAULT_MAX_N),
        ),
        CommandName::Height => height(
            &typed_params(cfg).map_err(schema)?,
            cfg.limits.max_n.unwrap_or(DEFAULT_MAX_N),
        ),
        CommandName::Count => count(&typed_params(cfg).map_err(schema)?),
        CommandName::Fit => fit(&typed_params(cfg).map_err(schema)?),
    }
}

fn algebra_rank(name: &str) -> Result<usize, Failure> {
    let n = name
        .strip_prefix("sl")
        .and_then(|d| d.parse::<usize>().ok())
        .ok_or_else(|| Failure::schema(format!("algebra must be slN, got {name:?}")))?;
    if !(2..=6).contains(&n) {
        return Err(Failure::schema(format!(
            "sl{n} is outside the supported range sl2..sl6"
        )));
    }
    Ok(n)
}

fn algebra(
    n: usize,
    limits: Limits,
) -> Result<(PbwAlgebra, horokit_core::lie::RestrictedRootSystem), Failure> {
    let lie = build_split_sl(n)?;
    let rs = restricted_root_system(&lie)?;
    Ok((PbwAlgebra::new(lie, limits), rs))
}

fn lie_ident(p: &LieIdentParams, limits: Limits) -> Result<Report, Failure> {
    let n = algebra_rank(&p.algebra)?;
    let diag = parse_cartan(&p.h, n).map_err(Failure::schema)?;
    let (alg, rs) = algebra(n, limits)?;
    let h = ChamberVector::new(&rs, diag)?;
    let cert = lie_identity_certificate(&alg, &rs, &h)?;
    let summary = json!({
        "algebra": p.algebra,
        "H": cert.h.h.iter().map(rational::to_str).collect::<Vec<_>>(),
        "w_h": cert.w_h,
        "center_degree": cert.center_degree,
        "Z": cert.z.iter().map(|z| alg.display(z)).collect::<Vec<_>>(),
        "P": alg.display(&cert.p),
        "verified": cert.verified,
    });
    Ok(Report::ok(
        vec![Artifact::json("certificate.json", &cert.to_json(&alg))],
        summary,
    ))
}

fn verify(p: &VerifyParams, limits: Limits) -> Result<Report, Failure> {
    let text = std::fs::read_to_string(&p.certificate)
        .map_err(|e| Failure::schema(format!("cannot read {}: {e}", p.certificate)))?;
    let j: CertificateJson = serde_json::from_str(&text)
        .map_err(|e| Failure::schema(format!("certificate is not valid JSON: {e}")))?;
    let (alg, rs) = algebra(algebra_rank(&j.algebra)?, limits)?;
    let cert = LieIdentityCertificate::from_json(&j, &alg, &rs)?;
    verify_certificate(&alg, &rs, &cert)?;
    let summary = json!({ "certificate": p.certificate, "w_h": cert.w_h, "valid": true });
    Ok(Report::ok(
        vec![Artifact::json("verify.json", &summary)],
        summary,
    ))
}

fn bounds_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from("kernel,t,s,value,envelope,ratio\n");
    for r in reports {
        for line in r.to_csv().lines().skip(1) {
            out.push_str(&format!("{},{line}\n", r.name));
        }
    }
    out
}

fn kernels(p: &KernelsParams, max_grid: usize) -> Result<Report, Failure> {
    let lambdas: Vec<Complex64> = p
        .lambdas
        .iter()
        .map(|s| parse_complex(s))
        .collect::<Result<_, _>>()
        .map_err(Failure::schema)?;
    if p.grid_n == 0 || !(p.grid_lo < 0.0) {
        return Err(Failure::schema(
            "grid needs grid_n > 0 and grid_lo < 0".into(),
        ));
    }
    if p.grid_n.saturating_mul(p.grid_n) > max_grid {
        return Err(Error::Resource(format!(
            "grid of {}^2 points exceeds max_grid = {max_grid}",
            p.grid_n
        ))
        .into());
    }
    let grid = GridSpec {
        lo: p.grid_lo,
        n: p.grid_n,
    };
    let (kernel_json, reports) = match (&p.alpha, &p.eta) {
        (Some(a), Some(e)) => {
            let sched = BurgerSchedule::new(rational::parse(a)?, rational::parse(e)?)?;
            let weights = p
                .weights
                .clone()
                .unwrap_or_else(|| vec![rational::to_f64(&sched.alpha)]);
            let k = burger2_coefficients(&lambdas, &weights, &sched)?;
            (
                serde_json::to_value(&k).expect("serializable"),
                verify_kernel_bounds(KernelSet::Burger2(&k), &grid),
            )
        }
        (None, None) => {
            if p.weights.is_some() {
                return Err(Failure::schema("weights need alpha and eta".into()));
            }
            let k = burger1_kernels(&order_lambda(&lambdas, p.beta))?;
            (
                serde_json::to_value(&k).expect("serializable"),
                verify_kernel_bounds(KernelSet::Burger1(&k), &grid),
            )
        }
        _ => {
            return Err(Failure::schema(
                "alpha and eta must be given together".into(),
            ))
        }
    };
    let table: Vec<Value> = reports
        .iter()
        .map(|r| json!({"name": r.name, "envelope": r.envelope, "constant": r.constant, "nested_sups": r.nested_sups, "diverging": r.diverging}))
        .collect();
    let diverging: Vec<&str> = reports
        .iter()
        .filter(|r| r.diverging)
        .map(|r| r.name.as_str())
        .collect();
    let summary = json!({ "kernels": reports.len(), "bounds": table });
    Ok(Report {
        artifacts: vec![
            Artifact::json("kernels.json", &kernel_json),
            Artifact::text("bounds.csv", bounds_csv(&reports)),
            Artifact::json("bounds.json", &summary),
        ],
        invariant_failure: (!diverging.is_empty())
            .then(|| format!("kernel bound diverging: {}", diverging.join(", "))),
        summary,
    })
}

fn check_points(
    x0: Complex64,
    weight: Weight,
    ts: &[f64],
    pps: f64,
    max_n: usize,
) -> Result<(), Failure> {
    for &t in ts.iter().filter(|t| t.is_finite() && **t <= 0.0) {
        let n = quadrature_points(x0, weight, t, pps);
        if n > max_n {
            return Err(Error::Resource(format!(
                "t = {t} needs {n} quadrature nodes, above max_n = {max_n}"
            ))
            .into());
        }
    }
    Ok(())
}

fn horocycle(p: &HorocycleParams, max_n: usize) -> Result<Report, Failure> {
    let t_grid = p.t.values().map_err(Failure::schema)?;
    let x0 = Complex64::new(p.x0[0], p.x0[1]);
    let weight = if p.closed {
        Weight::Closed
    } else {
        Weight::Bump
    };
    check_points(x0, weight, &t_grid, p.points_per_scale, max_n)?;
    let f = TestFunction::with_amplitude(p.psi[0], p.psi[1], p.amplitude)?;
    let exp = HoroExperiment {
        x0,
        weight,
        t_grid,
        points_per_scale: p.points_per_scale,
    };
    let rows = horocycle_average(&exp, &f)?;
    let samples: Vec<DecaySample> = rows
        .iter()
        .map(|r| DecaySample {
            t: r.t,
            error: r.error,
            quad_err: r.quad_err,
        })
        .collect();
    let fit = match fit_decay(&samples) {
        Ok(fit) => serde_json::to_value(fit).expect("serializable"),
        Err(e) => json!({ "rejected": e.to_string() }),
    };
    let unresolved: Vec<String> = rows
        .iter()
        .filter(|r| !r.resolved())
        .map(|r| r.t.to_string())
        .collect();
    let summary = json!({ "mean": f.mean, "rows": rows.len(), "fit": fit });
    Ok(Report {
        artifacts: vec![
            Artifact::text("horocycle.csv", horo_csv(&rows)),
            Artifact::json("fit.json", &fit),
        ],
        invariant_failure: (!unresolved.is_empty()).then(|| {
            format!(
                "resolution: quadrature estimate not below 10% of the error at t = {}",
                unresolved.join(", ")
            )
        }),
        summary,
    })
}

fn height(p: &HeightParams, max_n: usize) -> Result<Report, Failure> {
    let t_grid = p.t.values().map_err(Failure::schema)?;
    let x0 = Complex64::new(p.x0[0], p.x0[1]);
    check_points(x0, Weight::Bump, &t_grid, p.points_per_scale, max_n)?;
    let rows = height_average(x0, &t_grid, p.points_per_scale)?;
    let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    let summary = json!({ "rows": rows.len(), "max_ratio": max_ratio });
    Ok(Report::ok(
        vec![Artifact::text("height.csv", height_csv(&rows))],
        summary,
    ))
}

fn count(p: &CountParams) -> Result<Report, Failure> {
    let c = unipotent_lattice_count(p.n, &p.h)?;
    let summary = serde_json::to_value(&c).expect("serializable");
    Ok(Report::ok(vec![Artifact::json("count.json", &c)], summary))
}

fn read_samples(path: &Path) -> Result<Vec<DecaySample>, Failure> {
    let mut rdr = csv::Reader::from_path(path)
        .map_err(|e| Failure::schema(format!("cannot read {}: {e}", path.display())))?;
    let headers = rdr
        .headers()
        .map_err(|e| Failure::schema(e.to_string()))?
        .clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Failure::schema(format!("input has no {name} column")))
    };
    let (ct, ce, cq) = (col("t")?, col("error")?, col("quad_err")?);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| Failure::schema(e.to_string()))?;
        let num = |i: usize| {
            rec.get(i)
                .and_then(|s| s.trim().parse::<f64>().ok())
                .ok_or_else(|| Failure::schema(format!("bad number in row {:?}", rec)))
        };
        out.push(DecaySample {
            t: num(ct)?,
            error: num(ce)?,
            quad_err: num(cq)?,
        });
    }
    Ok(out)
}

fn fit(p: &FitParams) -> Result<Report, Failure> {
    let samples = read_samples(Path::new(&p.input))?;
    let fit = fit_decay(&samples)?;
    let summary = serde_json::to_value(fit).expect("serializable");
    Ok(Report::ok(vec![Artifact::json("fit.json", &fit)], summary))
}
