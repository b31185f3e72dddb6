mod common;

use common::{cx, deriv_at_zero, eval, gl, particular, random_instance, Terms};
use horokit_core::burger::exppoly::ExpTerm;
use horokit_core::burger::*;
use horokit_core::Error;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn to_exp(terms: &Terms) -> ExpPoly {
    ExpPoly::from_terms(
        terms
            .iter()
            .map(|&(k, mu, c)| ExpTerm { k, mu, c })
            .collect(),
    )
}

fn rel_error(got: &ExpPoly, want: &Terms, lo: f64) -> f64 {
    let ts: Vec<f64> = (0..=200).map(|i| lo * i as f64 / 200.0).collect();
    let scale = ts.iter().map(|&t| eval(want, t).norm()).fold(0.0, f64::max);
    ts.iter()
        .map(|&t| (got.eval(t) - eval(want, t)).norm())
        .fold(0.0, f64::max)
        / scale
}

#[test]
fn oracle_sanity() {
    // (D - 1) y = e^{2t} -> e^{2t};  (D - 1) y = e^t -> t e^t
    let p = particular(&[cx(1.0, 0.0)], &vec![(0, cx(2.0, 0.0), cx(1.0, 0.0))]);
    assert_eq!(p, vec![(0, cx(2.0, 0.0), cx(1.0, 0.0))]);
    let p = particular(&[cx(1.0, 0.0)], &vec![(0, cx(1.0, 0.0), cx(1.0, 0.0))]);
    assert_eq!(p, vec![(1, cx(1.0, 0.0), cx(1.0, 0.0))]);
    assert_eq!(
        deriv_at_zero(&vec![(2, cx(3.0, 0.0), cx(1.0, 0.0))], 3),
        cx(18.0, 0.0)
    );
}

#[test]
fn reconstruction_matches_ode_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..40 {
        let inst = random_instance(&mut rng, 4);
        let spec = order_lambda(&inst.lambdas, inst.beta);
        let psi = to_exp(&inst.psi);
        let rec = burger1_reconstruct(&spec, &psi, &inst.boundary()).unwrap();
        let err = rel_error(&rec, &inst.truth, -10.0);
        assert!(
            err < 1e-10,
            "lambdas {:?} beta {} err {err}",
            inst.lambdas,
            inst.beta
        );
        assert!(ode_residual(&inst.lambdas, &rec, &psi).relative < 1e-10);
        assert!(vanishes_at_minus_infinity(&spec, &rec, 1e-9));
    }
}

#[test]
fn repeated_lambdas() {
    let lambdas = [cx(1.5, 0.0), cx(1.5, 0.0), cx(-0.5, 0.0), cx(-0.5, 0.0)];
    let psi_t: Terms = vec![
        (1, cx(2.5, 0.5), cx(1.0, -1.0)),
        (0, cx(1.2, 0.0), cx(0.5, 0.0)),
    ];
    let mut truth = particular(&lambdas, &psi_t);
    truth.push((0, cx(1.5, 0.0), cx(0.7, 0.0)));
    truth.push((1, cx(1.5, 0.0), cx(-0.3, 0.0)));
    let boundary: Vec<Complex64> = (0..=4).map(|i| deriv_at_zero(&truth, i)).collect();
    let spec = order_lambda(&lambdas, 1.0);
    let psi = to_exp(&psi_t);
    let rec = burger1_reconstruct(&spec, &psi, &boundary).unwrap();
    assert!(rel_error(&rec, &truth, -10.0) < 1e-10);
    assert!(ode_residual(&lambdas, &rec, &psi).relative < 1e-12);
}

#[test]
fn integration_matches_quadrature() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let terms: Vec<ExpTerm> = (0..3)
            .map(|_| ExpTerm {
                k: rng.gen_range(0..4),
                mu: cx(rng.gen_range(0.5..3.0), rng.gen_range(-4.0..4.0)),
                c: cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            })
            .collect();
        let p = ExpPoly::from_terms(terms);
        let w = cx(rng.gen_range(-0.4..0.4), rng.gen_range(-1.0..1.0));
        let f = |s: f64| (w * s).exp() * p.eval(s);
        let tail = integrate_exp_poly(&p, IntegralKind::LowerTail, w).unwrap();
        let fin = integrate_exp_poly(&p, IntegralKind::Finite, w).unwrap();
        for t in [-3.0, -1.0, -0.2] {
            let decay = p.min_growth() + w.re;
            let want = gl(f, t - 50.0 / decay, t, 2000);
            assert!(
                (tail.eval(t) - want).norm() <= 1e-10 * want.norm().max(1e-3),
                "{t} {} {want}",
                tail.eval(t)
            );
            let want = gl(f, t, 0.0, 20);
            assert!((fin.eval(t) - want).norm() <= 1e-10 * want.norm().max(1e-3));
        }
    }
}

#[test]
fn kernel_matches_quadrature_of_recursion() {
    // m1 = m2 = 1: F = e^{l+ t} Phi_1, Phi_1(t, s) = -int_t^0 e^{-l+ r} 1[s <= r] e^{l-(r - s)} dr
    let (lm, lp) = (cx(-0.7, 0.4), cx(1.3, -0.2));
    let f = kernel_f(&order_lambda(&[lm, lp], 0.5)).unwrap();
    for (t, s) in [(-1.0, -2.5), (-2.0, -0.5), (-0.3, -0.3), (-4.0, -1.0)] {
        let lo = f64::max(t, s);
        let integrand = |r: f64| (-lp * r).exp() * (lm * (r - s)).exp();
        let want = -(lp * t).exp() * gl(integrand, lo, 0.0, 20);
        let got = f.eval(t, s);
        assert!(
            (got - want).norm() < 1e-12 * (1.0 + want.norm()),
            "{t} {s}: {got} vs {want}"
        );
    }
}

#[test]
fn composition_matches_quadrature() {
    let a = kernel_f(&order_lambda(&[cx(-0.5, 0.0), cx(1.0, 1.0)], 0.4)).unwrap();
    let b = kernel_f(&order_lambda(&[cx(0.1, 0.0), cx(0.9, 0.0)], 0.3))
        .unwrap()
        .shift(cx(0.0, 0.0), cx(0.8, 0.0));
    let a = a.shift(cx(0.0, 0.0), cx(1.0, 0.0));
    let c = a.compose(&b).unwrap();
    for (t, s) in [(-1.0, -2.0), (-2.0, -1.0), (-0.5, -3.0), (-3.0, -0.25)] {
        let f = |r: f64| a.eval(t, r) * b.eval(r, s);
        let (lo, hi) = (f64::min(t, s), f64::max(t, s));
        let want = gl(f, -150.0, lo, 600) + gl(f, lo, hi, 40) + gl(f, hi, 0.0, 40);
        let got = c.eval(t, s);
        assert!(
            (got - want).norm() < 1e-9 * (1.0 + want.norm()),
            "{t} {s}: {got} vs {want}"
        );
    }
}

#[test]
fn spec_examples() {
    let k = burger1_kernels(&order_lambda(&[cx(0.0, 0.0)], 0.5)).unwrap();
    assert_eq!(k.f.eval(-3.0, -4.0), cx(1.0, 0.0));
    assert_eq!(k.f.eval(-4.0, -3.0), cx(0.0, 0.0));
    let k = burger1_kernels(&order_lambda(&[cx(1.0, 0.0)], 0.5)).unwrap();
    assert!((k.f.eval(-4.0, -3.0) + cx((-1.0f64).exp(), 0.0)).norm() < 1e-15);
}

#[test]
fn sl2_spectral_point() {
    // lambda^2 - lambda + (1/4 + r^2) = 0
    let r = 2.0;
    let disc = Complex64::new(1.0 - 4.0 * (0.25 + r * r), 0.0).sqrt();
    let lambdas = [(cx(1.0, 0.0) + disc) / 2.0, (cx(1.0, 0.0) - disc) / 2.0];
    assert!((lambdas[0] - cx(0.5, r)).norm() < 1e-12);
    let spec = order_lambda(&lambdas, 0.4);
    assert_eq!((spec.m1(), spec.m2()), (0, 2));
    let psi_t: Terms = vec![(0, cx(1.0, 0.0), cx(1.0, 0.0))];
    let mut truth = particular(&lambdas, &psi_t);
    truth.push((0, lambdas[0], cx(0.3, 0.1)));
    truth.push((0, lambdas[1], cx(0.3, -0.1)));
    let boundary: Vec<Complex64> = (0..=2).map(|i| deriv_at_zero(&truth, i)).collect();
    let rec = burger1_reconstruct(&spec, &to_exp(&psi_t), &boundary).unwrap();
    assert!(rel_error(&rec, &truth, -20.0) < 1e-10);
    // |I(t)| << e^{(beta - eps) t}
    let ratio = |t: f64| rec.eval(t).norm() * (-(0.4 - 0.05) * t).exp();
    let near = (0..=100)
        .map(|i| ratio(-0.1 * i as f64))
        .fold(0.0, f64::max);
    let far = (0..=100)
        .map(|i| ratio(-30.0 - 0.1 * i as f64))
        .fold(0.0, f64::max);
    assert!(far < near, "{far} {near}");
}

#[test]
fn fi_constants_finite_for_random_lambdas() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let grid = GridSpec::default();
    for _ in 0..20 {
        let inst = random_instance(&mut rng, 4);
        let k = burger1_kernels(&order_lambda(&inst.lambdas, inst.beta)).unwrap();
        for r in verify_kernel_bounds(KernelSet::Burger1(&k), &grid) {
            assert!(
                r.constant.is_finite() && !r.diverging,
                "{} {:?} {}",
                r.name,
                inst.lambdas,
                inst.beta
            );
        }
    }
}

#[test]
fn misordered_spec_diverges() {
    let spec = LambdaSpec {
        beta: 0.5,
        minus: vec![cx(1.5, 0.0)],
        plus: vec![cx(2.0, 0.0)],
    };
    assert!(spec.validate().is_err());
    let k = burger1_kernels(&spec).unwrap();
    let reports = verify_kernel_bounds(KernelSet::Burger1(&k), &GridSpec::default());
    assert!(reports.iter().any(|r| r.diverging));
    assert!(matches!(
        burger1_reconstruct(&spec, &ExpPoly::zero(), &[cx(0.0, 0.0); 3]),
        Err(Error::Argument(_))
    ));
}

#[test]
fn kernels_json_roundtrip() {
    let k = burger1_kernels(&order_lambda(&[cx(-0.5, 0.2), cx(1.0, 0.0)], 0.5)).unwrap();
    let s = serde_json::to_string(&k).unwrap();
    assert!(s.contains("[1.0,0.0]") || s.contains("[-1.0,0.0]") || s.contains(",0.0]"));
    let back: Burger1Kernels = serde_json::from_str(&s).unwrap();
    assert_eq!(back, k);
}

/// A family I_i over multi-indices of generators with weights alpha_j such that
/// prod (d/dt - lambda) I_i = -sum_j e^{alpha_j t} I_{(j, i)}, built from the top level down.
struct Family {
    funcs: std::collections::HashMap<Vec<usize>, Terms>,
}

fn build_family(lambdas: &[Complex64], weights: &[f64], k0: usize, eta: f64, seed: u64) -> Family {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut funcs = std::collections::HashMap::new();
    let mut level: Vec<Vec<usize>> = vec![vec![]];
    let mut all = vec![vec![vec![]]];
    for _ in 0..k0 {
        level = level
            .iter()
            .flat_map(|i| (0..weights.len()).map(move |j| [vec![j], i.clone()].concat()))
            .collect();
        all.push(level.clone());
    }
    for idx in &all[k0] {
        let f: Terms = vec![(
            0,
            cx(0.0, rng.gen_range(-1.0..1.0)),
            cx(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
        )];
        funcs.insert(idx.clone(), f);
    }
    for l in (0..k0).rev() {
        for idx in &all[l] {
            let mut rhs = Terms::new();
            for (j, w) in weights.iter().enumerate() {
                let child = [vec![j], idx.clone()].concat();
                for &(k, mu, c) in &funcs[&child] {
                    rhs.push((k, mu + w, -c));
                }
            }
            let mut sol = particular(lambdas, &rhs);
            for lam in lambdas.iter().filter(|l| l.re >= eta) {
                sol.push((0, *lam, cx(rng.gen_range(-1.0..1.0), 0.0)));
            }
            funcs.insert(idx.clone(), sol);
        }
    }
    Family { funcs }
}

fn check_identity(alpha: (i64, i64), eta: (i64, i64), expect_k0: usize) {
    use horokit_core::rational::qf;
    let sched = BurgerSchedule::new(qf(alpha.0, alpha.1), qf(eta.0, eta.1)).unwrap();
    assert_eq!(sched.k0, expect_k0);
    assert!(sched.identities_hold());
    let lambdas = [cx(0.2, 1.0), cx(1.0, 0.0), cx(-0.7, 0.3)];
    let a = alpha.0 as f64 / alpha.1 as f64;
    let e = eta.0 as f64 / eta.1 as f64;
    let weights = [a, 1.3 * a];
    let kern = burger2_coefficients(&lambdas, &weights, &sched).unwrap();
    assert_eq!(kern.c.len(), 2usize.pow(sched.k0 as u32));
    let fam = build_family(&lambdas, &weights, sched.k0, e, 17);
    let mut rhs = ExpPoly::zero();
    for c in &kern.c {
        rhs = rhs.add(&c.kernel.apply(&to_exp(&fam.funcs[&c.index])).unwrap());
    }
    for d in &kern.d {
        for (i, p) in d.kernels.iter().enumerate() {
            rhs = rhs.add(&p.scale(deriv_at_zero(&fam.funcs[&d.index], i as u32)));
        }
    }
    let err = rel_error(&rhs, &fam.funcs[&vec![]], -10.0);
    assert!(err < 1e-8, "k0 = {}: {err}", sched.k0);
    for r in verify_kernel_bounds(KernelSet::Burger2(&kern), &GridSpec { lo: -20.0, n: 30 }) {
        assert!(
            r.constant.is_finite() && !r.diverging,
            "{}: {:?}",
            r.name,
            r.nested_sups
        );
    }
}

#[test]
fn iterated_identity_single_level() {
    check_identity((6, 5), (1, 2), 1);
}

#[test]
fn iterated_identity_two_levels() {
    check_identity((4, 5), (1, 2), 2);
}

#[test]
fn iterated_identity_backward_induction() {
    check_identity((3, 10), (1, 2), 3);
}

#[test]
fn multi_index_cap() {
    use horokit_core::rational::qf;
    let sched = BurgerSchedule::new(qf(1, 20), qf(1, 1)).unwrap();
    assert_eq!(sched.k0, 40);
    let r = burger2_coefficients(&[cx(1.0, 0.0)], &[0.05, 0.06], &sched);
    assert!(matches!(r, Err(Error::Resource(_))));
}
