//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Tolerances are fixed here and nowhere else. Exit status is nonzero only
//! when a criterion errors out; FAIL lines are reported, not hidden.

mod common;

use std::time::{Duration, Instant};

use overconv::coeff_series::{EisensteinPrime, FpLaurent, FpLaurentRing};
use overconv::components::{lagrange_idempotents, lift_idempotent, univariate_lift, FamilySpec};
use overconv::groebner::{capped_valuation, divide, BasisSpec};
use overconv::newton::{newton_polygon, same_up_to_unit, slope_factor};
use overconv::norms::{break_convergence_experiment, TowerRule, TowerSpec};
use overconv::ramify::{
    as_family_monogenic, compare_char0_fiber, compare_charp_fiber, fixture_set, AnyExtension, ExtSpec, SimpleExtension,
};
use overconv::rational::{fmt_q, q, qf};
use overconv::ring::{Fp, Ring};
use overconv::Q;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

const C1_INSTANCES: usize = 500;
const C1_PREC: u32 = 64;
const C1_BUDGET: Duration = Duration::from_secs(60);

const C2_BASES: usize = 200;
const C2_PERTURBATIONS: usize = 200;
const C2_RHO: (i64, i64) = (1, 2);

const C3_INSTANCES: usize = 200;
const C3_SPAN: i64 = 8;
const C3_PREC: i64 = 40;

const C4_TARGET: i64 = 40;
const C4_MAX_ITER: usize = 8;

const C5_BUDGET: Duration = Duration::from_secs(120);

const C6_XI_PREC: i64 = 8;

const C7_LEVELS: [u32; 3] = [2, 3, 4];
const C7_BUDGET: Duration = Duration::from_secs(600);

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(id: &str, name: &str, run: impl FnOnce() -> overconv::Result<Outcome>) -> bool {
    let start = Instant::now();
    let (line, ok) = match run() {
        Ok(o) => (format!("{} {id} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail), true),
        Err(e) => (format!("FAIL {id} {name}: error: {e}"), false),
    };
    println!("{line} [{:.2}s]", start.elapsed().as_secs_f64());
    ok
}

fn c1() -> overconv::Result<Outcome> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let t = common::ring_xy(3, C1_PREC, C1_PREC);
    let (mut recon, mut dom, mut irred, mut coset) = (0, 0, 0, 0);
    for _ in 0..C1_INSTANCES {
        let gb = common::basis(&mut rng, &t);
        let f = common::element(&mut rng, &t, 6, 5);
        let se = divide(&f, &gb, None)?;
        if se.residual.is_zero() && se.reconstruct(&gb) == f {
            recon += 1;
        }
        if se.dominance.iter().all(|d| d.holds) {
            dom += 1;
        }
        if se.remainder_irreducible(&gb) {
            irred += 1;
        }
        let shifted = t.add(&f, &common::ideal_element(&mut rng, &gb));
        if divide(&shifted, &gb, None)?.remainder == se.remainder {
            coset += 1;
        }
    }
    let elapsed = start.elapsed();
    let n = C1_INSTANCES;
    let pass = [recon, dom, irred, coset].iter().all(|&k| k == n) && elapsed < C1_BUDGET;
    Ok(Outcome {
        pass,
        detail: format!(
            "{n} instances at Np = Ns = {C1_PREC}: reconstruction {recon}/{n}, dominance {dom}/{n}, \
             irreducible remainder {irred}/{n}, coset independence {coset}/{n}, {:.1}s (limit {}s)",
            elapsed.as_secs_f64(),
            C1_BUDGET.as_secs()
        ),
    })
}

fn c2() -> overconv::Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 2);
    let t = common::ring_xy(3, 32, 32);
    let rho = qf(C2_RHO.0, C2_RHO.1);
    let (mut checks, mut violations, mut gauss_violations, mut witnessed) = (0, 0, 0, 0);
    for _ in 0..C2_BASES {
        let gb = common::basis(&mut rng, &t);
        let f = common::element(&mut rng, &t, 4, 4);
        let se = divide(&f, &gb, None)?;
        let norm_r = t.extended_valuation(&se.remainder);
        let w_r = capped_valuation(&t, &se.remainder, &rho);
        for _ in 0..C2_PERTURBATIONS {
            let g = common::ideal_element(&mut rng, &gb);
            let h = t.add(&f, &g);
            let v = t.extended_valuation(&h);
            checks += 1;
            if capped_valuation(&t, &h, &rho) > w_r {
                gauss_violations += 1;
            }
            // Norms reverse valuations; `None` is the zero element.
            let ok = match (&v, &norm_r) {
                (_, None) => true,
                (None, Some(_)) => false,
                (Some(a), Some(b)) => a <= b,
            };
            if !ok {
                violations += 1;
            }
        }
        // The remainder lies in the coset of f and attains the bound.
        let witness = t.sub(&f, &se.remainder);
        if divide(&witness, &gb, None)?.remainder.is_zero() {
            witnessed += 1;
        }
    }
    Ok(Outcome {
        pass: violations == 0 && gauss_violations == 0 && witnessed == C2_BASES,
        detail: format!(
            "{checks} coset checks over {C2_BASES} bases at Np = Ns = 32: {violations} violations of the extended \
             norm, {gauss_violations} of the Gauss norm at rho = {}, equality witnessed {witnessed}/{C2_BASES}",
            fmt_q(&rho)
        ),
    })
}

fn c3() -> overconv::Result<Outcome> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let p = 3;
    let r = q(3);
    let (mut mult_ok, mut prod_ok, mut refactor_ok) = (0, 0, 0);
    for _ in 0..C3_INSTANCES {
        let f = common::laurent_poly(&mut rng, p, C3_SPAN);
        let g = common::laurent_poly(&mut rng, p, C3_SPAN);
        let (nf, ng, nfg) = (newton_polygon(&f, p, &r)?, newton_polygon(&g, p, &r)?, newton_polygon(&(&f * &g), p, &r)?);
        let slopes: Vec<Q> = nf.segments.iter().chain(&ng.segments).chain(&nfg.segments).map(|s| s.slope.clone()).collect();
        if slopes.iter().all(|s| nfg.mult(s) == nf.mult(s) + ng.mult(s)) {
            mult_ok += 1;
        }
        let sf = slope_factor(&f, p, &r, C3_PREC)?;
        let diff = &sf.product() - &f;
        if diff.min_vp(p).is_none_or(|v| v >= C3_PREC) {
            prod_ok += 1;
        }
        let again = slope_factor(&sf.product(), p, &r, C3_PREC)?;
        let same = again.factors.len() == sf.factors.len()
            && again.factors.iter().zip(&sf.factors).all(|((a, sa), (b, sb))| {
                sa == sb && same_up_to_unit(a, b, p, &r, C3_PREC - 4).unwrap_or(false)
            });
        if same {
            refactor_ok += 1;
        }
    }
    let n = C3_INSTANCES;
    Ok(Outcome {
        pass: mult_ok == n && prod_ok == n && refactor_ok == n,
        detail: format!(
            "{n} instances over Q_3, r = {}: multiplicativity {mult_ok}/{n}, product to 3-adic precision {C3_PREC} \
             {prod_ok}/{n}, refactoring up to units {refactor_ok}/{n}",
            fmt_q(&r)
        ),
    })
}

fn c4() -> overconv::Result<Outcome> {
    let p = 3;
    let fam = FamilySpec {
        label: "quadratic split".into(),
        basis: BasisSpec { config: common::config(p, 64, 128), order: "lex:X".into(), generators: vec!["X^2 - X - S".into()] },
    }
    .build()?;
    // Roots (1 ± √(1 + 4S))/2 of the fiber polynomial over F_3((S)).
    let ring = FpLaurentRing::new(p, Some(128));
    let sq = ring.sqrt_series(&FpLaurent::from_terms([(0, 1), (1, 4 % p)], p), 128)?;
    let half = FpLaurent::monomial(Fp::new(p).inv(2).unwrap(), 0, p);
    let one = ring.one();
    let roots = vec![ring.mul(&ring.add(&one, &sq), &half), ring.mul(&ring.sub(&one, &sq), &half)];
    let es = lagrange_idempotents(&ring, &roots)?;
    let e = univariate_lift(&ring, &fam.laurent_tate(), &es[0]);
    let rep = lift_idempotent(&fam, &EisensteinPrime::char_p(p), &e, 0, &qf(1, 2), &q(C4_TARGET))?;
    let reached = rep.precision >= q(C4_TARGET) && rep.iterations <= C4_MAX_ITER;
    let contraction = rep.contraction_holds();
    let trail: Vec<String> = std::iter::once(rep.steps.first().map(|s| fmt_q(&s.w_before)).unwrap_or_default())
        .chain(rep.steps.iter().map(|s| format!("{}{}", fmt_q(&s.w_after), if s.capped { " (cap)" } else { "" })))
        .collect();
    Ok(Outcome {
        pass: reached && contraction,
        detail: format!(
            "w(f^2 - f) >= {} in {} iterations (limit {C4_MAX_ITER}): {}; contraction w(h_next) >= 3 w(h) at every \
             step: {}; weights {}",
            fmt_q(&rep.precision),
            rep.iterations,
            if reached { "yes" } else { "no" },
            if contraction { "yes" } else { "no" },
            trail.join(" -> ")
        ),
    })
}

fn c5() -> overconv::Result<Outcome> {
    let start = Instant::now();
    let fixtures = fixture_set();
    let (mut agree, mut integral, mut as_ok, mut as_total) = (0, 0, 0, 0);
    let mut rows = Vec::new();
    for (name, spec) in &fixtures {
        let ext = spec.build()?;
        let (_, br) = ext.breaks()?;
        let hb = ext.herbrand()?;
        if br.b == hb.b && br.b_log == hb.b_log {
            agree += 1;
        }
        if hb.integral && br.b.is_integer() && br.b_log.is_integer() {
            integral += 1;
        }
        if let ExtSpec::ArtinSchreier { m, .. } = spec {
            as_total += 1;
            if br.pair() == ((m + 1).to_string(), m.to_string()) {
                as_ok += 1;
            }
        }
        rows.push(format!("{name} ({}, {})", fmt_q(&br.b), fmt_q(&br.b_log)));
    }
    let n = fixtures.len();
    let elapsed = start.elapsed();
    Ok(Outcome {
        pass: agree == n && integral == n && as_ok == as_total && elapsed < C5_BUDGET,
        detail: format!(
            "clusters = Herbrand {agree}/{n}, integral {integral}/{n}, AS (m+1, m) {as_ok}/{as_total}, {:.1}s (limit {}s); {}",
            elapsed.as_secs_f64(),
            C5_BUDGET.as_secs(),
            rows.join("; ")
        ),
    })
}

fn c6() -> overconv::Result<Outcome> {
    let AnyExtension::Equal(x) = overconv::ramify::artin_schreier(3, 1).build()? else { unreachable!() };
    let config = common::config(3, 20, 40);
    let mut modulus = vec![q(0); 10];
    modulus[0] = q(-3);
    modulus[9] = q(1);
    let prime = EisensteinPrime::new(3, modulus)?;
    let ext0 = SimpleExtension::artin_schreier(prime.kappa().expect("polynomial prime"), 1)?;
    let (mut ok, mut total) = (0, 0);
    let mut rows = Vec::new();
    for a in [qf(1, 2), q(1), q(2)] {
        let asf = as_family_monogenic(&x.ext, &a, false, &config)?;
        let cp = compare_charp_fiber(&asf, &x.ext)?;
        let c0 = compare_char0_fiber(&asf, &prime, &ext0, C6_XI_PREC)?;
        total += 2;
        ok += cp.matches as usize + c0.matches as usize;
        rows.push(format!("a = {}: (p) {}, S^9 - 3 mod xi' {}", fmt_q(&a), cp.matches, c0.matches));
    }
    Ok(Outcome { pass: ok == total, detail: format!("{ok}/{total} fibers match; {}", rows.join("; ")) })
}

fn c7() -> overconv::Result<Outcome> {
    let start = Instant::now();
    let tower = TowerSpec { p: 3, rule: TowerRule::Cyclotomic, xi: "zeta_p - 1".into(), n0: 1 };
    let table = break_convergence_experiment(&tower, "X^2 - 3", &C7_LEVELS)?;
    let elapsed = start.elapsed();
    let rows: Vec<String> = table
        .rows
        .iter()
        .map(|r| format!("n = {}: e = {}, f = {}, b_log = {}", r.n, r.e, r.f, fmt_q(&r.b_log)))
        .collect();
    Ok(Outcome {
        pass: table.stationary && table.converged && elapsed < C7_BUDGET,
        detail: format!(
            "{}; norm field {} (e = {}, f = {}) b_log = {}; stationary {}, equal {}, {:.1}s (limit {}s)",
            rows.join("; "),
            table.norm_field.polynomial,
            table.norm_field.e,
            table.norm_field.f,
            fmt_q(&table.norm_field.b_log),
            table.stationary,
            table.converged,
            elapsed.as_secs_f64(),
            C7_BUDGET.as_secs()
        ),
    })
}

fn main() {
    let runs: [(&str, &str, fn() -> overconv::Result<Outcome>); 7] = [
        ("C1", "division contract", c1),
        ("C2", "quotient-norm optimality", c2),
        ("C3", "Newton multiplicativity and factorization", c3),
        ("C4", "idempotent lifting", c4),
        ("C5", "ramification oracle agreement", c5),
        ("C6", "AS family fibers", c6),
        ("C7", "break convergence", c7),
    ];
    // `ACCEPTANCE_ONLY=C3,C5` restricts the run to the listed criteria.
    let only = std::env::var("ACCEPTANCE_ONLY").ok();
    let mut errors = 0;
    for (id, name, run) in runs {
        if only.as_ref().is_some_and(|o| !o.split(',').any(|x| x.trim() == id)) {
            continue;
        }
        if !report(id, name, run) {
            errors += 1;
        }
    }
    if errors > 0 {
        std::process::exit(1);
    }
}
