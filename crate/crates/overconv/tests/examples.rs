//! Small worked instances checked through the public API.

use overconv::coeff_series::{
    fiber_valuation_transfer, gauss_valuation, lift_extension, partial_valuation, reduce_mod_eisenstein,
    EisensteinPrime, FiberElem, Laurent, RingConfig,
};
use overconv::components::{fiber, FamilySpec};
use overconv::grammar::{parse_laurent, render_laurent, render_tate};
use overconv::groebner::{divide, quotient_valuation, quotient_valuation_annulus, remainder_annulus, BasisSpec};
use overconv::newton::{is_pure, is_unit, newton_polygon, slope_factor};
use overconv::norms::{break_convergence_experiment, check_sdr, norm_field_min_poly, TowerRule, TowerSpec};
use overconv::ramify::{
    artin_schreier, as_family_monogenic, cyclotomic, cyclotomic_step, monogenic_exponents, sqrt_p, AnyExtension,
    ExtSpec,
};
use overconv::rational::{q, qf};
use overconv::tate::{OrderContext, SeriesRing, TateRing};

fn l(s: &str) -> Laurent {
    parse_laurent(s, 3).unwrap()
}

fn xy_basis(gens: &[&str]) -> BasisSpec {
    BasisSpec {
        config: RingConfig::new(3, 20, 20).unwrap(),
        order: "lex:X>Y".into(),
        generators: gens.iter().map(|s| s.to_string()).collect(),
    }
}

#[test]
fn gauss_and_partial_valuations() {
    assert_eq!(gauss_valuation(&l("1"), 3, &qf(7, 3)).unwrap(), Some(q(0)));
    assert_eq!(gauss_valuation(&l("p*S^-2"), 3, &qf(1, 2)).unwrap(), Some(q(0)));
    assert_eq!(gauss_valuation(&l("p + S"), 3, &qf(1, 3)).unwrap(), Some(qf(1, 3)));
    assert!(gauss_valuation(&l("S"), 3, &q(0)).is_err());
    assert_eq!(partial_valuation(&l("p + S"), 3, 0), Some(1));
    assert_eq!(partial_valuation(&l("p + S"), 3, 1), Some(0));
    assert_eq!(partial_valuation(&Laurent::zero(), 3, 5), None);
}

#[test]
fn reduction_at_s_minus_p() {
    let prime = EisensteinPrime::new(3, vec![q(-3), q(1)]).unwrap();
    let red = |s: &str| match reduce_mod_eisenstein(&l(s), &prime).unwrap().value {
        FiberElem::Kappa(c) => c,
        FiberElem::Fp(_) => unreachable!(),
    };
    assert_eq!(red("S^2 + 1"), vec![q(10)]);
    assert_eq!(red("S^-1"), vec![qf(1, 3)]);
}

#[test]
fn valuation_transfer_examples() {
    let deg5 = EisensteinPrime::new(3, vec![q(3), q(0), q(0), q(0), q(0), q(1)]).unwrap();
    let rep = fiber_valuation_transfer(&l("p + S^3"), &EisensteinPrime::char_p(3), &deg5).unwrap();
    assert_eq!((rep.v_p, rep.v_q, rep.hypothesis, rep.equal), (Some(3), Some(3), true, true));
    let rep = fiber_valuation_transfer(&l("S^5"), &EisensteinPrime::char_p(3), &deg5).unwrap();
    assert!(!rep.hypothesis);
    let rep = fiber_valuation_transfer(&l("1"), &EisensteinPrime::char_p(3), &deg5).unwrap();
    assert_eq!((rep.v_p, rep.v_q), (Some(0), Some(0)));
}

#[test]
fn sqrt_p_pushes_primes_forward() {
    let prime = EisensteinPrime::new(3, vec![q(-3), q(1)]).unwrap();
    // T^2 - p over κ(S - p) = Q_3.
    let lifted = lift_extension(&prime, &[vec![q(-3)], vec![q(0)], vec![q(1)]]).unwrap();
    assert_eq!(lifted.e_rel, 2);
    let pushed = lifted.push_prime(&prime, 20).unwrap();
    assert_eq!(pushed.degree(), Some(2));
    assert!(lifted.push_prime(&EisensteinPrime::char_p(3), 20).unwrap().is_char_p());
}

#[test]
fn newton_examples() {
    assert!(newton_polygon(&l("1 + p*S"), 3, &q(1)).unwrap().segments.is_empty());
    let np = newton_polygon(&l("p^2 + S"), 3, &q(2)).unwrap();
    assert_eq!((np.segments[0].slope.clone(), np.segments[0].mult), (q(2), 2));
    assert_eq!(is_pure(&l("p + S"), 3, &q(2)).unwrap(), Some(q(1)));
    assert_eq!(is_pure(&(&l("p + S") * &l("p^2 + S")), 3, &q(2)).unwrap(), None);
    assert!(is_unit(&l("S^-3"), 3, &q(1)).unwrap());
    assert!(!is_unit(&l("p + S"), 3, &q(1)).unwrap());
    assert!(newton_polygon(&Laurent::zero(), 3, &q(1)).is_err());

    let f = &l("p + S") * &l("p^2 + S");
    let sf = slope_factor(&f, 3, &q(2), 30).unwrap();
    let slopes: Vec<_> = sf.factors.iter().map(|(_, s)| s.clone()).collect();
    assert_eq!(slopes, vec![q(2), q(1)]);
    let sf = slope_factor(&l("S^-1 + p*S^-2"), 3, &q(1), 30).unwrap();
    assert_eq!(render_laurent(&sf.unit), "S^-2");
    assert_eq!(render_laurent(&sf.factors[0].0), "3 + S");
}

#[test]
fn leading_terms() {
    let t = TateRing::new(SeriesRing::new(3, 20, 20), OrderContext::parse("lex:X1>X0").unwrap());
    let f = t.parse("2*X0^2*X1 + p*S*X0", 3).unwrap();
    assert_eq!(t.render_lt(&t.leading_term(&f)), "X1*X0^2");
    assert_eq!(t.leading_term(&f).unwrap().v, vec![0, 0]);
    let g = t.parse("p*S*X0 + p^3", 3).unwrap();
    assert_eq!(t.extended_valuation(&g), Some(vec![1, 1]));
    assert_eq!(t.extended_valuation(&t.zero()), None);
}

#[test]
fn division_examples() {
    let gb = xy_basis(&["X^2 - S", "Y^3 - p"]).build().unwrap();
    assert!(gb.certified);
    assert!(!xy_basis(&["X^2 - S", "X^3 - p"]).build().unwrap().certified);
    let t = &gb.ring;
    let f = t.parse("X^2*Y^3", 3).unwrap();
    assert_eq!(t.render(&divide(&f, &gb, None).unwrap().remainder), "3*S");
    assert_eq!(quotient_valuation(&f, &gb, &qf(1, 2)).unwrap(), Some(qf(3, 2)));
    assert_eq!(quotient_valuation(&t.one(), &gb, &qf(1, 2)).unwrap(), Some(q(0)));

    let lt = TateRing::new(overconv::coeff_series::LaurentRing::exact(3), t.ctx.clone());
    let g = lt.from_map(overconv::grammar::parse_tate("S^-1*X^2*Y^3", 3, &lt.ctx).unwrap());
    let rem = remainder_annulus(&g, &gb, &qf(1, 2), None).unwrap();
    assert_eq!(render_tate(&lt.ctx, &rem.remainder.terms), "3");
    let h = lt.from_map(overconv::grammar::parse_tate("S^-2", 3, &lt.ctx).unwrap());
    assert_eq!(render_tate(&lt.ctx, &remainder_annulus(&h, &gb, &qf(1, 2), None).unwrap().remainder.terms), "S^-2");
    assert_eq!(quotient_valuation_annulus(&g, &gb, &qf(1, 2), &qf(1, 2)).unwrap(), Some(q(1)));
}

#[test]
fn fibers_of_a_family() {
    let fam = FamilySpec { label: String::new(), basis: xy_basis(&["X^2 - S", "Y^3 - p"]) }.build().unwrap();
    let at = EisensteinPrime::new(3, vec![q(-3), q(1)]).unwrap();
    assert_eq!(fiber(&fam, &at, 40).unwrap().render_generators(), vec!["X^2 - 3", "Y^3 - 3"]);
    assert_eq!(fiber(&fam, &EisensteinPrime::char_p(3), 20).unwrap().render_generators(), vec!["X^2 + 2*S", "Y^3"]);
}

#[test]
fn ramification_examples() {
    for (spec, pair) in [(sqrt_p(5), (1, 0)), (cyclotomic(3), (1, 0)), (cyclotomic_step(3, 1), (3, 2)), (artin_schreier(5, 3), (4, 3))] {
        let ext = spec.build().unwrap();
        let (_, br) = ext.breaks().unwrap();
        assert_eq!(br.pair(), (pair.0.to_string(), pair.1.to_string()), "{spec:?}");
        let hb = ext.herbrand().unwrap();
        assert_eq!((hb.b, hb.b_log), (br.b, br.b_log));
    }
    let hb = cyclotomic_step(3, 1).build().unwrap().herbrand().unwrap();
    assert_eq!(hb.lower_breaks, vec![2]);
    let two = ExtSpec::Mixed { p: 2, base: None, minpoly: "X^2 - 2".into(), galois: None };
    let (rd, _) = two.build().unwrap().breaks().unwrap();
    assert_eq!(rd.distances, vec![qf(3, 2)]);
    let no_galois = ExtSpec::Mixed { p: 3, base: None, minpoly: "X^2 - p".into(), galois: None };
    assert!(no_galois.build().unwrap().herbrand().is_err());
    let bad = ExtSpec::Mixed { p: 3, base: None, minpoly: "X^2 - 1".into(), galois: None };
    assert!(bad.build().is_err());
}

#[test]
fn as_family_exponents() {
    assert_eq!(monogenic_exponents(&q(1), false).unwrap(), (1, 1));
    assert_eq!(monogenic_exponents(&q(1), true).unwrap(), (2, 1));
    assert_eq!(monogenic_exponents(&qf(1, 2), true).unwrap(), (3, 2));
    let AnyExtension::Equal(x) = artin_schreier(3, 1).build().unwrap() else { unreachable!() };
    let asf = as_family_monogenic(&x.ext, &q(1), false, &RingConfig::new(3, 20, 40).unwrap()).unwrap();
    assert!(asf.family.gb.certified);
    assert_eq!(asf.spec().generators.len(), 1);
}

#[test]
fn towers() {
    let cyc = TowerSpec { p: 3, rule: TowerRule::Cyclotomic, xi: "zeta_p - 1".into(), n0: 1 };
    assert!(check_sdr(&cyc, 4).unwrap().verdict);
    let nf = norm_field_min_poly(&cyc, "X - 2", 2).unwrap();
    assert_eq!(nf.degree, 1);
    let table = break_convergence_experiment(&cyc, "X^2 - 3", &[2, 3]).unwrap();
    assert!(table.converged);
    assert!(table.rows.iter().all(|r| r.b_log == q(0)));
}
