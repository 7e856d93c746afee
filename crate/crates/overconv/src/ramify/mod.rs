//! Ramification breaks of monogenic extensions of complete discretely valued
//! fields with residue field `F_p`.
//!
//! Breaks come from two independent routes: root clustering on the Newton
//! polygon of the shifted minimal polynomial ([`as_breaks`]), and the
//! classical lower numbering with Herbrand's function from explicit Galois
//! data ([`herbrand_oracle`]). The module also builds the flat family over
//! `O[[S]]` whose fibers are the Abbes–Saito spaces of a characteristic-p
//! extension.
//!
//! ```
//! use overconv::ramify::{sqrt_p, artin_schreier};
//!
//! let ext = sqrt_p(3).build().unwrap();
//! let (rd, br) = ext.breaks().unwrap();
//! assert_eq!(rd.distances.len(), 1);
//! assert_eq!(br.pair(), ("1".to_string(), "0".to_string()));
//!
//! let (_, br) = artin_schreier(3, 2).build().unwrap().breaks().unwrap();
//! assert_eq!(br.pair(), ("3".to_string(), "2".to_string()));
//! ```

mod breaks;
mod family;
mod field;
mod herbrand;
mod spec;

pub use breaks::{as_breaks, breaks, components, radius, root_distances, BreakReport, ComponentStep, RootDistanceData};
pub use family::{
    as_family_monogenic, as_space_generator, build_as_family, compare_char0_fiber, compare_charp_fiber,
    monogenic_exponents, AsFamily, FiberComparison, NormalForm,
};
pub use field::{classify, laurent_field, qp, Classified, DvField, SimpleExtension};
pub use herbrand::{herbrand_oracle, herbrand_phi, HerbrandReport};
pub use spec::{
    artin_schreier, cyclotomic, cyclotomic_shifted, cyclotomic_step, fixture_set, sqrt_p, AnyExtension, ExtSpec,
    ExtensionPresentation, GaloisSpec,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coeff_series::{EisensteinPrime, RingConfig};
    use crate::rational::{q, qf};
    use crate::ring::Ring;

    fn pair(b: i64, bl: i64) -> (String, String) {
        (b.to_string(), bl.to_string())
    }

    #[test]
    fn root_distance_examples() {
        let (rd, _) = sqrt_p(5).build().unwrap().breaks().unwrap();
        assert_eq!(rd.distances, vec![qf(1, 2)]);
        let two = ExtSpec::Mixed { p: 2, base: None, minpoly: "X^2 - 2".into(), galois: None };
        let (rd, br) = two.build().unwrap().breaks().unwrap();
        assert_eq!(rd.distances, vec![qf(3, 2)]);
        assert_eq!(br.b, q(3));
        let lin = ExtSpec::Mixed { p: 3, base: None, minpoly: "X - p".into(), galois: None };
        let (rd, br) = lin.build().unwrap().breaks().unwrap();
        assert!(rd.distances.is_empty());
        assert_eq!((br.b, br.b_log), (q(0), q(0)));
    }

    #[test]
    fn fixtures_agree_with_oracle() {
        for (name, spec) in fixture_set() {
            let ext = spec.build().unwrap();
            let (_, br) = ext.breaks().unwrap();
            let hb = ext.herbrand().unwrap();
            assert_eq!((&br.b, &br.b_log), (&hb.b, &hb.b_log), "{name}");
            assert!(hb.integral, "{name}");
        }
    }

    #[test]
    fn fixture_values() {
        let hb = cyclotomic_step(3, 1).build().unwrap().herbrand().unwrap();
        assert_eq!(hb.lower_breaks, vec![2]);
        assert_eq!((hb.b.clone(), hb.b_log.clone()), (q(3), q(2)));
        let hb = cyclotomic(5).build().unwrap().herbrand().unwrap();
        assert_eq!(hb.upper_breaks, vec![q(0)]);
        for m in [1, 2, 4, 5] {
            let (_, br) = artin_schreier(3, m).build().unwrap().breaks().unwrap();
            assert_eq!(br.pair(), pair(m + 1, m));
        }
    }

    #[test]
    fn components_are_monotone() {
        let (rd, br) = cyclotomic_step(3, 1).build().unwrap().breaks().unwrap();
        let mut last = 0;
        for k in 0..40 {
            let c = components(&rd, &qf(k, 8));
            assert!(c >= last);
            last = c;
        }
        assert_eq!(components(&rd, &br.b), 1);
        assert_eq!(components(&rd, &(&br.b + qf(1, 100))), 3);
    }

    #[test]
    fn artin_schreier_uniformizer() {
        let AnyExtension::Equal(x) = artin_schreier(3, 1).build().unwrap() else { panic!() };
        let eis = x.ext.to_eisenstein().unwrap();
        let rendered: Vec<String> = eis.minpoly.iter().map(|c| format!("{:?}", c.terms().collect::<Vec<_>>())).collect();
        // z = 1/y satisfies z^3 + S z^2 - S = 0.
        assert_eq!(rendered, vec!["[(1, 2)]", "[]", "[(1, 1)]", "[(0, 1)]"]);
    }

    #[test]
    fn classify_examples() {
        let k = qp(3);
        let g = vec![k.from_i64(-3), k.zero(), k.one()];
        assert!(matches!(classify(&k, g).unwrap(), Classified::Totally(_)));
        let g = vec![k.from_i64(1), k.zero(), k.one()];
        assert!(matches!(classify(&k, g).unwrap(), Classified::Unramified { .. }));
        let g = vec![k.from_i64(-1), k.zero(), k.one()];
        assert!(classify(&k, g).is_err());
    }

    #[test]
    fn as_family_fibers() {
        let AnyExtension::Equal(x) = artin_schreier(3, 1).build().unwrap() else { panic!() };
        let config = RingConfig::new(3, 20, 40).unwrap();
        let kummer = EisensteinPrime::new(3, {
            let mut c = vec![q(0); 10];
            c[0] = q(-3);
            c[9] = q(1);
            c
        })
        .unwrap();
        let k0 = kummer.kappa().unwrap();
        let ext0 = SimpleExtension::artin_schreier(k0, 1).unwrap();
        for a in [qf(1, 2), q(1), q(2)] {
            let asf = as_family_monogenic(&x.ext, &a, false, &config).unwrap();
            let cmp = compare_charp_fiber(&asf, &x.ext).unwrap();
            assert!(cmp.matches, "{cmp:?}");
            let cmp = compare_char0_fiber(&asf, &kummer, &ext0, 8).unwrap();
            assert!(cmp.matches, "{cmp:?}");
        }
        let asf = as_family_monogenic(&x.ext, &q(1), true, &config).unwrap();
        assert_eq!((asf.alpha[0], asf.beta[0]), (2, 1));
    }
}
