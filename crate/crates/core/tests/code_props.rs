use proptest::prelude::*;
use starprod::codes::{star_lower_bound_dual_distance, star_lower_bound_mds, LinearCode, Monomial};
use starprod::fqlinalg::{FieldSpec, Mat};
use starprod::Error;

const ORDERS: [u64; 6] = [2, 3, 4, 5, 7, 8];

/// Two random codes of the same length over the same field.
fn code_pair() -> impl Strategy<Value = (LinearCode, LinearCode)> {
    (
        prop::sample::select(ORDERS.to_vec()),
        2usize..7,
        1usize..5,
        1usize..5,
        any::<u64>(),
    )
        .prop_filter_map("zero code", |(q, n, r1, r2, seed)| {
            use rand::{Rng, SeedableRng};
            let f = FieldSpec::from_order(q).unwrap();
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let mut code = |r: usize| {
                let rows: Vec<Vec<u32>> = (0..r.min(n))
                    .map(|_| (0..n).map(|_| rng.random_range(0..f.q())).collect())
                    .collect();
                LinearCode::from_matrix(&Mat::from_rows(&f, &rows).unwrap()).ok()
            };
            Some((code(r1)?, code(r2)?))
        })
}

fn min_dual_weight(c: &LinearCode) -> usize {
    c.dual().unwrap().min_distance().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn star_is_symmetric_and_bounded((a, b) in code_pair()) {
        let dim = a.star_dim(&b).unwrap();
        prop_assert_eq!(dim, b.star_dim(&a).unwrap());
        prop_assert!(dim <= (a.k() * b.k()).min(a.n()));
        let common = a.support().iter().filter(|i| b.support().contains(i)).count();
        prop_assert!(dim <= common);
        if dim == 0 {
            // disjoint supports: the product is the zero space
            prop_assert_eq!(common, 0);
            prop_assert_eq!(a.star(&b).unwrap_err(), Error::ZeroCode);
            return Ok(());
        }
        let ab = a.star(&b).unwrap();
        prop_assert_eq!(&ab, &b.star(&a).unwrap());
        prop_assert_eq!(ab.k(), dim);
        // codewords of both factors multiply into the product
        for (x, y) in a.basis().iter_rows().zip(b.basis().iter_rows()) {
            let f = a.field();
            let xy: Vec<_> = x.iter().zip(y).map(|(&u, &v)| f.mul(u, v)).collect();
            prop_assert!(ab.contains_word(&xy).unwrap());
        }
    }

    #[test]
    fn dual_is_an_involution((a, _) in code_pair()) {
        if a.k() < a.n() {
            let d = a.dual().unwrap();
            prop_assert_eq!(d.k(), a.n() - a.k());
            prop_assert_eq!(d.dual().unwrap(), a.clone());
            prop_assert!(a.basis().mul(&d.basis().transpose()).unwrap().is_zero());
        } else {
            prop_assert_eq!(a.dual().unwrap_err(), Error::ZeroDual);
        }
    }

    #[test]
    fn dual_distance_matches_enumeration((a, _) in code_pair()) {
        if a.k() < a.n() {
            prop_assert_eq!(a.dual_distance().unwrap(), min_dual_weight(&a));
            let singleton = a.n() - a.k() + 1;
            prop_assert!(a.min_distance().unwrap() <= singleton);
            prop_assert_eq!(a.is_mds().unwrap(), a.min_distance().unwrap() == singleton);
        }
    }

    #[test]
    fn intersection_agrees_with_dimension_formula((a, b) in code_pair()) {
        let dim = a.intersection_dim(&b).unwrap();
        match a.intersection(&b).unwrap() {
            None => prop_assert_eq!(dim, 0),
            Some(c) => {
                prop_assert_eq!(c.k(), dim);
                prop_assert!(a.contains(&c).unwrap() && b.contains(&c).unwrap());
            }
        }
    }

    #[test]
    fn lower_bounds_hold((a, b) in code_pair()) {
        let dim = a.star_dim(&b).unwrap();
        match star_lower_bound_dual_distance(&a, &b) {
            Ok(bound) => prop_assert!(dim >= bound),
            Err(e) => prop_assert!(matches!(e, Error::DegenerateInput | Error::ZeroDual)),
        }
        match star_lower_bound_mds(&a, &b) {
            Ok(bound) => prop_assert!(dim >= bound),
            Err(e) => prop_assert!(matches!(e, Error::DegenerateInput | Error::NeitherMds)),
        }
    }

    #[test]
    fn projection_to_support_keeps_dimension((a, _) in code_pair()) {
        let s = a.support();
        let p = a.project(&s).unwrap();
        prop_assert_eq!(p.k(), a.k());
        prop_assert!(!p.is_degenerate());
    }

    #[test]
    fn monomial_maps_commute_with_star((a, b) in code_pair(), perm_seed in any::<u64>()) {
        use rand::{seq::SliceRandom, Rng, SeedableRng};
        let f = a.field();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed);
        let mut perm: Vec<usize> = (0..a.n()).collect();
        perm.shuffle(&mut rng);
        let scale = (0..a.n()).map(|_| f.elem(rng.random_range(1..f.q()) as u64).unwrap()).collect();
        let m = Monomial::new(perm.clone(), scale).unwrap();
        let perm_only = Monomial::new(perm, vec![starprod::fqlinalg::FieldElem::ONE; a.n()]).unwrap();
        let am = a.apply_monomial(&m).unwrap();
        prop_assert_eq!(am.k(), a.k());
        prop_assert_eq!(am.star_dim(&b.apply_monomial(&m).unwrap()).unwrap(), a.star_dim(&b).unwrap());
        prop_assert_eq!(a.apply_monomial(&perm_only).unwrap().min_distance().unwrap(), a.min_distance().unwrap());
        prop_assert_eq!(Monomial::from_mat(&m.to_mat(f).unwrap()).unwrap(), m);
    }
}
