use cyclekap::admissible::{is_admissible, AdmissibleFamily, SupportSet};
use cyclekap::classify::realize_cells;
use cyclekap::filtration::{chain, kaplansky_invariants};
use cyclekap::gen::{random_cells, random_nilpotent, random_pointed_sum, random_table};
use cyclekap::{
    adapted_basis, AdaptedBasis, CellMultiset, CycleRep, Field, Filtration, InvariantTable, Matrix, MorphismFamily,
    Ordinal, PrimeField, Rationals, Subspace, TerminalRep,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ordinal() -> impl Strategy<Value = Ordinal> {
    prop::collection::vec((0u64..3, 0u64..4), 0..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(Ordinal::zero(), |acc, (e, c)| acc.add(&Ordinal::term(Ordinal::finite(e), c.max(1))))
    })
}

fn field_case<F: Field>(field: &F, seed: u64) -> CycleRep<F> {
    let mut r = rng(seed);
    let n = r.gen_range(1..=3);
    random_nilpotent(field, &mut r, n, 8)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ordinal_text_round_trip(a in ordinal()) {
        prop_assert_eq!(a.to_string().parse::<Ordinal>().unwrap(), a);
    }

    #[test]
    fn ordinal_addition(a in ordinal(), b in ordinal(), c in ordinal()) {
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert!(a.add(&b) >= b);
        prop_assert!(a.succ() > a);
        if !b.is_zero() {
            prop_assert!(a.add(&b) > a);
        }
    }

    #[test]
    fn prime_field_inverses(a in 1u64..101) {
        let f = PrimeField::new(101).unwrap();
        prop_assert_eq!(f.mul(&a, &f.inv(&a).unwrap()), 1);
    }

    #[test]
    fn rank_nullity(seed: u64, rows in 0usize..6, cols in 0usize..6) {
        let q = Rationals;
        let m = Matrix::random(&q, rows, cols, &mut rng(seed));
        prop_assert_eq!(m.rank() + m.kernel_vectors().len(), cols);
    }

    #[test]
    fn random_invertible_has_inverse(seed: u64, d in 0usize..6) {
        let f = PrimeField::new(7).unwrap();
        let m = Matrix::random_invertible(&f, d, &mut rng(seed));
        let inv = m.inverse().unwrap();
        prop_assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(&f, d));
    }

    #[test]
    fn subspace_dimension_formula(seed: u64, d in 1usize..6) {
        let f = PrimeField::new(3).unwrap();
        let mut r = rng(seed);
        let span = |r: &mut ChaCha8Rng| {
            let m = Matrix::random(&f, r.gen_range(0..=d), d, r);
            Subspace::row_space(&m)
        };
        let (a, b) = (span(&mut r), span(&mut r));
        let sum = a.sum(&b).unwrap();
        let meet = a.intersect(&b).unwrap();
        prop_assert_eq!(sum.dim() + meet.dim(), a.dim() + b.dim());
        prop_assert!(meet.is_subspace_of(&a) && a.is_subspace_of(&sum));
    }

    #[test]
    fn cyclerep_text_round_trip(seed: u64) {
        let u = field_case(&Rationals, seed);
        prop_assert_eq!(CycleRep::parse_with(&Rationals, &u.to_text()).unwrap(), u);
    }

    #[test]
    fn invariants_survive_basis_change(seed: u64) {
        let f = PrimeField::new(5).unwrap();
        let u = field_case(&f, seed);
        let (v, phi) = u.random_basis_change(seed ^ 1);
        phi.verify_iso(&u, &v).unwrap();
        prop_assert_eq!(kaplansky_invariants(&u).unwrap(), kaplansky_invariants(&v).unwrap());
    }

    #[test]
    fn invariants_are_additive(s1: u64, s2: u64) {
        let f = PrimeField::new(2).unwrap();
        let mut r = rng(s1);
        let n = r.gen_range(1..=3);
        let u = random_nilpotent(&f, &mut r, n, 6);
        let v = random_nilpotent(&f, &mut rng(s2), n, 6);
        let sum = kaplansky_invariants(&u.direct_sum(&v).unwrap()).unwrap();
        let parts = kaplansky_invariants(&u).unwrap().add(&kaplansky_invariants(&v).unwrap());
        prop_assert_eq!(sum, parts);
    }

    #[test]
    fn nilpotent_core_vanishes(seed: u64) {
        let u = field_case(&PrimeField::new(3).unwrap(), seed);
        let filt = chain(&u).unwrap();
        for k in 0..u.n() {
            prop_assert!(filt.core(k).is_zero());
        }
        prop_assert!(filt.length() <= u.total_dim() + 1);
    }

    #[test]
    fn lifting(seed: u64) {
        let f = PrimeField::new(3).unwrap();
        let u = field_case(&f, seed);
        let filt = Filtration::new(&u).unwrap();
        let n = u.n();
        for k in 0..n {
            let prev = (k + n - 1) % n;
            for a in 1..filt.length() {
                for y in filt.level(k, a).vectors() {
                    let Some(h) = filt.height_index(k, &y) else { continue };
                    if h == 0 {
                        continue;
                    }
                    // Preimages of y inside U_{k−1,h−1}.
                    let level = filt.level(prev, h - 1).vectors();
                    let images: Vec<_> = level.iter().map(|b| u.map(prev).apply(b)).collect();
                    let c = Matrix::from_columns(&f, u.dim(k), &images).solve(&y);
                    prop_assert!(c.is_some(), "no lift of a height-{} vector", h);
                    let c = c.unwrap();
                    let mut x = vec![0; u.dim(prev)];
                    for (ci, b) in c.iter().zip(&level) {
                        for (xi, bi) in x.iter_mut().zip(b) {
                            *xi = f.add(xi, &f.mul(ci, bi));
                        }
                    }
                    prop_assert_eq!(filt.height_index(prev, &x), Some(h - 1));
                }
            }
        }
    }

    #[test]
    fn computed_tables_are_admissible(seed: u64) {
        let u = field_case(&PrimeField::new(2).unwrap(), seed);
        let t = kaplansky_invariants(&u).unwrap();
        prop_assert!(is_admissible(&SupportSet::from_table(u.n(), &t)).is_ok());
    }

    #[test]
    fn table_text_round_trip(seed: u64) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let t = random_table(&mut r, n, 8, 4, 6);
        prop_assert_eq!(InvariantTable::parse(&t.to_text()).unwrap(), t.clone());
        let fam = AdmissibleFamily::from_table(n, &t);
        let back = AdmissibleFamily::parse(&fam.to_text()).unwrap();
        prop_assert_eq!(back.to_table().unwrap(), t);
    }

    #[test]
    fn cells_round_trip(seed: u64) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let cells = random_cells(&mut r, n, 4, 10);
        prop_assert_eq!(CellMultiset::parse(&cells.to_text()).unwrap(), cells.clone());
        let u = realize_cells(&Rationals, &cells).unwrap();
        let t = kaplansky_invariants(&u).unwrap();
        prop_assert_eq!(CellMultiset::from_table(n, &t).unwrap(), cells);
    }

    #[test]
    fn terminal_round_trip(seed: u64) {
        let mut r = rng(seed);
        let n = r.gen_range(1..=4);
        let f = random_pointed_sum(&mut r, n, 4, 4);
        prop_assert!(f.validate().is_empty());
        prop_assert_eq!(TerminalRep::parse(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn adapted_basis_round_trip(seed: u64) {
        let f = PrimeField::new(5).unwrap();
        let u = field_case(&f, seed);
        let b = adapted_basis(&u).unwrap();
        b.validate(&u).unwrap();
        prop_assert_eq!(AdaptedBasis::parse(&f, &b.to_text()).unwrap(), b);
    }

    #[test]
    fn morphism_round_trip(seed: u64) {
        let q = Rationals;
        let u = field_case(&q, seed);
        let (v, phi) = u.random_basis_change(seed);
        let back = MorphismFamily::parse(&q, &phi.to_text(), &u, &v).unwrap();
        prop_assert_eq!(back.phis(), phi.phis());
        back.verify_iso(&u, &v).unwrap();
    }
}
