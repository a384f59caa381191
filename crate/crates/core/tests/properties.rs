use proptest::prelude::*;

use loopquiver::exactlin::{echelon_form, maximal_minors, ratio, Rat, RatMatrix, Subspace};
use loopquiver::framed::{act, jordan_type, random_group_elem, random_stable_pair, sample_orbit};
use loopquiver::orbitgeom::{closure_leq, OrbitPoset};
use loopquiver::partitions::{enumerate, max_partition, partitions_of, Partition};
use loopquiver::pluecker::{extract_b, pluecker, sample_x2m, PlueckerVector};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn entry() -> impl Strategy<Value = Rat> {
    (-4i64..=4, 1i64..=3).prop_map(|(p, q)| ratio(p, q))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = RatMatrix> {
    prop::collection::vec(entry(), rows * cols)
        .prop_map(move |v| RatMatrix::from_entries(rows, cols, v).unwrap())
}

fn subspace(ambient: usize) -> impl Strategy<Value = Subspace> {
    (0..=ambient).prop_flat_map(move |k| matrix(k, ambient).prop_map(|m| Subspace::row_space(&m)))
}

fn partition() -> impl Strategy<Value = Partition> {
    (0usize..=12).prop_flat_map(|k| {
        let all = partitions_of(k, k.max(1), k);
        (0..all.len()).prop_map(move |i| all[i].clone())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn echelon_is_idempotent(m in matrix(5, 5)) {
        let (e, r) = echelon_form(&m);
        let (e2, r2) = echelon_form(&e);
        prop_assert_eq!(&e, &e2);
        prop_assert_eq!(r, r2);
    }

    #[test]
    fn rank_of_transpose(m in matrix(5, 5)) {
        prop_assert_eq!(m.rank(), m.transpose().rank());
    }

    #[test]
    fn modular_law(a in subspace(5), b in subspace(5), c0 in subspace(5)) {
        let c = c0.sum(&a).unwrap();
        let lhs = a.sum(&b).unwrap().intersection(&c).unwrap();
        let rhs = a.sum(&b.intersection(&c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn deficient_minors_vanish(m in matrix(3, 6), row in 0usize..3) {
        // replace a row by a combination of the others
        let rows = m.row_vectors();
        let others: Vec<&Vec<Rat>> = rows.iter().enumerate().filter(|(i, _)| *i != row).map(|(_, r)| r).collect();
        let combo: Vec<Rat> = (0..6).map(|c| &others[0][c] * ratio(2, 1) - &others[1][c]).collect();
        let mut rows = rows.clone();
        rows[row] = combo;
        let d = RatMatrix::from_rows(rows).unwrap();
        prop_assert!(maximal_minors(&d.transpose()).unwrap().iter().all(Zero::is_zero));
    }

    #[test]
    fn conjugation_is_an_involution(l in partition()) {
        prop_assert_eq!(l.conjugate().conjugate().trimmed(), l.trimmed());
    }

    #[test]
    fn dominance_reverses_under_conjugation(l in partition(), seed in any::<u64>()) {
        let all = partitions_of(l.size(), l.size().max(1), l.size());
        let mu = &all[(seed % all.len() as u64) as usize];
        let pad = l.size().max(1);
        let (lc, mc) = (l.conjugate().padded(pad).unwrap(), mu.conjugate().padded(pad).unwrap());
        prop_assert_eq!(l.dominates(mu).unwrap(), mc.dominates(&lc).unwrap());
    }

    #[test]
    fn orbit_module_dims_two_ways(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=3) {
        let k = (seed % (m * n + 1) as u64) as usize;
        let types = enumerate(k, m, n).unwrap();
        let lam = &types[(seed / 17 % types.len() as u64) as usize];
        let u = sample_orbit(lam, m, n, seed).unwrap();
        let class = u.classify();
        prop_assert_eq!(class.size(), u.dim());
        prop_assert!(Partition::new(class.parts().to_vec()).is_ok());
        let closed: Vec<usize> = (0..=n)
            .map(|i| lam.parts().iter().map(|&p| p.saturating_sub(i)).sum())
            .collect();
        prop_assert_eq!(u.power_dims(), closed);
    }

    #[test]
    fn stable_pairs_have_their_jordan_type(seed in any::<u64>(), m in 1usize..=3, n in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = (seed % (m * n + 1) as u64) as usize;
        let p = random_stable_pair(k, m, n, &mut rng).unwrap();
        let t = p.to_subspace().unwrap();
        prop_assert_eq!(t.classify(), jordan_type(p.phi()).unwrap().padded(m).unwrap());
        let g = random_group_elem(m, n, &mut rng);
        let moved = act(&g, &p).unwrap().to_subspace().unwrap();
        let image = t.subspace().image(&g.matrix(t.space()).unwrap()).unwrap();
        prop_assert_eq!(moved.subspace(), &image);
    }

    #[test]
    fn pluecker_round_trip(seed in any::<u64>(), m in 2usize..=4) {
        let u = sample_x2m(m, seed).unwrap();
        let p = pluecker(&u).unwrap();
        prop_assert_eq!(&p.to_subspace(), u.subspace());
        prop_assert_eq!(PlueckerVector::of_subspace(u.subspace()).unwrap(), p);
        if let Some(b) = extract_b(&u) {
            let trace = (0..2).map(|i| b.get(i, i).clone()).fold(Rat::zero(), |a, x| a + x);
            prop_assert!(trace.is_zero());
            prop_assert!(b.determinant().unwrap().is_zero());
        }
    }
}

#[test]
fn orbit_dimension_formulas_agree() {
    for m in 1..=16 {
        for n in 1..=16 / m {
            for k in 0..=m * n {
                for lam in enumerate(k, m, n).unwrap() {
                    assert_eq!(
                        lam.orbit_dim(m).unwrap(),
                        lam.orbit_dim_weighted(m).unwrap()
                    );
                }
            }
        }
    }
}

#[test]
fn covers_generate_dominance() {
    for (m, n) in [(2, 3), (3, 2), (3, 3), (4, 2), (2, 5)] {
        for k in 0..=m * n {
            let types = enumerate(k, m, n).unwrap();
            let idx = |p: &Partition| types.iter().position(|q| q == p);
            let len = types.len();
            let mut reach = vec![vec![false; len]; len];
            for (a, lam) in types.iter().enumerate() {
                reach[a][a] = true;
                for c in lam.covers() {
                    assert!(lam.orbit_dim(m).unwrap() > c.orbit_dim(m).unwrap());
                    reach[a][idx(&c).expect("covers stay inside")] = true;
                }
            }
            for x in 0..len {
                for a in 0..len {
                    for b in 0..len {
                        if reach[a][x] && reach[x][b] {
                            reach[a][b] = true;
                        }
                    }
                }
            }
            for a in 0..len {
                for b in 0..len {
                    assert_eq!(
                        reach[a][b],
                        types[a].dominates(&types[b]).unwrap(),
                        "{} {}",
                        types[a],
                        types[b]
                    );
                }
            }
        }
    }
}

#[test]
fn closure_order_is_a_partial_order_with_top() {
    for (k, m, n) in [(4, 3, 2), (3, 2, 3), (6, 3, 3), (4, 2, 4)] {
        let types = enumerate(k, m, n).unwrap();
        let leq = |a: &Partition, b: &Partition| closure_leq(a, b, m, n).unwrap();
        for a in &types {
            assert!(leq(a, a));
            for b in &types {
                if a != b {
                    assert!(!(leq(a, b) && leq(b, a)));
                }
                for c in &types {
                    if leq(a, b) && leq(b, c) {
                        assert!(leq(a, c));
                    }
                }
            }
        }
        let poset = OrbitPoset::build(k, m, n).unwrap();
        assert_eq!(poset.maximal(), vec![&max_partition(k, m, n).unwrap()]);
    }
}

#[test]
fn top_orbit_dimension() {
    for (m, n) in [(2, 2), (3, 2), (4, 3), (5, 2)] {
        for k in 0..=m {
            let top = max_partition(k, m, n).unwrap();
            let nil = max_partition(k, k.max(1), n).unwrap();
            let nil_dim = k * k - nil.conjugate().parts().iter().map(|c| c * c).sum::<usize>();
            assert_eq!(top.orbit_dim(m).unwrap(), nil_dim + k * (m - k));
        }
    }
}
