//! Flags `U_1 ⊇ … ⊇ U_N`, `U_i ⊆ W ⊗ t^{i-1}A_N`, `t U_i ⊆ U_{i+1}`: the
//! points of the resolution `Y(k_*)` and its projection to `U_1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{rat, Rat, Subspace};
use crate::loopmod::{LoopSpace, TSubspace};
use crate::partitions::RankSequence;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagChain {
    #[serde(skip)]
    space: LoopSpace,
    chain: Vec<Subspace>,
}

impl FlagChain {
    /// No checks beyond lengths; see `is_valid`.
    pub fn new(space: LoopSpace, chain: Vec<Subspace>) -> Result<Self> {
        if chain.len() != space.depth() {
            return Err(Error::InvalidFlag(format!(
                "expected {} subspaces, got {}",
                space.depth(),
                chain.len()
            )));
        }
        if let Some(u) = chain.iter().find(|u| u.ambient_dim() != space.dim()) {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                found: u.ambient_dim(),
            });
        }
        Ok(FlagChain { space, chain })
    }

    pub fn space(&self) -> &LoopSpace {
        &self.space
    }

    pub fn chain(&self) -> &[Subspace] {
        &self.chain
    }

    pub fn dims(&self) -> Vec<usize> {
        self.chain.iter().map(Subspace::dim).collect()
    }

    /// Support, nesting and `t`-conditions, without the dimension vector.
    pub fn is_chain(&self) -> bool {
        let t = self.space.shift_matrix();
        let n = self.chain.len();
        (0..n).all(|i| {
            let u = &self.chain[i];
            let supported = self.space.t_power_part(i).contains(u).unwrap_or(false);
            let next = if i + 1 < n {
                u.contains(&self.chain[i + 1]).unwrap_or(false)
                    && self.chain[i + 1]
                        .contains(&u.image(&t).expect("square shift"))
                        .unwrap_or(false)
            } else {
                true
            };
            supported && next
        })
    }

    pub fn is_valid(&self, ks: &RankSequence) -> bool {
        ks.values() == self.dims().as_slice() && self.is_chain()
    }

    /// `U_1`.
    pub fn project(&self) -> Result<TSubspace> {
        if !self.is_chain() {
            return Err(Error::InvalidFlag("chain conditions fail".into()));
        }
        TSubspace::new(self.space, self.chain[0].clone())
    }
}

pub fn is_valid_flag(c: &FlagChain, ks: &RankSequence) -> bool {
    c.is_valid(ks)
}

pub fn project(c: &FlagChain) -> Result<TSubspace> {
    c.project()
}

/// `(U, tU, …, t^{N-1}U)`.
pub fn canonical_flag(t: &TSubspace) -> FlagChain {
    let chain = (0..t.space().depth()).map(|i| t.shifted(i)).collect();
    FlagChain {
        space: *t.space(),
        chain,
    }
}

/// `k_N ≤ m` and `0 ≤ k_{i-1} - k_i ≤ m`.
pub fn check_feasible(ks: &RankSequence, m: usize, depth: usize) -> Result<()> {
    if ks.len() != depth {
        return Err(Error::DimensionMismatch {
            expected: depth,
            found: ks.len(),
        });
    }
    if let Some(d) = ks.differences().into_iter().find(|&d| d > m) {
        return Err(Error::InvalidRankSequence(format!(
            "{:?} has a jump {d} > m = {m}",
            ks.values()
        )));
    }
    Ok(())
}

fn grow_randomly(
    start: Subspace,
    within: &Subspace,
    target: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Subspace> {
    let basis = within.basis_vectors();
    let mut u = start;
    while u.dim() < target {
        let mut v: Vec<Rat> = vec![rat(0); within.ambient_dim()];
        for b in &basis {
            let c = rat(rng.gen_range(-3..=3));
            for (x, y) in v.iter_mut().zip(b) {
                *x += &c * y;
            }
        }
        if !u.contains_vector(&v)? {
            let mut vs = u.basis_vectors();
            vs.push(v);
            u = Subspace::span(u.ambient_dim(), &vs)?;
        }
    }
    Ok(u)
}

/// Top-down through the tower: `U_N ⊆ W ⊗ t^{N-1}` first, then each
/// `U_{i-1}` between `U_i` and `t^{-1}U_i ∩ W ⊗ t^{i-2}A_N`.
pub fn random_flag(ks: &RankSequence, m: usize, depth: usize, seed: u64) -> Result<FlagChain> {
    let space = LoopSpace::new(m, depth)?;
    check_feasible(ks, m, depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t = space.shift_matrix();
    let mut chain = vec![Subspace::zero(space.dim()); depth];
    let floor = space.t_power_part(depth - 1);
    chain[depth - 1] = grow_randomly(Subspace::zero(space.dim()), &floor, ks.k(depth), &mut rng)?;
    for i in (1..depth).rev() {
        let within = chain[i]
            .preimage(&t)?
            .intersection(&space.t_power_part(i - 1))?;
        chain[i - 1] = grow_randomly(chain[i].clone(), &within, ks.k(i), &mut rng)?;
    }
    Ok(FlagChain { space, chain })
}

/// `m k_1 - Σ (k_i - k_{i+1})^2`.
pub fn tower_dim(ks: &RankSequence, m: usize) -> Result<usize> {
    let k1 = ks.values().first().copied().unwrap_or(0);
    let sq: usize = ks.differences().iter().map(|d| d * d).sum();
    (m * k1).checked_sub(sq).ok_or_else(|| {
        Error::InvalidRankSequence(format!("{:?} is infeasible for m = {m}", ks.values()))
    })
}

/// Whether the fibre of `Y(k_*) → X` over `T` is the single canonical flag:
/// any flag over `T` has `U_i ⊇ t^{i-1}U`, so equal dimensions force it.
pub fn fiber_is_forced(t: &TSubspace, ks: &RankSequence) -> bool {
    let d = t.power_dims();
    ks.len() == t.space().depth() && (0..ks.len()).all(|i| d[i] == ks.values()[i])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framed::sample_orbit;
    use crate::partitions::{enumerate, Partition};

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn ks(v: &[usize]) -> RankSequence {
        RankSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn canonical_flag_examples() {
        let u = sample_orbit(&p(&[2, 1]), 2, 2, 3).unwrap();
        let c = canonical_flag(&u);
        assert!(c.is_valid(&ks(&[3, 1])));
        assert_eq!(c.project().unwrap(), u);

        let s = LoopSpace::new(2, 2).unwrap();
        let u = crate::framed::canonical_pair(&p(&[2, 1]), 2, 2)
            .unwrap()
            .to_subspace()
            .unwrap();
        let c = canonical_flag(&u);
        assert_eq!(c.chain()[1], Subspace::coordinate(4, &[s.index(0, 1)]));

        let s = LoopSpace::new(2, 3).unwrap();
        let c = canonical_flag(&s.full());
        for i in 0..3 {
            assert_eq!(c.chain()[i], s.t_power_part(i));
        }
        let socle = TSubspace::new(s, s.t_power_part(2)).unwrap();
        let c = canonical_flag(&socle);
        assert_eq!(c.dims(), vec![2, 0, 0]);
        assert!(c.is_valid(&ks(&[2, 0, 0])));
    }

    #[test]
    fn invalid_flags() {
        let s = LoopSpace::new(1, 2).unwrap();
        let c = FlagChain::new(s, vec![Subspace::full(2), Subspace::zero(2)]).unwrap();
        assert!(!c.is_valid(&ks(&[2, 0])));
        assert!(c.project().is_err());
        let c = FlagChain::new(s, vec![Subspace::full(2), Subspace::coordinate(2, &[0])]).unwrap();
        assert!(!c.is_chain());
        let s1 = LoopSpace::new(3, 1).unwrap();
        let any = Subspace::span(3, &[vec![rat(1), rat(2), rat(3)]]).unwrap();
        let c = FlagChain::new(s1, vec![any]).unwrap();
        assert!(c.is_valid(&ks(&[1])));
        assert!(FlagChain::new(s, vec![Subspace::full(2)]).is_err());
    }

    #[test]
    fn random_flag_examples() {
        for seed in 0..10 {
            let full = random_flag(&ks(&[6, 4, 2]), 2, 3, seed).unwrap();
            assert_eq!(full, canonical_flag(&LoopSpace::new(2, 3).unwrap().full()));

            let k = ks(&[3, 1]);
            let c = random_flag(&k, 2, 2, seed).unwrap();
            assert!(c.is_valid(&k));
            assert!(p(&[2, 1])
                .dominates(&c.project().unwrap().classify())
                .unwrap());

            let c = random_flag(&ks(&[1, 1]), 1, 2, seed).unwrap();
            let socle = Subspace::coordinate(2, &[1]);
            assert_eq!(c.chain(), &[socle.clone(), socle]);
        }
        assert!(random_flag(&ks(&[4, 1]), 2, 2, 0).is_err());
        assert!(random_flag(&ks(&[3, 3]), 2, 2, 0).is_err());
    }

    #[test]
    fn projections_stay_below() {
        let lam = p(&[2, 2, 0]);
        let k = lam.rank_sequence(2).unwrap();
        for seed in 0..100 {
            let c = random_flag(&k, 3, 2, seed).unwrap();
            assert!(c.is_valid(&k));
            let class = c.project().unwrap().classify();
            assert!(class == lam || class == p(&[2, 1, 1]), "{class}");
        }
    }

    #[test]
    fn tower_dim_examples() {
        assert_eq!(tower_dim(&ks(&[3, 1]), 2).unwrap(), 1);
        for m in 1..5 {
            assert_eq!(tower_dim(&ks(&[m, 0, 0]), m).unwrap(), 0);
        }
        assert_eq!(
            tower_dim(&p(&[2, 2, 0]).rank_sequence(2).unwrap(), 3).unwrap(),
            4
        );
        for (m, n) in [(1, 4), (2, 3), (3, 2), (3, 4), (4, 3), (2, 6), (6, 2)] {
            for k in 0..=m * n {
                for lam in enumerate(k, m, n).unwrap() {
                    let t = tower_dim(&lam.rank_sequence(n).unwrap(), m).unwrap();
                    assert_eq!(t, lam.orbit_dim(m).unwrap());
                }
            }
        }
    }

    #[test]
    fn fibres_over_orbits_are_points() {
        for (m, n) in [(2, 2), (2, 3), (3, 2)] {
            for k in 0..=m * n {
                for lam in enumerate(k, m, n).unwrap() {
                    let k_lam = lam.rank_sequence(n).unwrap();
                    let u = sample_orbit(&lam, m, n, k as u64).unwrap();
                    assert!(fiber_is_forced(&u, &k_lam));
                    assert!(canonical_flag(&u).is_valid(&k_lam));
                }
            }
        }
    }
}
