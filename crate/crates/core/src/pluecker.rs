//! Plücker coordinates of subspaces, the linear and quadratic relations cut
//! out by `X_{2,m}`, and the rank-one / `WZ = 0` equations for its points.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{
    combinations, format_rat, maximal_minors, rat, serialize_rats, Rat, RatMatrix, Subspace,
};
use crate::framed::sample_orbit_generic;
use crate::loopmod::TSubspace;
use crate::partitions::enumerate;

/// Maximal minors indexed by increasing `k`-subsets of `0..ambient` in
/// lexicographic order, scaled so the first nonzero entry is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PlueckerVector {
    ambient: usize,
    k: usize,
    #[serde(serialize_with = "serialize_rats")]
    coords: Vec<Rat>,
}

impl PlueckerVector {
    pub fn of_subspace(u: &Subspace) -> Result<Self> {
        if u.is_zero() {
            return Err(Error::InvalidParameters(
                "the zero subspace has no Plücker point".into(),
            ));
        }
        let minors = maximal_minors(&u.basis().transpose())?;
        Self::from_coords(u.ambient_dim(), u.dim(), minors)
    }

    pub fn from_coords(ambient: usize, k: usize, coords: Vec<Rat>) -> Result<Self> {
        let expected = combinations(ambient, k).len();
        if coords.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                found: coords.len(),
            });
        }
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .ok_or_else(|| Error::InvalidParameters("all coordinates vanish".into()))?;
        let coords = coords.into_iter().map(|c| c / &lead).collect();
        Ok(PlueckerVector { ambient, k, coords })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    /// Lexicographic position of an increasing index set.
    fn position(&self, idx: &[usize]) -> usize {
        let (n, k) = (self.ambient, self.k);
        let mut pos = 0;
        let mut prev = 0;
        for (r, &i) in idx.iter().enumerate() {
            for skipped in prev..i {
                pos += binomial(n - skipped - 1, k - r - 1);
            }
            prev = i + 1;
        }
        pos
    }

    /// Coordinate for an arbitrary (not necessarily sorted) index tuple,
    /// with the sign of the sorting permutation; zero on repeats.
    pub fn coord(&self, idx: &[usize]) -> Rat {
        let mut sorted = idx.to_vec();
        let mut sign = 1;
        for a in 0..sorted.len() {
            for b in 0..sorted.len() - 1 - a {
                if sorted[b] > sorted[b + 1] {
                    sorted.swap(b, b + 1);
                    sign = -sign;
                } else if sorted[b] == sorted[b + 1] {
                    return Rat::zero();
                }
            }
        }
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Rat::zero();
        }
        let c = self.coords[self.position(&sorted)].clone();
        if sign < 0 {
            -c
        } else {
            c
        }
    }

    /// `T_{i,j}` with one-based `i < j` as printed for `k = 2`.
    pub fn t(&self, i: usize, j: usize) -> Rat {
        self.coord(&[i - 1, j - 1])
    }

    /// Whether two vectors agree up to a nonzero scalar.
    pub fn proportional(&self, raw: &[Rat]) -> bool {
        PlueckerVector::from_coords(self.ambient, self.k, raw.to_vec())
            .map(|p| p == *self)
            .unwrap_or(false)
    }

    /// Inverse of `of_subspace` on the chart of the first nonzero coordinate.
    pub fn to_subspace(&self) -> Subspace {
        let sets = combinations(self.ambient, self.k);
        let lead_pos = self
            .coords
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero by construction");
        let lead = &sets[lead_pos];
        let p_lead = &self.coords[lead_pos];
        let m = RatMatrix::from_fn(self.ambient, self.k, |r, c| {
            if let Some(pos) = lead.iter().position(|&x| x == r) {
                if pos == c {
                    Rat::one()
                } else {
                    Rat::zero()
                }
            } else {
                let mut idx = lead.clone();
                idx[c] = r;
                self.coord(&idx) / p_lead
            }
        });
        Subspace::row_space(&m.transpose())
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn pluecker(t: &TSubspace) -> Result<PlueckerVector> {
    PlueckerVector::of_subspace(t.subspace())
}

fn require_k2(p: &PlueckerVector) -> Result<usize> {
    if p.k != 2 || !p.ambient.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!(
            "need k = 2 and even ambient dimension, got k = {}, ambient {}",
            p.k, p.ambient
        )));
    }
    Ok(p.ambient / 2)
}

/// `T_{i,k}T_{j,l} = T_{i,j}T_{k,l} + T_{i,l}T_{j,k}` over the given indices.
fn three_term_relations_hold(indices: &[usize], t: impl Fn(usize, usize) -> Rat) -> (usize, bool) {
    let quads = combinations(indices.len(), 4);
    let ok = quads.iter().all(|q| {
        let [i, j, k, l] = [q[0], q[1], q[2], q[3]].map(|x| indices[x]);
        t(i, k) * t(j, l) == t(i, j) * t(k, l) + t(i, l) * t(j, k)
    });
    (quads.len(), ok)
}

/// All three-term relations among the `T_{i,j}`.
pub fn check_pluecker_relations(p: &PlueckerVector) -> Result<bool> {
    let n = require_k2(p)? * 2;
    let idx: Vec<usize> = (1..=n).collect();
    Ok(three_term_relations_hold(&idx, |i, j| p.t(i, j)).1)
}

/// `x_{i,j} = 0` for `i < j ≤ m` and `x_{i,j+m} = x_{j,i+m}`.
pub fn check_k2_linear(p: &PlueckerVector) -> Result<bool> {
    let m = require_k2(p)?;
    let upper_zero = (1..=m).all(|i| (i + 1..=m).all(|j| p.t(i, j).is_zero()));
    let symmetric = (1..=m).all(|i| (1..=m).all(|j| p.t(i, j + m) == p.t(j, i + m)));
    Ok(upper_zero && symmetric)
}

/// `x_{1,3} x_{2,4} = x_{1,4}^2`.
pub fn check_x22_quadric(p: &PlueckerVector) -> Result<bool> {
    if require_k2(p)? != 2 {
        return Err(Error::InvalidParameters(
            "the quadric is defined for m = 2".into(),
        ));
    }
    Ok(p.t(1, 3) * p.t(2, 4) == p.t(1, 4) * p.t(1, 4))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureData {
    pub m: usize,
    pub w: RatMatrix,
    /// `v_{i,j}` for `i < j` in lexicographic order.
    #[serde(serialize_with = "serialize_rats")]
    pub v: Vec<Rat>,
    pub z: RatMatrix,
}

impl ConjectureData {
    pub fn from_pluecker(p: &PlueckerVector) -> Result<Self> {
        let m = require_k2(p)?;
        let w = RatMatrix::from_fn(m, m, |i, j| p.t(i + 1, j + m + 1));
        if w != w.transpose() {
            return Err(Error::AsymmetricW);
        }
        let vt = |i: usize, j: usize| p.t(i + m, j + m);
        let v = combinations(m, 2)
            .iter()
            .map(|c| vt(c[0] + 1, c[1] + 1))
            .collect();
        let triples = combinations(m, 3);
        let mut z = RatMatrix::zeros(m, triples.len());
        for (col, tr) in triples.iter().enumerate() {
            let [j, k, l] = [tr[0] + 1, tr[1] + 1, tr[2] + 1];
            z.set(j - 1, col, vt(k, l));
            z.set(k - 1, col, -vt(j, l));
            z.set(l - 1, col, vt(j, k));
        }
        Ok(ConjectureData { m, w, v, z })
    }

    /// One-based `v_{i,j}`, `i < j`.
    pub fn v_at(&self, i: usize, j: usize) -> Rat {
        let pos = combinations(self.m, 2)
            .iter()
            .position(|c| c[0] + 1 == i && c[1] + 1 == j)
            .expect("i < j <= m");
        self.v[pos].clone()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConjectureReport {
    pub rank_at_most_one: bool,
    pub wz_zero: bool,
    pub v_pluecker: bool,
    /// Number of scalar equations evaluated.
    pub equations: usize,
}

impl ConjectureReport {
    pub fn pass(&self) -> bool {
        self.rank_at_most_one && self.wz_zero && self.v_pluecker
    }
}

pub fn conjecture_check(p: &PlueckerVector) -> Result<ConjectureReport> {
    let d = ConjectureData::from_pluecker(p)?;
    let m = d.m;
    let pairs = combinations(m, 2);
    let mut equations = pairs.len() * pairs.len();
    let rank_at_most_one = pairs.iter().all(|r| {
        pairs.iter().all(|c| {
            d.w.get(r[0], c[0]) * d.w.get(r[1], c[1]) == d.w.get(r[0], c[1]) * d.w.get(r[1], c[0])
        })
    });
    let wz = d.w.mul(&d.z)?;
    equations += wz.rows() * wz.cols();
    let wz_zero = wz.is_zero();
    let idx: Vec<usize> = (1..=m).collect();
    let (count, v_pluecker) = three_term_relations_hold(&idx, |i, j| d.v_at(i, j));
    equations += count;
    Ok(ConjectureReport {
        rank_at_most_one,
        wz_zero,
        v_pluecker,
        equations,
    })
}

/// `B` with `[X; Y] = [Y B; Y]` for a basis of a point of `X^(2)_{k,m}`
/// whose `t`-block has full rank; `None` off that cell.
pub fn extract_b(t: &TSubspace) -> Option<RatMatrix> {
    let space = t.space();
    if space.depth() != 2 {
        return None;
    }
    let m = space.m();
    let cols = t.subspace().basis().transpose();
    let x = cols.select_rows(&(0..m).collect::<Vec<_>>());
    let y = cols.select_rows(&(m..2 * m).collect::<Vec<_>>());
    let yt = y.transpose();
    let gram_inv = yt.mul(&y).ok()?.inverse().ok()?;
    let b = gram_inv.mul(&yt).ok()?.mul(&x).ok()?;
    (y.mul(&b).ok()? == x).then_some(b)
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleFailure {
    pub seed: u64,
    pub coords: Vec<String>,
    pub linear: bool,
    pub pluecker: bool,
    pub conjecture: Option<ConjectureReport>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SampleReport {
    pub m: usize,
    pub samples: usize,
    pub relations_checked: usize,
    pub failures: Vec<SampleFailure>,
}

impl SampleReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A random point of `X^(2)_{2,m}`: a random orbit type, moved by a
/// random group element.
pub fn sample_x2m(m: usize, seed: u64) -> Result<TSubspace> {
    let types = enumerate(2, m, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lam = &types[rng.gen_range(0..types.len())];
    sample_orbit_generic(lam, m, 2, rng.gen())
}

/// Linear relations, Plücker relations and (optionally) the conjectured
/// equations on `samples` seeded points of `X_{2,m}`.
pub fn sample_and_check(
    m: usize,
    samples: usize,
    seed: u64,
    conjecture: bool,
) -> Result<SampleReport> {
    if !(2..=5).contains(&m) && conjecture {
        return Err(Error::OutOfRange(format!(
            "conjecture checks need 2 <= m <= 5, got {m}"
        )));
    }
    let results: Vec<(usize, Option<SampleFailure>)> = (0..samples as u64)
        .into_par_iter()
        .map(|s| {
            let seed = seed.wrapping_add(s);
            let p = pluecker(&sample_x2m(m, seed)?)?;
            let linear = check_k2_linear(&p)?;
            let relations = check_pluecker_relations(&p)?;
            let n = 2 * m;
            let mut count = binomial(m, 2) + m * m + binomial(n, 4);
            let (conj, error) = if conjecture {
                match conjecture_check(&p) {
                    Ok(r) => {
                        count += r.equations;
                        (Some(r), None)
                    }
                    Err(e) => (None, Some(e.to_string())),
                }
            } else {
                (None, None)
            };
            let ok = linear
                && relations
                && error.is_none()
                && conj.as_ref().is_none_or(ConjectureReport::pass);
            let failure = (!ok).then(|| SampleFailure {
                seed,
                coords: p.coords().iter().map(format_rat).collect(),
                linear,
                pluecker: relations,
                conjecture: conj,
                error,
            });
            Ok((count, failure))
        })
        .collect::<Result<_>>()?;
    Ok(SampleReport {
        m,
        samples,
        relations_checked: results.iter().map(|r| r.0).sum(),
        failures: results.into_iter().filter_map(|r| r.1).collect(),
    })
}

/// A random `k`-dimensional subspace of `Q^n` with entries in `[-3, 3]`.
pub fn random_subspace(n: usize, k: usize, seed: u64) -> Subspace {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let rows: Vec<Vec<Rat>> = (0..k)
            .map(|_| (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect())
            .collect();
        let u = Subspace::span(n, &rows).expect("row length n");
        if u.dim() == k {
            return u;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framed::FramedPair;
    use crate::loopmod::LoopSpace;

    fn point(b: &[&[i64]], a: &[&[i64]]) -> TSubspace {
        let pair =
            FramedPair::new(a.len(), 2, RatMatrix::from_i64(b), RatMatrix::from_i64(a)).unwrap();
        pair.to_subspace().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn pluecker_examples() {
        let p1 = pluecker(&point(&[&[0, 1], &[0, 0]], &[&[1, 0], &[0, 1]])).unwrap();
        assert!(p1.proportional(&ints(&[0, -1, 0, 0, 0, 1])));
        assert_eq!(p1.coords(), ints(&[0, 1, 0, 0, 0, -1]).as_slice());
        let p2 = pluecker(&point(&[&[1, 1], &[-1, -1]], &[&[1, 0], &[0, 1]])).unwrap();
        assert!(p2.proportional(&ints(&[0, -1, 1, 1, -1, 1])));

        let u = Subspace::span(4, &[ints(&[1, 2, 0, 1]), ints(&[0, 1, 1, 1])]).unwrap();
        let other = Subspace::span(4, &[ints(&[1, 3, 1, 2]), ints(&[2, 3, -1, 1])]).unwrap();
        assert_eq!(u, other);
        let raw = maximal_minors(
            &RatMatrix::from_rows(vec![ints(&[1, 3, 1, 2]), ints(&[2, 3, -1, 1])])
                .unwrap()
                .transpose(),
        )
        .unwrap();
        assert!(PlueckerVector::of_subspace(&u).unwrap().proportional(&raw));
        assert!(PlueckerVector::of_subspace(&Subspace::zero(4)).is_err());
    }

    #[test]
    fn coordinate_lookup_matches_lexicographic_order() {
        let u = random_subspace(7, 3, 1);
        let p = PlueckerVector::of_subspace(&u).unwrap();
        for (pos, set) in combinations(7, 3).iter().enumerate() {
            assert_eq!(p.coord(set), p.coords()[pos]);
            let swapped = [set[1], set[0], set[2]];
            assert_eq!(p.coord(&swapped), -p.coords()[pos].clone());
        }
        assert!(p.coord(&[1, 1, 2]).is_zero());
    }

    #[test]
    fn linear_relation_examples() {
        let p1 = pluecker(&point(&[&[0, 1], &[0, 0]], &[&[1, 0], &[0, 1]])).unwrap();
        let p2 = pluecker(&point(&[&[1, 1], &[-1, -1]], &[&[1, 0], &[0, 1]])).unwrap();
        assert!(check_k2_linear(&p1).unwrap());
        assert!(check_k2_linear(&p2).unwrap());
        let socle = LoopSpace::new(2, 2).unwrap();
        let s = PlueckerVector::of_subspace(&socle.t_power_part(1)).unwrap();
        assert_eq!(s.coords(), ints(&[0, 0, 0, 0, 0, 1]).as_slice());
        assert!(check_k2_linear(&s).unwrap());
        let failures = (0..20)
            .filter(|&seed| {
                let p = PlueckerVector::of_subspace(&random_subspace(4, 2, seed)).unwrap();
                !check_k2_linear(&p).unwrap()
            })
            .count();
        assert!(failures >= 18);
    }

    #[test]
    fn quadric_examples() {
        for raw in [
            [0, -1, 0, 0, 0, 1],
            [0, -1, 1, 1, -1, 1],
            [0, 0, 0, 0, 0, 1],
        ] {
            let p = PlueckerVector::from_coords(4, 2, ints(&raw)).unwrap();
            assert!(check_x22_quadric(&p).unwrap());
            assert!(check_pluecker_relations(&p).unwrap());
        }
        for seed in 0..30 {
            let p = pluecker(&sample_x2m(2, seed).unwrap()).unwrap();
            assert!(check_x22_quadric(&p).unwrap());
            let c = conjecture_check(&p).unwrap();
            assert!(c.pass());
            assert_eq!(c.rank_at_most_one, check_x22_quadric(&p).unwrap());
        }
    }

    #[test]
    fn conjecture_data_shape() {
        let p = pluecker(&sample_x2m(2, 0).unwrap()).unwrap();
        let d = ConjectureData::from_pluecker(&p).unwrap();
        assert_eq!(d.z.cols(), 0);
        let p = pluecker(&sample_x2m(4, 0).unwrap()).unwrap();
        let d = ConjectureData::from_pluecker(&p).unwrap();
        assert_eq!((d.z.rows(), d.z.cols(), d.v.len()), (4, 4, 6));
        // column (1,2,3) of Z is (v23, -v13, v12, 0)
        assert_eq!(d.z.get(0, 0), &d.v_at(2, 3));
        assert_eq!(d.z.get(1, 0), &-d.v_at(1, 3));
        assert_eq!(d.z.get(2, 0), &d.v_at(1, 2));
        assert!(d.z.get(3, 0).is_zero());

        let asym = PlueckerVector::of_subspace(&random_subspace(6, 2, 3)).unwrap();
        assert_eq!(
            ConjectureData::from_pluecker(&asym),
            Err(Error::AsymmetricW)
        );
    }

    #[test]
    fn conjecture_holds_on_samples() {
        for m in 3..=5 {
            let r = sample_and_check(m, 100, 1000 * m as u64, true).unwrap();
            assert!(r.pass(), "m={m}: {:?}", r.failures);
            assert!(r.relations_checked > 0);
        }
    }

    #[test]
    fn round_trip_through_coordinates() {
        for seed in 0..20 {
            let u = random_subspace(6, 2, seed);
            let p = PlueckerVector::of_subspace(&u).unwrap();
            assert_eq!(p.to_subspace(), u);
            let t = sample_x2m(3, seed).unwrap();
            assert_eq!(&pluecker(&t).unwrap().to_subspace(), t.subspace());
        }
        let u = random_subspace(7, 3, 99);
        assert_eq!(PlueckerVector::of_subspace(&u).unwrap().to_subspace(), u);
    }

    #[test]
    fn extracted_b_is_nilpotent() {
        let mut seen = 0;
        for m in 2..=4 {
            for seed in 0..30 {
                let t = sample_x2m(m, seed).unwrap();
                if let Some(b) = extract_b(&t) {
                    seen += 1;
                    let trace = b.get(0, 0) + b.get(1, 1);
                    assert!(trace.is_zero());
                    assert!(b.determinant().unwrap().is_zero());
                }
            }
        }
        assert!(seen > 50);
    }
}
