//! Framed pairs `(φ, f)` with `φ ∈ End(V)` nilpotent of order `N` and
//! `f ∈ Hom(V, W)`, their image subspaces in `W ⊗ A_N`, and the action of
//! `GL_m(A_N)`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactlin::{rat, Rat, RatMatrix, Subspace};
use crate::loopmod::{LoopSpace, TSubspace};
use crate::partitions::{enumerate, Partition};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FramedPairJson", into = "FramedPairJson")]
pub struct FramedPair {
    k: usize,
    m: usize,
    depth: usize,
    phi: RatMatrix,
    f: RatMatrix,
}

#[derive(Serialize, Deserialize)]
struct FramedPairJson {
    k: usize,
    m: usize,
    #[serde(rename = "N")]
    depth: usize,
    phi: RatMatrix,
    f: RatMatrix,
}

impl TryFrom<FramedPairJson> for FramedPair {
    type Error = Error;
    fn try_from(j: FramedPairJson) -> Result<Self> {
        let p = FramedPair::new(j.m, j.depth, j.phi, j.f)?;
        if p.k != j.k {
            return Err(Error::DimensionMismatch {
                expected: j.k,
                found: p.k,
            });
        }
        Ok(p)
    }
}

impl From<FramedPair> for FramedPairJson {
    fn from(p: FramedPair) -> Self {
        FramedPairJson {
            k: p.k,
            m: p.m,
            depth: p.depth,
            phi: p.phi,
            f: p.f,
        }
    }
}

impl FramedPair {
    /// `phi` is `k×k` with `phi^N = 0`, `f` is `m×k`.
    pub fn new(m: usize, depth: usize, phi: RatMatrix, f: RatMatrix) -> Result<Self> {
        if !phi.is_square() {
            return Err(Error::NotSquare {
                rows: phi.rows(),
                cols: phi.cols(),
            });
        }
        let k = phi.rows();
        if f.rows() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: f.rows(),
            });
        }
        if f.cols() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: f.cols(),
            });
        }
        LoopSpace::new(m, depth)?;
        if !phi.pow(depth)?.is_zero() {
            return Err(Error::InvalidParameters(format!("phi^{depth} is not zero")));
        }
        Ok(FramedPair {
            k,
            m,
            depth,
            phi,
            f,
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn phi(&self) -> &RatMatrix {
        &self.phi
    }

    pub fn f(&self) -> &RatMatrix {
        &self.f
    }

    pub fn space(&self) -> LoopSpace {
        LoopSpace::new(self.m, self.depth).expect("validated on construction")
    }

    /// `[f; fφ; …; fφ^{p-1}]`.
    fn stacked(&self, p: usize) -> RatMatrix {
        let mut out = RatMatrix::zeros(0, self.k);
        let mut block = self.f.clone();
        for _ in 0..p {
            out = out.vstack(&block).expect("same width");
            block = block.mul(&self.phi).expect("shapes checked");
        }
        out
    }

    /// `⋂ Ker(fφ^i) = 0`.
    pub fn is_stable(&self) -> bool {
        self.k == 0 || self.stacked(self.k).rank() == self.k
    }

    /// `mN × k` matrix whose `t^i` block is `fφ^{N-1-i}`.
    pub fn embedding_matrix(&self) -> RatMatrix {
        let powers = self.stacked(self.depth).row_vectors();
        let m = self.m;
        let rows: Vec<Vec<Rat>> = (0..self.depth)
            .flat_map(|i| {
                let e = self.depth - 1 - i;
                powers[e * m..(e + 1) * m].to_vec()
            })
            .collect();
        RatMatrix::from_rows_with_cols(rows, self.k).expect("k columns")
    }

    pub fn to_subspace(&self) -> Result<TSubspace> {
        let u = Subspace::row_space(&self.embedding_matrix().transpose());
        if u.dim() < self.k {
            return Err(Error::Unstable);
        }
        TSubspace::new(self.space(), u)
    }
}

/// `Im(Σ fφ^{N-1-i} t^i)`.
pub fn pair_to_subspace(p: &FramedPair) -> Result<TSubspace> {
    p.to_subspace()
}

pub fn is_stable(p: &FramedPair) -> bool {
    p.is_stable()
}

/// Jordan type of a nilpotent matrix from the ranks of its powers.
pub fn jordan_type(phi: &RatMatrix) -> Result<Partition> {
    if !phi.is_square() {
        return Err(Error::NotSquare {
            rows: phi.rows(),
            cols: phi.cols(),
        });
    }
    let k = phi.rows();
    let mut ranks = vec![k];
    let mut power = RatMatrix::identity(k);
    while *ranks.last().expect("nonempty") > 0 {
        power = power.mul(phi)?;
        let r = power.rank();
        if r == *ranks.last().expect("nonempty") {
            return Err(Error::InvalidParameters("matrix is not nilpotent".into()));
        }
        ranks.push(r);
    }
    let conj: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    Ok(Partition::new(conj)?.conjugate())
}

/// Jordan blocks of sizes `λ_c` on `u_{c,1..λ_c}`, `f(u_{c,1}) = w_c`.
pub fn canonical_pair(lambda: &Partition, m: usize, depth: usize) -> Result<FramedPair> {
    let lam = lambda.trimmed();
    if lam.len() > m || lam.largest() > depth {
        return Err(Error::InvalidPartition(format!(
            "{lambda} does not fit m = {m}, N = {depth}"
        )));
    }
    let k = lam.size();
    let mut phi = RatMatrix::zeros(k, k);
    let mut f = RatMatrix::zeros(m, k);
    let mut start = 0;
    for (c, &len) in lam.parts().iter().enumerate() {
        f.set(c, start, Rat::one());
        for s in 1..len {
            phi.set(start + s - 1, start + s, Rat::one());
        }
        start += len;
    }
    FramedPair::new(m, depth, phi, f)
}

/// `Σ ψ_i t^i ∈ GL_m(A_N)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupElem {
    psi: Vec<RatMatrix>,
}

impl GroupElem {
    pub fn new(psi: Vec<RatMatrix>) -> Result<Self> {
        let first = psi
            .first()
            .ok_or_else(|| Error::InvalidParameters("empty group element".into()))?;
        let m = first.rows();
        for p in &psi {
            if p.rows() != m || p.cols() != m {
                return Err(Error::DimensionMismatch {
                    expected: m,
                    found: if p.rows() != m { p.rows() } else { p.cols() },
                });
            }
        }
        if first.determinant()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(GroupElem { psi })
    }

    pub fn identity(m: usize, depth: usize) -> Self {
        let mut psi = vec![RatMatrix::zeros(m, m); depth.max(1)];
        psi[0] = RatMatrix::identity(m);
        GroupElem { psi }
    }

    pub fn psi(&self) -> &[RatMatrix] {
        &self.psi
    }

    pub fn m(&self) -> usize {
        self.psi[0].rows()
    }

    /// Matrix on `W ⊗ A_N`: block `(i+j, j)` is `ψ_i`.
    pub fn matrix(&self, space: &LoopSpace) -> Result<RatMatrix> {
        let m = space.m();
        if m != self.m() {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: self.m(),
            });
        }
        let n = space.depth();
        let mut g = RatMatrix::zeros(space.dim(), space.dim());
        for (i, psi) in self.psi.iter().enumerate().take(n) {
            for j in 0..n - i {
                for a in 0..m {
                    for b in 0..m {
                        g.set((i + j) * m + a, j * m + b, psi.get(a, b).clone());
                    }
                }
            }
        }
        Ok(g)
    }
}

/// `(φ, Σ ψ_i f φ^i)`.
pub fn act(g: &GroupElem, p: &FramedPair) -> Result<FramedPair> {
    if g.m() != p.m {
        return Err(Error::DimensionMismatch {
            expected: p.m,
            found: g.m(),
        });
    }
    let mut f = RatMatrix::zeros(p.m, p.k);
    let mut fphi = p.f.clone();
    for psi in g.psi.iter().take(p.depth) {
        f = f.add(&psi.mul(&fphi)?)?;
        fphi = fphi.mul(&p.phi)?;
    }
    FramedPair::new(p.m, p.depth, p.phi.clone(), f)
}

fn small_int(rng: &mut ChaCha8Rng) -> Rat {
    rat(rng.gen_range(-3..=3))
}

fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> RatMatrix {
    RatMatrix::from_fn(rows, cols, |_, _| small_int(rng))
}

/// `ψ_0 = 1 + strictly lower noise`, other `ψ_i` uniform in `[-3, 3]`.
pub fn random_unipotent_elem(m: usize, depth: usize, rng: &mut ChaCha8Rng) -> GroupElem {
    let mut psi = Vec::with_capacity(depth);
    psi.push(RatMatrix::from_fn(m, m, |a, b| match a.cmp(&b) {
        std::cmp::Ordering::Equal => Rat::one(),
        std::cmp::Ordering::Greater => small_int(rng),
        std::cmp::Ordering::Less => Rat::zero(),
    }));
    for _ in 1..depth {
        psi.push(random_matrix(m, m, rng));
    }
    GroupElem { psi }
}

/// All `ψ_i` uniform in `[-3, 3]`; `ψ_0` is redrawn until invertible.
pub fn random_group_elem(m: usize, depth: usize, rng: &mut ChaCha8Rng) -> GroupElem {
    loop {
        let psi: Vec<RatMatrix> = (0..depth).map(|_| random_matrix(m, m, rng)).collect();
        if let Ok(g) = GroupElem::new(psi) {
            return g;
        }
    }
}

/// A point of the orbit of type `λ`, moved by a seeded unipotent element.
pub fn sample_orbit(lambda: &Partition, m: usize, depth: usize, seed: u64) -> Result<TSubspace> {
    let p = canonical_pair(lambda, m, depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_unipotent_elem(m, depth, &mut rng);
    act(&g, &p)?.to_subspace()
}

/// Like `sample_orbit` but with a fully random `ψ_0`.
pub fn sample_orbit_generic(
    lambda: &Partition,
    m: usize,
    depth: usize,
    seed: u64,
) -> Result<TSubspace> {
    let p = canonical_pair(lambda, m, depth)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_group_elem(m, depth, &mut rng);
    act(&g, &p)?.to_subspace()
}

/// A stable pair with `φ` a random conjugate of a random admissible Jordan
/// type and `f` random; redrawn until stable.
pub fn random_stable_pair(
    k: usize,
    m: usize,
    depth: usize,
    rng: &mut ChaCha8Rng,
) -> Result<FramedPair> {
    let types = enumerate(k, m, depth)?;
    let lam = &types[rng.gen_range(0..types.len())];
    let jordan = canonical_pair(lam, m, depth)?.phi;
    loop {
        let p = random_matrix(k, k, rng);
        let Ok(pinv) = p.inverse() else { continue };
        let phi = p.mul(&jordan)?.mul(&pinv)?;
        let f = random_matrix(m, k, rng);
        let pair = FramedPair::new(m, depth, phi, f)?;
        if pair.is_stable() {
            return Ok(pair);
        }
    }
}

/// Rank of `Lie GL_m(A_N) → Hom(U, (W ⊗ A_N)/U)`, `ξ ↦ (u ↦ ξu mod U)`.
pub fn orbit_tangent_dim(t: &TSubspace) -> usize {
    let space = t.space();
    let (m, n) = (space.m(), space.depth());
    let basis = t.subspace().basis_vectors();
    let quotient = t.subspace().annihilator();
    if basis.is_empty() || quotient.rows() == 0 {
        return 0;
    }
    let mut rows = Vec::with_capacity(m * m * n);
    for i in 0..n {
        for a in 0..m {
            for b in 0..m {
                let mut row = Vec::with_capacity(basis.len() * quotient.rows());
                for u in &basis {
                    // E_ab t^i: w_b ⊗ t^j ↦ w_a ⊗ t^{i+j}
                    let mut xu = vec![Rat::zero(); space.dim()];
                    for j in 0..n - i {
                        xu[(i + j) * m + a] = u[j * m + b].clone();
                    }
                    row.extend(quotient.mul_vec(&xu).expect("ambient length"));
                }
                rows.push(row);
            }
        }
    }
    let width = basis.len() * quotient.rows();
    RatMatrix::from_rows_with_cols(rows, width)
        .expect("uniform width")
        .rank()
}
