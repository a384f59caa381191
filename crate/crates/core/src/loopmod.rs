//! The module `W ⊗ A_N`, `A_N = Q[t]/(t^N)`, with its shift operator, and
//! the `t`-invariant subspaces that make up the quiver Grassmannian
//! `X^(N)_{k,m}`.
//!
//! Basis vectors `w_j ⊗ t^i` are ordered t-power-major: flat index `i*m + j`
//! with `j` zero-based. For `N = 2` a generator matrix thus reads `[fφ; f]`.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exactlin::{format_rat, parse_rat, unit, Rat, RatMatrix, Subspace};
use crate::partitions::{max_partition, Partition, RankSequence};
use num_traits::One;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct LoopSpace {
    m: usize,
    depth: usize,
}

impl LoopSpace {
    pub fn new(m: usize, depth: usize) -> Result<Self> {
        if m == 0 || depth == 0 {
            return Err(Error::InvalidParameters(format!(
                "loop space needs m >= 1 and N >= 1, got m = {m}, N = {depth}"
            )));
        }
        Ok(LoopSpace { m, depth })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// The truncation `N`.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn dim(&self) -> usize {
        self.m * self.depth
    }

    /// Flat index of `w_j ⊗ t^i` (`j` zero-based).
    pub fn index(&self, j: usize, i: usize) -> usize {
        debug_assert!(j < self.m && i < self.depth);
        i * self.m + j
    }

    pub fn basis_vector(&self, j: usize, i: usize) -> Vec<Rat> {
        unit(self.dim(), self.index(j, i))
    }

    /// Multiplication by `t`: `w_j ⊗ t^i ↦ w_j ⊗ t^{i+1}`, zero on `t^{N-1}`.
    pub fn shift_matrix(&self) -> RatMatrix {
        let mut t = RatMatrix::zeros(self.dim(), self.dim());
        for i in 0..self.depth - 1 {
            for j in 0..self.m {
                t.set(self.index(j, i + 1), self.index(j, i), Rat::one());
            }
        }
        t
    }

    /// `W ⊗ t^p A_N`.
    pub fn t_power_part(&self, p: usize) -> Subspace {
        let idx: Vec<usize> = (p..self.depth)
            .flat_map(|i| (0..self.m).map(move |j| i * self.m + j))
            .collect();
        Subspace::coordinate(self.dim(), &idx)
    }

    pub fn full(&self) -> TSubspace {
        TSubspace {
            space: *self,
            subspace: Subspace::full(self.dim()),
        }
    }

    /// Smallest `t`-invariant subspace containing `generators`.
    pub fn generated_by(&self, generators: &[Vec<Rat>]) -> Result<TSubspace> {
        let t = self.shift_matrix();
        let mut vectors = Vec::new();
        for g in generators {
            let mut v = g.clone();
            for _ in 0..self.depth {
                let next = t.mul_vec(&v)?;
                vectors.push(v);
                v = next;
            }
        }
        let subspace = Subspace::span(self.dim(), &vectors)?;
        Ok(TSubspace {
            space: *self,
            subspace,
        })
    }
}

pub fn shift_matrix(space: &LoopSpace) -> RatMatrix {
    space.shift_matrix()
}

/// Whether `t U ⊆ U`.
pub fn is_invariant(space: &LoopSpace, u: &Subspace) -> Result<bool> {
    if u.ambient_dim() != space.dim() {
        return Err(Error::DimensionMismatch {
            expected: space.dim(),
            found: u.ambient_dim(),
        });
    }
    u.contains(&u.image(&space.shift_matrix())?)
}

/// A `t`-invariant subspace of `W ⊗ A_N`, i.e. a point of `X^(N)_{dim U, m}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TSubspace {
    space: LoopSpace,
    subspace: Subspace,
}

impl TSubspace {
    pub fn new(space: LoopSpace, subspace: Subspace) -> Result<Self> {
        if !is_invariant(&space, &subspace)? {
            return Err(Error::NotInvariant);
        }
        Ok(TSubspace { space, subspace })
    }

    /// Span of `generators`, which must already be `t`-invariant.
    pub fn from_generators(space: LoopSpace, generators: &[Vec<Rat>]) -> Result<Self> {
        Self::new(space, Subspace::span(space.dim(), generators)?)
    }

    pub fn space(&self) -> &LoopSpace {
        &self.space
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn dim(&self) -> usize {
        self.subspace.dim()
    }

    /// `t^p U`.
    pub fn shifted(&self, p: usize) -> Subspace {
        let t = self.space.shift_matrix();
        let mut u = self.subspace.clone();
        for _ in 0..p {
            u = u.image(&t).expect("shift matches ambient dimension");
        }
        u
    }

    /// `(dim U, dim tU, …, dim t^N U)`; the last entry is always zero.
    pub fn power_dims(&self) -> Vec<usize> {
        let t = self.space.shift_matrix();
        let mut dims = Vec::with_capacity(self.space.depth + 1);
        let mut u = self.subspace.clone();
        dims.push(u.dim());
        for _ in 0..self.space.depth {
            u = u.image(&t).expect("shift matches ambient dimension");
            dims.push(u.dim());
        }
        dims
    }

    /// Isomorphism type of `U` as an `A_N`-module, padded to `m` parts:
    /// `λ'_i = dim t^{i-1}U - dim t^i U`.
    pub fn classify(&self) -> Partition {
        let d = self.power_dims();
        let conj: Vec<usize> = d.windows(2).map(|w| w[0] - w[1]).collect();
        Partition::new(conj)
            .expect("invariant subspaces have decreasing rank jumps")
            .trimmed()
            .conjugate()
            .padded(self.space.m)
            .expect("a submodule of W ⊗ A_N has at most m summands")
    }

    /// Membership in `C(k_*)`: `dim t^i U ≤ k_{i+1}` for `i = 0..N-1`.
    pub fn in_rank_conditions(&self, ks: &RankSequence) -> Result<bool> {
        if ks.len() != self.space.depth {
            return Err(Error::DimensionMismatch {
                expected: self.space.depth,
                found: ks.len(),
            });
        }
        let d = self.power_dims();
        Ok((0..self.space.depth).all(|i| d[i] <= ks.values()[i]))
    }
}

pub fn classify(t: &TSubspace) -> Partition {
    t.classify()
}

/// With `k = N r + s`: `e_1..e_r ⊗ A_N` plus `e_{r+1} ⊗ t^{N-s}..t^{N-1}`,
/// the torus-fixed point of the open orbit.
pub fn open_fixed_point(k: usize, m: usize, n: usize) -> Result<TSubspace> {
    let space = LoopSpace::new(m, n)?;
    check_k(k, &space)?;
    let (r, s) = (k / n, k % n);
    let mut idx = Vec::with_capacity(k);
    for j in 0..r {
        for i in 0..n {
            idx.push(space.index(j, i));
        }
    }
    for i in n - s..n {
        if s > 0 {
            idx.push(space.index(r, i));
        }
    }
    TSubspace::new(space, Subspace::coordinate(space.dim(), &idx))
}

/// With `k = m a + b`: `C^m ⊗ t^{N-a}..t^{N-1}` plus `e_1..e_b ⊗ t^{N-a-1}`.
pub fn hw_fixed_point(k: usize, m: usize, n: usize) -> Result<TSubspace> {
    let space = LoopSpace::new(m, n)?;
    check_k(k, &space)?;
    let (a, b) = (k / m, k % m);
    let mut idx = Vec::with_capacity(k);
    for i in n - a..n {
        for j in 0..m {
            idx.push(space.index(j, i));
        }
    }
    for j in 0..b {
        idx.push(space.index(j, n - a - 1));
    }
    TSubspace::new(space, Subspace::coordinate(space.dim(), &idx))
}

/// Partition of the open-orbit fixed point; equal to `max_partition`.
pub fn open_orbit_label(k: usize, m: usize, n: usize) -> Result<Partition> {
    max_partition(k, m, n)
}

fn check_k(k: usize, space: &LoopSpace) -> Result<()> {
    if k > space.dim() {
        return Err(Error::OutOfRange(format!(
            "k = {k} exceeds mN = {}",
            space.dim()
        )));
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct TSubspaceJson {
    m: usize,
    #[serde(rename = "N")]
    depth: usize,
    generators: Vec<Vec<String>>,
}

impl Serialize for TSubspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TSubspaceJson {
            m: self.space.m,
            depth: self.space.depth,
            generators: self
                .subspace
                .basis_vectors()
                .iter()
                .map(|v| v.iter().map(format_rat).collect())
                .collect(),
        }
        .serialize(s)
    }
}

/// Raw generator input as found in a JSON file, before the invariance check.
#[derive(Debug, Clone)]
pub struct GeneratorSet {
    pub space: LoopSpace,
    pub generators: Vec<Vec<Rat>>,
}

impl GeneratorSet {
    pub fn from_json(s: &str) -> Result<Self> {
        let raw: TSubspaceJson = serde_json::from_str(s)?;
        let space = LoopSpace::new(raw.m, raw.depth)?;
        let mut generators = Vec::with_capacity(raw.generators.len());
        for g in &raw.generators {
            let v: Result<Vec<Rat>> = g.iter().map(|x| parse_rat(x)).collect();
            let v = v?;
            if v.len() != space.dim() {
                return Err(Error::DimensionMismatch {
                    expected: space.dim(),
                    found: v.len(),
                });
            }
            generators.push(v);
        }
        Ok(GeneratorSet { space, generators })
    }

    pub fn into_tsubspace(self) -> Result<TSubspace> {
        TSubspace::from_generators(self.space, &self.generators)
    }
}

impl<'de> Deserialize<'de> for TSubspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = TSubspaceJson::deserialize(d)?;
        let text = serde_json::to_string(&raw).map_err(D::Error::custom)?;
        GeneratorSet::from_json(&text)
            .and_then(GeneratorSet::into_tsubspace)
            .map_err(D::Error::custom)
    }
}
