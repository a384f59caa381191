//! Orbit closures in `X^(N)_{k,m}`: the dominance predicate, the two-row
//! degeneration families `U_z`, and exhaustive verification over a poset.

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{rat, Rat};
use crate::framed::sample_orbit;
use crate::loopmod::{LoopSpace, TSubspace};
use crate::partitions::{enumerate, max_partition, Partition};

/// Parameters at which a family is expected to stay in the orbit of `λ`.
pub const GENERIC_Z: [i64; 3] = [2, 5, -3];

fn check_label(lambda: &Partition, m: usize, depth: usize) -> Result<Partition> {
    let lam = lambda.trimmed();
    if lam.len() > m || lam.largest() > depth {
        return Err(Error::InvalidPartition(format!(
            "{lambda} is not a type for m = {m}, N = {depth}"
        )));
    }
    lam.padded(m)
}

/// Whether `O_μ ⊆ closure(O_λ)`; equal to dominance.
pub fn closure_leq(lambda: &Partition, mu: &Partition, m: usize, depth: usize) -> Result<bool> {
    let l = check_label(lambda, m, depth)?;
    let u = check_label(mu, m, depth)?;
    l.dominates(&u)
}

/// Generators `(z t^{N-λ1}, t^{N-λ1+1})`, `(t^{N-λ2-1}, z t^{N-λ2})` in
/// rows `i`, `j` of `W ⊗ A_N` (zero-based).
fn family_generators(
    space: &LoopSpace,
    rows: (usize, usize),
    l1: usize,
    l2: usize,
    z: &Rat,
) -> [Vec<Rat>; 2] {
    let n = space.depth();
    let (i, j) = rows;
    let mut g1 = vec![Rat::zero(); space.dim()];
    g1[space.index(i, n - l1)] = z.clone();
    g1[space.index(j, n - l1 + 1)] = Rat::one();
    let mut g2 = vec![Rat::zero(); space.dim()];
    g2[space.index(i, n - l2 - 1)] = Rat::one();
    if l2 > 0 {
        g2[space.index(j, n - l2)] = z.clone();
    }
    [g1, g2]
}

fn check_family_params(l1: usize, l2: usize, depth: usize) -> Result<()> {
    if !(depth >= l1 && l1 >= l2 + 2) {
        return Err(Error::InvalidParameters(format!(
            "need N >= λ1 >= λ2 + 2, got λ1 = {l1}, λ2 = {l2}, N = {depth}"
        )));
    }
    Ok(())
}

/// The `A_N`-submodule of `A_N^2` spanned by the two family generators.
pub fn degeneration_family(l1: usize, l2: usize, depth: usize, z: &Rat) -> Result<TSubspace> {
    check_family_params(l1, l2, depth)?;
    let space = LoopSpace::new(2, depth)?;
    space.generated_by(&family_generators(&space, (0, 1), l1, l2, z))
}

/// `λ` with one box moved from row `i` to row `j` (zero-based), re-sorted.
pub fn move_box(lambda: &Partition, i: usize, j: usize) -> Result<Partition> {
    let mut parts = lambda.parts().to_vec();
    if i >= j || j >= parts.len() || parts[i] < parts[j] + 2 {
        return Err(Error::InvalidParameters(format!(
            "cannot move a box of {lambda} from row {} to row {}",
            i + 1,
            j + 1
        )));
    }
    parts[i] -= 1;
    parts[j] += 1;
    Ok(Partition::from_unsorted(parts))
}

/// Family of rows `i < j` (zero-based) placed inside `W ⊗ A_N`, with the
/// cyclic summands `w_c ⊗ t^{N-λ_c}A_N` in every other row.
pub fn minimal_degeneration_embed(
    lambda: &Partition,
    rows: (usize, usize),
    m: usize,
    depth: usize,
    z: &Rat,
) -> Result<TSubspace> {
    let lam = check_label(lambda, m, depth)?;
    let (i, j) = rows;
    move_box(&lam, i, j)?;
    let space = LoopSpace::new(m, depth)?;
    let mut gens = family_generators(&space, rows, lam.part(i), lam.part(j), z).to_vec();
    for c in (0..m).filter(|&c| c != i && c != j) {
        let l = lam.part(c);
        if l > 0 {
            gens.push(space.basis_vector(c, depth - l));
        }
    }
    space.generated_by(&gens)
}

/// Rows `(i, j)` realizing a cover `λ → μ`: first and last differing rows.
pub fn cover_rows(lambda: &Partition, mu: &Partition) -> Option<(usize, usize)> {
    let len = lambda.len().max(mu.len());
    let l = lambda.padded(len).ok()?;
    let u = mu.padded(len).ok()?;
    let diff: Vec<usize> = (0..len).filter(|&r| l.part(r) != u.part(r)).collect();
    match diff.as_slice() {
        [] => None,
        d => Some((d[0], d[d.len() - 1])),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PosetNode {
    pub partition: Partition,
    pub dim: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct OrbitPoset {
    pub k: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub depth: usize,
    pub nodes: Vec<PosetNode>,
    /// Cover relations `(from, to)` as node indices, `from > to`.
    pub edges: Vec<(usize, usize)>,
}

impl OrbitPoset {
    pub fn build(k: usize, m: usize, depth: usize) -> Result<Self> {
        let parts = enumerate(k, m, depth)?;
        let nodes: Vec<PosetNode> = parts
            .iter()
            .map(|p| {
                Ok(PosetNode {
                    partition: p.clone(),
                    dim: p.orbit_dim(m)?,
                })
            })
            .collect::<Result<_>>()?;
        let mut edges = Vec::new();
        for (a, p) in parts.iter().enumerate() {
            for c in p.covers() {
                if let Some(b) = parts.iter().position(|q| *q == c) {
                    edges.push((a, b));
                }
            }
        }
        Ok(OrbitPoset {
            k,
            m,
            depth,
            nodes,
            edges,
        })
    }

    /// Nodes not below any other node.
    pub fn maximal(&self) -> Vec<&Partition> {
        (0..self.nodes.len())
            .filter(|&b| !self.edges.iter().any(|&(_, t)| t == b))
            .map(|b| &self.nodes[b].partition)
            .collect()
    }

    /// Unique maximum is `max_partition` and dimensions drop along covers.
    pub fn check(&self) -> Result<bool> {
        let top = max_partition(self.k, self.m, self.depth)?;
        let unique_top = self.maximal() == vec![&top];
        let decreasing = self
            .edges
            .iter()
            .all(|&(a, b)| self.nodes[a].dim > self.nodes[b].dim);
        Ok(unique_top && decreasing)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PairCheck {
    pub lambda: Partition,
    pub mu: Partition,
    pub dominates: bool,
    pub in_rank_conditions: bool,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CoverCheck {
    pub from: Partition,
    pub to: Partition,
    /// One-based rows carrying the family.
    pub rows: (usize, usize),
    pub generic_classes: Vec<Partition>,
    pub special_class: Partition,
    /// Dimensions at `z = 1` and `z = -1`.
    pub dims_at_unit: (usize, usize),
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdherenceReport {
    pub k: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub depth: usize,
    pub pairs: Vec<PairCheck>,
    pub covers: Vec<CoverCheck>,
    pub pass: bool,
}

fn check_pair(
    lambda: &Partition,
    mu: &Partition,
    m: usize,
    depth: usize,
    seed: u64,
) -> Result<PairCheck> {
    let point = sample_orbit(mu, m, depth, seed)?;
    let in_rank = point.in_rank_conditions(&lambda.rank_sequence(depth)?)?;
    let dominates = lambda.dominates(mu)?;
    Ok(PairCheck {
        lambda: lambda.clone(),
        mu: mu.clone(),
        dominates,
        in_rank_conditions: in_rank,
        pass: dominates == in_rank,
    })
}

fn check_cover(lambda: &Partition, mu: &Partition, m: usize, depth: usize) -> Result<CoverCheck> {
    let (i, j) = cover_rows(lambda, mu)
        .ok_or_else(|| Error::InvalidParameters(format!("{lambda} equals {mu}")))?;
    let k = lambda.size();
    let generic: Vec<TSubspace> = GENERIC_Z
        .iter()
        .map(|&z| minimal_degeneration_embed(lambda, (i, j), m, depth, &rat(z)))
        .collect::<Result<_>>()?;
    let special = minimal_degeneration_embed(lambda, (i, j), m, depth, &Rat::zero())?;
    let plus = minimal_degeneration_embed(lambda, (i, j), m, depth, &rat(1))?;
    let minus = minimal_degeneration_embed(lambda, (i, j), m, depth, &rat(-1))?;
    let generic_classes: Vec<Partition> = generic.iter().map(TSubspace::classify).collect();
    let special_class = special.classify();
    let pass = generic.iter().all(|u| u.dim() == k)
        && generic_classes.iter().all(|c| c == lambda)
        && special.dim() == k
        && special_class == *mu
        && move_box(lambda, i, j)? == *mu;
    Ok(CoverCheck {
        from: lambda.clone(),
        to: mu.clone(),
        rows: (i + 1, j + 1),
        generic_classes,
        special_class,
        dims_at_unit: (plus.dim(), minus.dim()),
        pass,
    })
}

/// Every ordered pair against the rank conditions and every cover against
/// an explicit family.
pub fn verify_adherence(k: usize, m: usize, depth: usize) -> Result<AdherenceReport> {
    let parts = enumerate(k, m, depth)?;
    let pair_list: Vec<(usize, usize)> = (0..parts.len())
        .flat_map(|a| (0..parts.len()).map(move |b| (a, b)))
        .collect();
    let pairs: Vec<PairCheck> = pair_list
        .par_iter()
        .map(|&(a, b)| check_pair(&parts[a], &parts[b], m, depth, (a * parts.len() + b) as u64))
        .collect::<Result<_>>()?;
    let cover_list: Vec<(Partition, Partition)> = parts
        .iter()
        .flat_map(|p| p.covers().into_iter().map(move |c| (p.clone(), c)))
        .collect();
    let covers: Vec<CoverCheck> = cover_list
        .par_iter()
        .map(|(l, u)| check_cover(l, u, m, depth))
        .collect::<Result<_>>()?;
    let pass = pairs.iter().all(|p| p.pass) && covers.iter().all(|c| c.pass);
    Ok(AdherenceReport {
        k,
        m,
        depth,
        pairs,
        covers,
        pass,
    })
}
