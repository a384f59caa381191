//! Partitions labelling the `GL_m(A_N)`-orbits: conjugation, dominance,
//! covers, rank sequences and orbit dimensions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weakly decreasing sequence of non-negative parts. Trailing zeros are kept:
/// as an orbit label a partition is padded to exactly `m` parts.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!(
                "{parts:?} is not weakly decreasing"
            )));
        }
        Ok(Partition(parts))
    }

    /// Sorts the parts into decreasing order.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of stored entries, zeros included.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.0.iter().take_while(|&&p| p > 0).count()
    }

    pub fn largest(&self) -> usize {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn part(&self, i: usize) -> usize {
        self.0.get(i).copied().unwrap_or(0)
    }

    pub fn trimmed(&self) -> Partition {
        Partition(self.0[..self.length()].to_vec())
    }

    /// Pads with zeros (or drops trailing zeros) to exactly `m` entries.
    pub fn padded(&self, m: usize) -> Result<Partition> {
        if self.length() > m {
            return Err(Error::InvalidPartition(format!(
                "{self} has more than {m} nonzero parts"
            )));
        }
        let mut parts = self.0[..self.length()].to_vec();
        parts.resize(m, 0);
        Ok(Partition(parts))
    }

    /// `λ'_i = #{j : λ_j ≥ i}`, without trailing zeros.
    pub fn conjugate(&self) -> Partition {
        let largest = self.largest();
        Partition(
            (1..=largest)
                .map(|i| self.0.iter().filter(|&&p| p >= i).count())
                .collect(),
        )
    }

    /// Dominance order: every prefix sum of `self` is at least the matching
    /// prefix sum of `other` (missing entries count as zero).
    pub fn dominates(&self, other: &Partition) -> Result<bool> {
        let (a, b) = (self.size(), other.size());
        if a != b {
            return Err(Error::UnequalTotals { left: a, right: b });
        }
        let len = self.len().max(other.len());
        let (mut sa, mut sb) = (0, 0);
        for i in 0..len {
            sa += self.part(i);
            sb += other.part(i);
            if sa < sb {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Partitions covered by `self` in dominance order, among partitions with
    /// the same number of entries. Candidates come from moving one box from
    /// row `i` down to row `j > i`; minimality is then checked by brute force.
    pub fn covers(&self) -> Vec<Partition> {
        let len = self.len();
        let mut moves = Vec::new();
        for i in 0..len {
            for j in i + 1..len {
                if self.0[i] == 0 {
                    continue;
                }
                let mut mu = self.0.clone();
                mu[i] -= 1;
                mu[j] += 1;
                if let Ok(mu) = Partition::new(mu) {
                    if !moves.contains(&mu) {
                        moves.push(mu);
                    }
                }
            }
        }
        let below: Vec<Partition> = partitions_of(self.size(), len, self.largest())
            .into_iter()
            .filter(|nu| nu != self && self.dominates(nu).unwrap_or(false))
            .collect();
        let mut out: Vec<Partition> = moves
            .into_iter()
            .filter(|mu| {
                !below
                    .iter()
                    .any(|nu| nu != mu && nu.dominates(mu).unwrap_or(false))
            })
            .collect();
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// `m k - Σ (λ'_i)^2`.
    pub fn orbit_dim(&self, m: usize) -> Result<usize> {
        if self.length() > m {
            return Err(Error::InvalidPartition(format!(
                "{self} has more than {m} nonzero parts"
            )));
        }
        let k = self.size();
        let squares: usize = self.conjugate().0.iter().map(|c| c * c).sum();
        Ok(m * k - squares)
    }

    /// `(m+1) k - 2 Σ_i i λ_i`, the Hom/End count of the same dimension.
    pub fn orbit_dim_weighted(&self, m: usize) -> Result<usize> {
        if self.length() > m {
            return Err(Error::InvalidPartition(format!(
                "{self} has more than {m} nonzero parts"
            )));
        }
        let k = self.size();
        let weighted: usize = self.0.iter().enumerate().map(|(i, p)| (i + 1) * p).sum();
        Ok((m + 1) * k - 2 * weighted)
    }

    /// `k_i = Σ_{j ≥ i} λ'_j` for `i = 1..N`.
    pub fn rank_sequence(&self, n: usize) -> Result<RankSequence> {
        if self.largest() > n {
            return Err(Error::InvalidPartition(format!(
                "{self} has a part exceeding N = {n}"
            )));
        }
        let conj = self.conjugate();
        let ks = (1..=n)
            .map(|i| (i..=n).map(|j| conj.part(j - 1)).sum())
            .collect();
        RankSequence::new(ks)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Parses the CLI syntax `2,1,0`.
impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: std::result::Result<Vec<usize>, _> = s
            .trim()
            .trim_matches(|c| c == '(' || c == ')')
            .split(',')
            .filter(|p| !p.trim().is_empty())
            .map(|p| p.trim().parse::<usize>())
            .collect();
        let parts = parts.map_err(|e| Error::InvalidPartition(format!("{s:?}: {e}")))?;
        Partition::new(parts)
    }
}

impl TryFrom<Vec<usize>> for Partition {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

/// Expected dimensions `(dim U, dim tU, …, dim t^{N-1}U)` of an orbit point.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct RankSequence(Vec<usize>);

impl RankSequence {
    /// Accepts any weakly decreasing sequence; flag towers make sense for
    /// those too. [`RankSequence::partition`] tells whether it comes from a
    /// partition.
    pub fn new(ks: Vec<usize>) -> Result<Self> {
        if ks.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidRankSequence(format!(
                "{ks:?} is not weakly decreasing"
            )));
        }
        Ok(RankSequence(ks))
    }

    pub fn values(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `k_i`, 1-based; `k_{N+1} = 0`.
    pub fn k(&self, i: usize) -> usize {
        if i == 0 {
            panic!("rank sequence is 1-based");
        }
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    /// Successive differences `k_i - k_{i+1}` with `k_{N+1} = 0`.
    pub fn differences(&self) -> Vec<usize> {
        (1..=self.len())
            .map(|i| self.k(i) - self.k(i + 1))
            .collect()
    }

    /// The partition `λ` with `k_* = k_*(λ)`, if there is one: the differences
    /// are then the conjugate partition.
    pub fn partition(&self) -> Option<Partition> {
        let diffs = self.differences();
        if diffs.windows(2).any(|w| w[0] < w[1]) {
            return None;
        }
        Some(Partition(diffs).trimmed().conjugate())
    }
}

impl TryFrom<Vec<usize>> for RankSequence {
    type Error = Error;

    fn try_from(v: Vec<usize>) -> Result<Self> {
        RankSequence::new(v)
    }
}

impl From<RankSequence> for Vec<usize> {
    fn from(r: RankSequence) -> Self {
        r.0
    }
}

/// Partitions of `k` with at most `len` parts, each at most `max_part`,
/// padded to `len` entries, in decreasing lexicographic order.
pub fn partitions_of(k: usize, len: usize, max_part: usize) -> Vec<Partition> {
    fn go(rem: usize, slots: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if slots == 0 {
            if rem == 0 {
                out.push(Partition(cur.clone()));
            }
            return;
        }
        if rem > slots * cap {
            return;
        }
        for p in (0..=cap.min(rem)).rev() {
            cur.push(p);
            go(rem - p, slots - 1, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(k, len, max_part, &mut Vec::with_capacity(len), &mut out);
    out
}

/// Orbit labels of `X^(N)_{k,m}`: partitions of `k` into at most `m` parts of
/// size at most `N`, padded to length `m`.
pub fn enumerate(k: usize, m: usize, n: usize) -> Result<Vec<Partition>> {
    if k > m * n {
        return Err(Error::OutOfRange(format!("k = {k} exceeds mN = {}", m * n)));
    }
    Ok(partitions_of(k, m, n))
}

/// `(N^s, r, 0, …)` with `k = sN + r`, the label of the open orbit.
pub fn max_partition(k: usize, m: usize, n: usize) -> Result<Partition> {
    if k > m * n {
        return Err(Error::OutOfRange(format!("k = {k} exceeds mN = {}", m * n)));
    }
    let mut parts = vec![0; m];
    if let Some(s) = k.checked_div(n) {
        let r = k % n;
        for p in parts.iter_mut().take(s) {
            *p = n;
        }
        if r > 0 {
            parts[s] = r;
        }
    }
    Ok(Partition(parts))
}
