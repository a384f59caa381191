//! Charge-zero semi-infinite wedges `v_{i_0} ∧ v_{i_1} ∧ …`, the action of
//! matrix units, projected negative currents of `sl_2`-hat and `gl_1`-hat,
//! and the ehf-monomials spanning the degenerate level-one module.
//!
//! Indices follow the `n = 2` folding `v_{2i+1} ↦ w_1 ⊗ t^{-i-1}`,
//! `v_{2i} ↦ w_2 ⊗ t^{-i}`, or `v_a ↦ w ⊗ t^{-a}` for `gl_1`.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{Rat, RatMatrix};

/// Largest supported energy bound.
pub const MAX_ENERGY: usize = 10;
pub const DEFAULT_ENERGY: usize = 6;

/// A wedge stored as its symmetric difference with `|0⟩ = v_0 ∧ v_{-1} ∧ …`:
/// `added` holds indices `> 0`, `removed` indices `≤ 0`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct WedgeBasisElem {
    added: BTreeSet<i64>,
    removed: BTreeSet<i64>,
}

impl WedgeBasisElem {
    pub fn vacuum() -> Self {
        WedgeBasisElem {
            added: BTreeSet::new(),
            removed: BTreeSet::new(),
        }
    }

    pub fn new(added: BTreeSet<i64>, removed: BTreeSet<i64>) -> Result<Self> {
        if added.iter().any(|&a| a <= 0) || removed.iter().any(|&r| r > 0) {
            return Err(Error::InvalidParameters(
                "added indices must be positive and removed ones non-positive".into(),
            ));
        }
        if added.len() != removed.len() {
            return Err(Error::InvalidParameters(
                "only charge 0 is supported".into(),
            ));
        }
        Ok(WedgeBasisElem { added, removed })
    }

    pub fn added(&self) -> &BTreeSet<i64> {
        &self.added
    }

    pub fn removed(&self) -> &BTreeSet<i64> {
        &self.removed
    }

    pub fn contains(&self, i: i64) -> bool {
        if i > 0 {
            self.added.contains(&i)
        } else {
            !self.removed.contains(&i)
        }
    }

    /// Number of occupied indices strictly between `x` and `y`.
    fn occupied_between(&self, x: i64, y: i64) -> usize {
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        // occupied non-positive indices in (lo, min(hi, 1))
        let top = hi.min(1);
        let mut count = 0;
        if top > lo + 1 {
            count += (top - lo - 1) as usize - self.removed.range(lo + 1..top).count();
        }
        if hi > lo + 1 {
            count += self.added.range(lo + 1..hi).count();
        }
        count
    }

    /// `E_{a,b}`: replaces `v_b` by `v_a`, with the sign of the reordering.
    pub fn apply_unit(&self, a: i64, b: i64) -> Option<(Self, i64)> {
        if a == b || !self.contains(b) || self.contains(a) {
            return None;
        }
        let sign = if self.occupied_between(a, b).is_multiple_of(2) {
            1
        } else {
            -1
        };
        let mut out = self.clone();
        if b > 0 {
            out.added.remove(&b);
        } else {
            out.removed.insert(b);
        }
        if a > 0 {
            out.added.insert(a);
        } else {
            out.removed.remove(&a);
        }
        Some((out, sign))
    }

    pub fn energy(&self, grading: Grading) -> i64 {
        self.added.iter().map(|&a| grading.eps(a)).sum::<i64>()
            - self.removed.iter().map(|&r| grading.eps(r)).sum::<i64>()
    }

    /// The occupied indices `≥ floor`, in decreasing order.
    pub fn occupied_from(&self, floor: i64) -> Vec<i64> {
        let mut v: Vec<i64> = self.added.iter().rev().copied().collect();
        v.extend((floor..=0).rev().filter(|i| !self.removed.contains(i)));
        v
    }
}

impl std::fmt::Display for WedgeBasisElem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let floor = self.removed.iter().next().copied().unwrap_or(0).min(0) - 1;
        let parts: Vec<String> = self
            .occupied_from(floor)
            .iter()
            .map(|i| format!("v_{i}"))
            .collect();
        write!(f, "{}^...", parts.join("^"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Grading {
    /// `ε(v_{2k}) = k`, `ε(v_{2k+1}) = k + 1`.
    Sl2,
    /// `ε(v_k) = k`.
    Gl1,
}

impl Grading {
    pub fn eps(self, i: i64) -> i64 {
        match self {
            Grading::Sl2 => i.div_euclid(2) + i.rem_euclid(2),
            Grading::Gl1 => i,
        }
    }
}

/// Finite combination of wedges; zero coefficients are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WedgeVector {
    terms: BTreeMap<WedgeBasisElem, Rat>,
}

impl WedgeVector {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn vacuum() -> Self {
        Self::basis(WedgeBasisElem::vacuum())
    }

    pub fn basis(e: WedgeBasisElem) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(e, Rat::one());
        WedgeVector { terms }
    }

    pub fn terms(&self) -> &BTreeMap<WedgeBasisElem, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &WedgeBasisElem) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, e: WedgeBasisElem, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
            Entry::Vacant(v) => {
                v.insert(c);
            }
        }
    }

    pub fn add(&self, other: &WedgeVector) -> WedgeVector {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rat) -> WedgeVector {
        if s.is_zero() {
            return WedgeVector::zero();
        }
        WedgeVector {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * s)).collect(),
        }
    }

    /// Energies of the terms, without repetition.
    pub fn energies(&self, grading: Grading) -> BTreeSet<i64> {
        self.terms.keys().map(|e| e.energy(grading)).collect()
    }

    pub fn is_homogeneous(&self, grading: Grading, d: i64) -> bool {
        self.terms.keys().all(|e| e.energy(grading) == d)
    }
}

/// `E_{a,b}` extended to wedges by the Leibniz rule.
pub fn apply_unit(a: i64, b: i64, w: &WedgeVector) -> WedgeVector {
    let mut out = WedgeVector::zero();
    for (e, c) in &w.terms {
        if let Some((f, sign)) = e.apply_unit(a, b) {
            out.add_term(f, c * Rat::from_integer(sign.into()));
        }
    }
    out
}

/// `Σ coeff · E_{a,b}` with every `b ≤ 0 < a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AbelianCurrent {
    units: Vec<(i64, i64, i64)>,
}

impl AbelianCurrent {
    pub fn new(units: Vec<(i64, i64, i64)>) -> Result<Self> {
        if units.iter().any(|&(a, b, _)| !(b <= 0 && a > 0)) {
            return Err(Error::InvalidParameters(
                "units must lie in the (+,-) block".into(),
            ));
        }
        Ok(AbelianCurrent { units })
    }

    pub fn units(&self) -> &[(i64, i64, i64)] {
        &self.units
    }

    pub fn apply(&self, w: &WedgeVector) -> WedgeVector {
        self.units
            .iter()
            .fold(WedgeVector::zero(), |acc, &(a, b, c)| {
                acc.add(&apply_unit(a, b, w).scale(&Rat::from_integer(c.into())))
            })
    }
}

/// The three negative current families of `sl_2`-hat, named by their shift:
/// `F1` moves even indices by `2i - 1`, `F2` both parities by `2i`, `F3` odd
/// indices by `2i + 1`. Exponents `a_i`, `b_i`, `c_i` bind to `F1`, `F2`,
/// `F3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Family {
    F1,
    F2,
    F3,
}

impl Family {
    pub const ALL: [Family; 3] = [Family::F1, Family::F2, Family::F3];

    pub fn letter(self) -> char {
        match self {
            Family::F1 => 'f',
            Family::F2 => 'h',
            Family::F3 => 'e',
        }
    }
}

/// Projection to the `(+,-)` block of the level-`i` current of `family`.
pub fn projected_current(family: Family, i: usize) -> Result<AbelianCurrent> {
    if i == 0 {
        return Err(Error::InvalidParameters(
            "current level must be positive".into(),
        ));
    }
    let i = i as i64;
    let mut units = Vec::new();
    match family {
        Family::F1 => {
            for k in 1 - i..=0 {
                units.push((2 * k + 2 * i - 1, 2 * k, 1));
            }
        }
        Family::F2 => {
            for k in -i..=-1 {
                units.push((2 * k + 2 * i + 1, 2 * k + 1, 1));
            }
            for k in 1 - i..=0 {
                units.push((2 * k + 2 * i, 2 * k, -1));
            }
        }
        Family::F3 => {
            for k in 1 - i..=0 {
                units.push((2 * k + 2 * i, 2 * k - 1, 1));
            }
        }
    }
    AbelianCurrent::new(units)
}

/// `p(h_{-a}) = Σ_{k=1-a}^{0} E_{k+a,k}` for `gl_1`.
pub fn gl1_current(a: usize) -> Result<AbelianCurrent> {
    if a == 0 {
        return Err(Error::InvalidParameters(
            "current level must be positive".into(),
        ));
    }
    let a = a as i64;
    AbelianCurrent::new((1 - a..=0).map(|k| (k + a, k, 1)).collect())
}

/// `Π f_{-i}^{a_i} h_{-i}^{b_i} e_{-i}^{c_i}`, exponents in `{0, 1}`;
/// index `i - 1` holds level `i`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EhfMonomial {
    pub a: Vec<u8>,
    pub b: Vec<u8>,
    pub c: Vec<u8>,
}

impl EhfMonomial {
    pub fn new(a: Vec<u8>, b: Vec<u8>, c: Vec<u8>) -> Result<Self> {
        let len = a.len().max(b.len()).max(c.len());
        let pad = |mut v: Vec<u8>| {
            v.resize(len, 0);
            v
        };
        let m = EhfMonomial {
            a: pad(a),
            b: pad(b),
            c: pad(c),
        };
        if m.a.iter().chain(&m.b).chain(&m.c).any(|&x| x > 1) {
            return Err(Error::InvalidParameters("exponents must be 0 or 1".into()));
        }
        Ok(m)
    }

    pub fn levels(&self) -> usize {
        self.a.len()
    }

    fn at(v: &[u8], i: usize) -> u8 {
        if i >= 1 && i <= v.len() {
            v[i - 1]
        } else {
            0
        }
    }

    /// `Σ i (a_i + b_i + c_i)`.
    pub fn energy(&self) -> usize {
        (1..=self.levels())
            .map(|i| i * (self.a[i - 1] + self.b[i - 1] + self.c[i - 1]) as usize)
            .sum()
    }

    /// Conditions (a) to (d) at every level.
    pub fn is_admissible(&self) -> bool {
        (1..=self.levels()).all(|i| admissible_at(self, i))
    }

    /// `(family, level)` of each letter, by increasing level.
    pub fn letters(&self) -> Vec<(Family, usize)> {
        let mut out = Vec::new();
        for i in 1..=self.levels() {
            for (f, v) in [
                (Family::F1, &self.a),
                (Family::F2, &self.b),
                (Family::F3, &self.c),
            ] {
                if v[i - 1] == 1 {
                    out.push((f, i));
                }
            }
        }
        out
    }
}

impl std::fmt::Display for EhfMonomial {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let letters = self.letters();
        if letters.is_empty() {
            return write!(f, "1");
        }
        let s: Vec<String> = letters
            .iter()
            .map(|(fam, i)| format!("{}_-{i}", fam.letter()))
            .collect();
        write!(f, "{}", s.join(" "))
    }
}

fn admissible_at(m: &EhfMonomial, i: usize) -> bool {
    let (a, b, c) = (&m.a, &m.b, &m.c);
    let g = EhfMonomial::at;
    g(a, i) + g(a, i + 1) + g(b, i + 1) <= 1
        && g(a, i) + g(b, i + 1) + g(c, i + 1) <= 1
        && g(a, i) + g(b, i) + g(c, i + 1) <= 1
        && g(b, i) + g(c, i) + g(c, i + 1) <= 1
}

fn check_bound(d: usize) -> Result<()> {
    if d > MAX_ENERGY {
        return Err(Error::InvalidParameters(format!(
            "energy bound {d} exceeds the cap {MAX_ENERGY}"
        )));
    }
    Ok(())
}

/// All admissible monomials of energy `≤ d`, sorted by energy, then
/// lexicographically; each has `d` levels.
pub fn enumerate_ehf(d: usize) -> Result<Vec<EhfMonomial>> {
    check_bound(d)?;
    let mut out = Vec::new();
    let mut cur = EhfMonomial {
        a: vec![0; d],
        b: vec![0; d],
        c: vec![0; d],
    };
    fn rec(level: usize, budget: usize, cur: &mut EhfMonomial, out: &mut Vec<EhfMonomial>) {
        let d = cur.levels();
        if level > d {
            out.push(cur.clone());
            return;
        }
        for code in 0..8u8 {
            let bits = [code & 1, (code >> 1) & 1, (code >> 2) & 1];
            let cost = level * bits.iter().map(|&x| x as usize).sum::<usize>();
            if cost > budget {
                continue;
            }
            cur.a[level - 1] = bits[0];
            cur.b[level - 1] = bits[1];
            cur.c[level - 1] = bits[2];
            // conditions at level - 1 only involve levels up to `level`
            if (level == 1 || admissible_at(cur, level - 1))
                && (level < d || admissible_at(cur, level))
            {
                rec(level + 1, budget - cost, cur, out);
            }
        }
        cur.a[level - 1] = 0;
        cur.b[level - 1] = 0;
        cur.c[level - 1] = 0;
    }
    if d == 0 {
        return Ok(vec![cur]);
    }
    rec(1, d, &mut cur, &mut out);
    out.sort_by(|x, y| x.energy().cmp(&y.energy()).then_with(|| x.cmp(y)));
    Ok(out)
}

/// Monomial counts per energy `0..=d`.
pub fn ehf_counts(d: usize) -> Result<Vec<usize>> {
    let mut counts = vec![0; d + 1];
    for m in enumerate_ehf(d)? {
        counts[m.energy()] += 1;
    }
    Ok(counts)
}

/// Coefficients of `(Σ_{j∈Z} q^{j^2}) · Π_{i≥1} (1 - q^i)^{-1}` up to `q^d`.
pub fn character_coefficients(d: usize) -> Vec<u64> {
    let mut theta = vec![0u64; d + 1];
    theta[0] = 1;
    let mut j = 1;
    while j * j <= d {
        theta[j * j] += 2;
        j += 1;
    }
    // multiply by 1/(1 - q^i) for i = 1..d
    let mut series = theta;
    for i in 1..=d {
        for x in i..=d {
            series[x] += series[x - i];
        }
    }
    series
}

/// Applies the letters to `|0⟩` in the given order.
pub fn evaluate_letters(letters: &[(Family, usize)]) -> Result<WedgeVector> {
    let mut w = WedgeVector::vacuum();
    for &(f, i) in letters.iter().rev() {
        w = projected_current(f, i)?.apply(&w);
    }
    Ok(w)
}

pub fn evaluate_monomial(m: &EhfMonomial) -> Result<WedgeVector> {
    check_bound(m.energy())?;
    evaluate_letters(&m.letters())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnergyRank {
    pub energy: usize,
    pub count: usize,
    pub character: u64,
    pub rank: usize,
    pub homogeneous: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndependenceReport {
    #[serde(rename = "D")]
    pub bound: usize,
    pub levels: Vec<EnergyRank>,
}

impl IndependenceReport {
    pub fn pass(&self) -> bool {
        self.levels
            .iter()
            .all(|l| l.count == l.rank && l.count as u64 == l.character && l.homogeneous)
    }
}

/// Rank of a family of wedge vectors in the wedge basis.
pub fn wedge_rank(vectors: &[WedgeVector]) -> usize {
    let support: BTreeSet<&WedgeBasisElem> = vectors.iter().flat_map(|v| v.terms.keys()).collect();
    let cols: BTreeMap<&WedgeBasisElem, usize> = support
        .into_iter()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    let rows: Vec<Vec<Rat>> = vectors
        .iter()
        .map(|v| {
            let mut row = vec![Rat::zero(); cols.len()];
            for (e, c) in &v.terms {
                row[cols[e]] = c.clone();
            }
            row
        })
        .collect();
    RatMatrix::from_rows_with_cols(rows, cols.len())
        .expect("uniform width")
        .rank()
}

pub fn independence_report(d: usize) -> Result<IndependenceReport> {
    let monomials = enumerate_ehf(d)?;
    let chars = character_coefficients(d);
    let levels = (0..=d)
        .into_par_iter()
        .map(|e| {
            let vs = monomials
                .iter()
                .filter(|m| m.energy() == e)
                .map(evaluate_monomial)
                .collect::<Result<Vec<_>>>()?;
            Ok(EnergyRank {
                energy: e,
                count: vs.len(),
                character: chars[e],
                rank: wedge_rank(&vs),
                homogeneous: vs.iter().all(|v| v.is_homogeneous(Grading::Sl2, e as i64)),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IndependenceReport { bound: d, levels })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarkerReport {
    #[serde(rename = "D")]
    pub bound: usize,
    /// Monomials with no wedge term absent from every other evaluation of
    /// the same energy.
    pub unmarked: Vec<String>,
    /// Whether every energy admits an order `m_1, m_2, …` in which each
    /// `m_r` has a wedge term absent from all later evaluations; then any
    /// linear combination has a monomial whose term occurs only in it.
    pub peeling_ok: bool,
}

impl MarkerReport {
    pub fn pass(&self) -> bool {
        self.peeling_ok
    }
}

fn has_private_term(x: usize, evals: &[WedgeVector], others: &[usize]) -> bool {
    evals[x].terms.keys().any(|e| {
        others
            .iter()
            .all(|&y| y == x || !evals[y].terms.contains_key(e))
    })
}

pub fn marker_report(d: usize) -> Result<MarkerReport> {
    let monomials = enumerate_ehf(d)?;
    let evals = monomials
        .iter()
        .map(evaluate_monomial)
        .collect::<Result<Vec<_>>>()?;
    let mut unmarked = Vec::new();
    let mut peeling_ok = true;
    for e in 0..=d {
        let level: Vec<usize> = (0..monomials.len())
            .filter(|&x| monomials[x].energy() == e)
            .collect();
        unmarked.extend(
            level
                .iter()
                .filter(|&&x| !has_private_term(x, &evals, &level))
                .map(|&x| monomials[x].to_string()),
        );
        let mut rest = level;
        while !rest.is_empty() {
            match rest
                .iter()
                .position(|&x| has_private_term(x, &evals, &rest))
            {
                Some(p) => {
                    rest.remove(p);
                }
                None => {
                    peeling_ok = false;
                    break;
                }
            }
        }
    }
    Ok(MarkerReport {
        bound: d,
        unmarked,
        peeling_ok,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Gl1Report {
    #[serde(rename = "D")]
    pub bound: usize,
    /// Energies `s ≤ D` at which `Σ_{a+b=s} p(h_{-a}) p(h_{-b}) |0⟩ ≠ 0`.
    pub nonvanishing: Vec<usize>,
    /// Levels `a ≤ D` with `p(h_{-a}) |0⟩ = 0`.
    pub dead_currents: Vec<usize>,
}

impl Gl1Report {
    pub fn pass(&self) -> bool {
        self.nonvanishing.is_empty() && self.dead_currents.is_empty()
    }
}

/// The coefficient of `z^{s-2}` in `p(h(z))^2 |0⟩`.
pub fn gl1_square_coefficient(s: usize) -> Result<WedgeVector> {
    let mut total = WedgeVector::zero();
    for a in 1..s {
        let inner = gl1_current(s - a)?.apply(&WedgeVector::vacuum());
        total = total.add(&gl1_current(a)?.apply(&inner));
    }
    Ok(total)
}

pub fn gl1_relation_check(d: usize) -> Result<Gl1Report> {
    check_bound(d)?;
    let mut nonvanishing = Vec::new();
    let mut dead_currents = Vec::new();
    for s in 2..=d {
        if !gl1_square_coefficient(s)?.is_zero() {
            nonvanishing.push(s);
        }
    }
    for a in 1..=d {
        if gl1_current(a)?.apply(&WedgeVector::vacuum()).is_zero() {
            dead_currents.push(a);
        }
    }
    Ok(Gl1Report {
        bound: d,
        nonvanishing,
        dead_currents,
    })
}

/// All charge-zero basis wedges of energy `≤ d` in the `sl_2` grading.
pub fn basis_up_to_energy(d: usize) -> Vec<WedgeBasisElem> {
    let d = d as i64;
    // a particle-hole pair costs at least 1, and ε grows like index/2
    let top = 2 * d + 2;
    let positives: Vec<i64> = (1..=top).collect();
    let negatives: Vec<i64> = (-top..=0).rev().collect();
    let mut out = Vec::new();
    for size in 0..=(d as usize) {
        let cheapest = WedgeBasisElem {
            added: positives[..size].iter().copied().collect(),
            removed: negatives[..size].iter().copied().collect(),
        };
        if cheapest.energy(Grading::Sl2) > d {
            break;
        }
        let rems = subsets(&negatives, size);
        for a in subsets(&positives, size) {
            for r in &rems {
                let e = WedgeBasisElem {
                    added: a.iter().copied().collect(),
                    removed: r.iter().copied().collect(),
                };
                if e.energy(Grading::Sl2) <= d {
                    out.push(e);
                }
            }
        }
    }
    out.sort();
    out
}

fn subsets(items: &[i64], size: usize) -> Vec<Vec<i64>> {
    crate::exactlin::combinations(items.len(), size)
        .into_iter()
        .map(|c| c.into_iter().map(|i| items[i]).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn elem(added: &[i64], removed: &[i64]) -> WedgeBasisElem {
        WedgeBasisElem::new(
            added.iter().copied().collect(),
            removed.iter().copied().collect(),
        )
        .unwrap()
    }

    /// Finite model: decreasing occupied list on a window, with the sign of
    /// the permutation computed by bubble sort.
    fn finite_apply(occupied: &[i64], a: i64, b: i64) -> Option<(Vec<i64>, i64)> {
        if a == b || !occupied.contains(&b) || occupied.contains(&a) {
            return None;
        }
        let mut v: Vec<i64> = occupied
            .iter()
            .map(|&x| if x == b { a } else { x })
            .collect();
        let mut sign = 1;
        for i in 0..v.len() {
            for j in 0..v.len() - 1 - i {
                if v[j] < v[j + 1] {
                    v.swap(j, j + 1);
                    sign = -sign;
                }
            }
        }
        Some((v, sign))
    }

    #[test]
    fn unit_examples() {
        let vac = WedgeVector::vacuum();
        let w = apply_unit(1, 0, &vac);
        assert_eq!(w, WedgeVector::basis(elem(&[1], &[0])));
        assert!(apply_unit(1, 0, &w).is_zero());
        let w = apply_unit(2, -1, &vac);
        assert_eq!(w.coeff(&elem(&[2], &[-1])), -Rat::one());
        assert!(apply_unit(0, -1, &vac).is_zero());
        assert!(apply_unit(3, 2, &vac).is_zero());
    }

    #[test]
    fn units_match_finite_model() {
        let window: Vec<i64> = (-4..=4).collect();
        let states = basis_up_to_energy(6);
        let mut checked = 0;
        for s in states
            .iter()
            .filter(|s| s.added.iter().all(|&x| x <= 4) && s.removed.iter().all(|&x| x >= -4))
        {
            let occupied = s.occupied_from(-4);
            for &a in &window {
                for &b in &window {
                    let lhs = s.apply_unit(a, b);
                    let rhs = finite_apply(&occupied, a, b);
                    match (lhs, rhs) {
                        (None, None) => {}
                        (Some((e, sign)), Some((v, fsign))) => {
                            assert_eq!(e.occupied_from(-4), v);
                            assert_eq!(sign, fsign, "{s} a={a} b={b}");
                            checked += 1;
                        }
                        (l, r) => panic!("{s}: {a},{b}: {l:?} vs {r:?}"),
                    }
                }
            }
        }
        assert!(checked > 1000);
    }

    #[test]
    fn current_examples() {
        assert_eq!(
            projected_current(Family::F1, 1).unwrap().units(),
            &[(1, 0, 1)]
        );
        assert_eq!(
            projected_current(Family::F2, 1).unwrap().units(),
            &[(1, -1, 1), (2, 0, -1)]
        );
        assert_eq!(
            projected_current(Family::F3, 1).unwrap().units(),
            &[(2, -1, 1)]
        );
        assert!(projected_current(Family::F1, 0).is_err());
        for f in Family::ALL {
            for i in 1..=4 {
                let w = projected_current(f, i)
                    .unwrap()
                    .apply(&WedgeVector::vacuum());
                assert!(!w.is_zero());
                assert!(w.is_homogeneous(Grading::Sl2, i as i64));
            }
        }
    }

    #[test]
    fn currents_commute() {
        let vectors = basis_up_to_energy(6);
        let currents: Vec<AbelianCurrent> = Family::ALL
            .iter()
            .flat_map(|&f| (1..=4).map(move |i| projected_current(f, i).unwrap()))
            .collect();
        for x in &currents {
            for y in &currents {
                for e in &vectors {
                    let w = WedgeVector::basis(e.clone());
                    assert_eq!(x.apply(&y.apply(&w)), y.apply(&x.apply(&w)));
                }
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        let counts = ehf_counts(6).unwrap();
        assert_eq!(counts, vec![1, 3, 4, 7, 13, 19, 29]);
        let chars = character_coefficients(10);
        assert_eq!(&chars[..7], &[1, 3, 4, 7, 13, 19, 29]);
        let counts = ehf_counts(10).unwrap();
        assert_eq!(counts.iter().map(|&c| c as u64).collect::<Vec<_>>(), chars);
        let two: Vec<String> = enumerate_ehf(2)
            .unwrap()
            .iter()
            .filter(|m| m.energy() == 2)
            .map(|m| m.to_string())
            .collect();
        assert_eq!(two.len(), 4);
        assert!(two.contains(&"f_-1 e_-1".to_string()));
        assert!(enumerate_ehf(11).is_err());
        assert!(enumerate_ehf(4).unwrap().iter().all(|m| m.is_admissible()));
    }

    #[test]
    fn evaluation_examples() {
        let empty = EhfMonomial::new(vec![], vec![], vec![]).unwrap();
        assert_eq!(evaluate_monomial(&empty).unwrap(), WedgeVector::vacuum());
        let a1 = EhfMonomial::new(vec![1], vec![], vec![]).unwrap();
        assert_eq!(
            evaluate_monomial(&a1).unwrap(),
            apply_unit(1, 0, &WedgeVector::vacuum())
        );
        let letters = [(Family::F1, 1), (Family::F3, 1), (Family::F2, 3)];
        let base = evaluate_letters(&letters).unwrap();
        assert!(!base.is_zero());
        for perm in [[0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let l: Vec<_> = perm.iter().map(|&p| letters[p]).collect();
            assert_eq!(evaluate_letters(&l).unwrap(), base);
        }
    }

    #[test]
    fn independence_examples() {
        let r = independence_report(6).unwrap();
        assert!(r.pass());
        assert_eq!(r.levels[2].rank, 4);
        assert_eq!(r.levels[5].rank, 19);
    }

    #[test]
    fn markers() {
        let r = marker_report(6).unwrap();
        assert!(r.pass());
        // equal shifts (e_-i with f_-(i+1)) share all their terms with a neighbour
        let r = marker_report(5).unwrap();
        assert_eq!(
            r.unmarked,
            vec!["e_-1 f_-2", "e_-1 f_-4", "e_-2 f_-3", "f_-1 e_-4"]
        );
    }

    #[test]
    fn gl1_examples() {
        assert!(gl1_square_coefficient(2).unwrap().is_zero());
        assert!(gl1_square_coefficient(3).unwrap().is_zero());
        // at s = 4 the summands are nonzero and cancel
        let vac = WedgeVector::vacuum();
        let x = gl1_current(2)
            .unwrap()
            .apply(&gl1_current(2).unwrap().apply(&vac));
        assert!(!x.is_zero());
        assert!(gl1_square_coefficient(4).unwrap().is_zero());
        assert!(gl1_relation_check(8).unwrap().pass());
        for a in 1..=5 {
            let w = gl1_current(a).unwrap().apply(&vac);
            assert!(w.is_homogeneous(Grading::Gl1, a as i64));
        }
    }

    #[test]
    fn gradings() {
        assert_eq!(Grading::Sl2.eps(2), 1);
        assert_eq!(Grading::Sl2.eps(1), 1);
        assert_eq!(Grading::Sl2.eps(0), 0);
        assert_eq!(Grading::Sl2.eps(-1), 0);
        assert_eq!(Grading::Sl2.eps(-2), -1);
        assert_eq!(Grading::Sl2.eps(-3), -1);
        assert!(basis_up_to_energy(6)
            .iter()
            .all(|e| e.energy(Grading::Sl2) >= 0));
        assert_eq!(basis_up_to_energy(0), vec![WedgeBasisElem::vacuum()]);
    }
}
