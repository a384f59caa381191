//! Finite windows of `W ⊗ C[t, t^{-1}]` and the degenerate affine
//! Grassmannians they model: membership tests for `gl_n`, `sl_2`, `sp_{2n}`,
//! folding onto the loop quiver, open cells and their Jacobians, the flat
//! family over `ħ`, the torus relations, degenerate affine flags, and the
//! index map onto a level-one highest-weight line.
//!
//! A window `[lo, hi]` stands for the subspaces of `W ⊗ t^{lo}C[t]` that
//! contain `W ⊗ t^{hi+1}C[t]`; only the window part is stored. Basis vector
//! `w_j ⊗ t^i` has flat index `(i - lo)·n + j` with `j` zero-based.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::{rat, Rat, RatMatrix, Subspace};
use crate::loopmod::{hw_fixed_point, LoopSpace, TSubspace};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct WindowSpace {
    n: usize,
    lo: i64,
    hi: i64,
}

impl WindowSpace {
    pub fn new(n: usize, lo: i64, hi: i64) -> Result<Self> {
        if n == 0 || hi < lo {
            return Err(Error::InvalidParameters(format!(
                "window needs n >= 1 and lo <= hi, got n = {n}, [{lo}, {hi}]"
            )));
        }
        Ok(WindowSpace { n, lo, hi })
    }

    /// `S_{N,n}`: the window `[-N, N-1]`.
    pub fn standard(n: usize, depth: usize) -> Result<Self> {
        if depth == 0 {
            return Err(Error::InvalidParameters("N must be positive".into()));
        }
        Self::new(n, -(depth as i64), depth as i64 - 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn powers(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    pub fn dim(&self) -> usize {
        self.n * (self.hi - self.lo + 1) as usize
    }

    pub fn contains_power(&self, i: i64) -> bool {
        self.lo <= i && i <= self.hi
    }

    /// Flat index of `w_j ⊗ t^i`, `j` zero-based.
    pub fn index(&self, j: usize, i: i64) -> usize {
        debug_assert!(j < self.n && self.contains_power(i));
        (i - self.lo) as usize * self.n + j
    }

    /// Inverse of `index`.
    pub fn label(&self, idx: usize) -> (usize, i64) {
        (idx % self.n, self.lo + (idx / self.n) as i64)
    }

    pub fn basis_vector(&self, j: usize, i: i64) -> Vec<Rat> {
        crate::exactlin::unit(self.dim(), self.index(j, i))
    }

    /// Span of `W ⊗ t^i` over the powers selected by `keep`.
    pub fn power_part(&self, keep: impl Fn(i64) -> bool) -> Subspace {
        let idx: Vec<usize> = (0..self.dim()).filter(|&x| keep(self.label(x).1)).collect();
        Subspace::coordinate(self.dim(), &idx)
    }

    fn check_ambient(&self, u: &Subspace) -> Result<()> {
        if u.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: u.ambient_dim(),
            });
        }
        Ok(())
    }

    fn check_standard(&self) -> Result<usize> {
        if self.lo != -self.hi - 1 || self.hi < 0 {
            return Err(Error::WindowTooSmall(format!(
                "expected a window [-N, N-1], got [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(self.hi as usize + 1)
    }
}

/// `α_ħ ∘ t` on the window, `α_ħ` scaling `W ⊗ t^0` by `ħ`. The image of
/// `W ⊗ t^{hi}` leaves the window and lies in the implicit tail, so it is
/// dropped.
pub fn alpha_shift(space: &WindowSpace, hbar: &Rat) -> RatMatrix {
    let mut m = RatMatrix::zeros(space.dim(), space.dim());
    for i in space.lo..space.hi {
        let c = if i + 1 == 0 { hbar.clone() } else { Rat::one() };
        if c.is_zero() {
            continue;
        }
        for j in 0..space.n {
            m.set(space.index(j, i + 1), space.index(j, i), c.clone());
        }
    }
    m
}

/// `pr_{W⊗1} ∘ t` on `S_{N,n}`.
pub fn degenerate_shift(space: &WindowSpace) -> Result<RatMatrix> {
    space.check_standard()?;
    Ok(alpha_shift(space, &Rat::zero()))
}

/// `dim U = Nn` and `pr_{W⊗1} t U ⊆ U`.
pub fn membership_gl(u: &Subspace, n: usize, depth: usize) -> Result<bool> {
    let space = WindowSpace::standard(n, depth)?;
    space.check_ambient(u)?;
    Ok(u.dim() == n * depth && u.contains(&u.image(&degenerate_shift(&space)?)?)?)
}

/// Window index of `w_j ⊗ t^i` mapped to `u_j ⊗ t^{i+N}` (`i < 0`) or
/// `u_{j+n} ⊗ t^i` (`i ≥ 0`) in `C^{2n} ⊗ A_N`.
fn fold_index(space: &WindowSpace, loop_space: &LoopSpace, idx: usize) -> usize {
    let (j, i) = space.label(idx);
    let depth = loop_space.depth() as i64;
    if i < 0 {
        loop_space.index(j, (i + depth) as usize)
    } else {
        loop_space.index(j + space.n, i as usize)
    }
}

fn permute_columns(u: &Subspace, target_dim: usize, map: impl Fn(usize) -> usize) -> Subspace {
    let rows: Vec<Vec<Rat>> = u
        .basis_vectors()
        .into_iter()
        .map(|v| {
            let mut w = vec![Rat::zero(); target_dim];
            for (x, c) in v.into_iter().enumerate() {
                w[map(x)] = c;
            }
            w
        })
        .collect();
    Subspace::span(target_dim, &rows).expect("target dimension")
}

/// Relabel a point of `Gr^a_N(gl_n)` as a point of `X^(N)_{Nn,2n}`.
pub fn fold_to_loop(u: &Subspace, n: usize, depth: usize) -> Result<TSubspace> {
    if !membership_gl(u, n, depth)? {
        return Err(Error::NotInvariant);
    }
    let space = WindowSpace::standard(n, depth)?;
    let loop_space = LoopSpace::new(2 * n, depth)?;
    let folded = permute_columns(u, loop_space.dim(), |x| fold_index(&space, &loop_space, x));
    TSubspace::new(loop_space, folded)
}

/// Inverse of `fold_to_loop`.
pub fn unfold_from_loop(t: &TSubspace) -> Result<Subspace> {
    let loop_space = *t.space();
    if !loop_space.m().is_multiple_of(2) {
        return Err(Error::InvalidParameters(
            "folding needs an even number of rows".into(),
        ));
    }
    let space = WindowSpace::standard(loop_space.m() / 2, loop_space.depth())?;
    let mut inverse = vec![0; space.dim()];
    for x in 0..space.dim() {
        inverse[fold_index(&space, &loop_space, x)] = x;
    }
    Ok(permute_columns(t.subspace(), space.dim(), |y| inverse[y]))
}

/// Matrix of `fold_to_loop` on coordinates.
pub fn fold_matrix(n: usize, depth: usize) -> Result<RatMatrix> {
    let space = WindowSpace::standard(n, depth)?;
    let loop_space = LoopSpace::new(2 * n, depth)?;
    let mut p = RatMatrix::zeros(loop_space.dim(), space.dim());
    for x in 0..space.dim() {
        p.set(fold_index(&space, &loop_space, x), x, Rat::one());
    }
    Ok(p)
}

fn check_blocks(xs: &[RatMatrix], n: usize) -> Result<()> {
    for x in xs {
        if x.rows() != n || x.cols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: if x.rows() != n { x.rows() } else { x.cols() },
            });
        }
    }
    Ok(())
}

/// Span of `w_j ⊗ t^k + Σ_{i>k} x_i w_j ⊗ t^{k-i}`, `k < N`, with
/// `xs = (x_1, …, x_N)`.
pub fn open_cell_gl(xs: &[RatMatrix], n: usize, depth: usize) -> Result<Subspace> {
    if xs.len() != depth {
        return Err(Error::DimensionMismatch {
            expected: depth,
            found: xs.len(),
        });
    }
    check_blocks(xs, n)?;
    let space = WindowSpace::standard(n, depth)?;
    let mut rows = Vec::with_capacity(n * depth);
    for k in 0..depth as i64 {
        for j in 0..n {
            let mut v = space.basis_vector(j, k);
            for i in (k + 1)..=depth as i64 {
                let x = &xs[(i - 1) as usize];
                for a in 0..n {
                    v[space.index(a, k - i)] += x.get(a, j);
                }
            }
            rows.push(v);
        }
    }
    Subspace::span(space.dim(), &rows)
}

/// Minor of a basis on the columns `W ⊗ t^{≥0}`; nonzero exactly on the
/// cell transversal to `W ⊗ t^{<0}`.
pub fn big_cell_minor(u: &Subspace, space: &WindowSpace) -> Result<Rat> {
    space.check_ambient(u)?;
    let cols: Vec<usize> = (0..space.dim())
        .filter(|&x| space.label(x).1 >= 0)
        .collect();
    if cols.len() != u.dim() {
        return Ok(Rat::zero());
    }
    u.basis().select_cols(&cols).determinant()
}

/// Coordinates `C` of `U = rowspace [I | C]` in the chart over
/// `W ⊗ t^{≥0}`, flattened row-major; `None` off the chart.
pub fn chart_coordinates(u: &Subspace, space: &WindowSpace) -> Result<Option<Vec<Rat>>> {
    space.check_ambient(u)?;
    let p: Vec<usize> = (0..space.dim())
        .filter(|&x| space.label(x).1 >= 0)
        .collect();
    let q: Vec<usize> = (0..space.dim()).filter(|&x| space.label(x).1 < 0).collect();
    if p.len() != u.dim() {
        return Ok(None);
    }
    let m = u.basis().select_cols(&p);
    let Ok(inv) = m.inverse() else {
        return Ok(None);
    };
    Ok(Some(
        inv.mul(&u.basis().select_cols(&q))?.entries().to_vec(),
    ))
}

/// Rank of the differential at `theta` of `theta ↦ chart(f(theta))`.
/// Each directional derivative is the three-point formula at `s = 0, 1, 2`,
/// exact when the chart coordinates are at most quadratic along lines.
pub fn jacobian_rank(
    theta: &[Rat],
    space: &WindowSpace,
    f: impl Fn(&[Rat]) -> Result<Subspace>,
) -> Result<usize> {
    let chart = |t: &[Rat]| -> Result<Vec<Rat>> {
        chart_coordinates(&f(t)?, space)?
            .ok_or_else(|| Error::InvalidParameters("point is off the big cell".into()))
    };
    let c0 = chart(theta)?;
    let mut rows = Vec::with_capacity(theta.len());
    for p in 0..theta.len() {
        let mut t1 = theta.to_vec();
        t1[p] += Rat::one();
        let mut t2 = theta.to_vec();
        t2[p] += rat(2);
        let (c1, c2) = (chart(&t1)?, chart(&t2)?);
        let half = Rat::new(1.into(), 2.into());
        let d: Vec<Rat> = (0..c0.len())
            .map(|x| (&c1[x] * rat(4) - &c0[x] * rat(3) - &c2[x]) * &half)
            .collect();
        rows.push(d);
    }
    Ok(RatMatrix::from_rows_with_cols(rows, c0.len())?.rank())
}

fn blocks_from_params(theta: &[Rat], n: usize, depth: usize) -> Vec<RatMatrix> {
    (0..depth)
        .map(|l| RatMatrix::from_fn(n, n, |a, b| theta[l * n * n + a * n + b].clone()))
        .collect()
}

/// Jacobian rank of the `gl_n` open cell at `xs`; `N n^2` generically.
pub fn cell_jacobian_rank(xs: &[RatMatrix], n: usize, depth: usize) -> Result<usize> {
    check_blocks(xs, n)?;
    let theta: Vec<Rat> = xs.iter().flat_map(|x| x.entries().to_vec()).collect();
    let space = WindowSpace::standard(n, depth)?;
    jacobian_rank(&theta, &space, |t| {
        open_cell_gl(&blocks_from_params(t, n, depth), n, depth)
    })
}

/// Skew form on a window; `form[a][b] = <e_a, e_b>`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BilinearWindow {
    space: WindowSpace,
    form: RatMatrix,
}

impl BilinearWindow {
    /// `(w_1 ⊗ t^i, w_2 ⊗ t^j) = δ_{i+j,-1}`, on `S_{N,2}`.
    pub fn sl2(depth: usize) -> Result<Self> {
        let space = WindowSpace::standard(2, depth)?;
        let mut form = RatMatrix::zeros(space.dim(), space.dim());
        for i in space.powers() {
            let j = -1 - i;
            if space.contains_power(j) {
                form.set(space.index(0, i), space.index(1, j), Rat::one());
                form.set(space.index(1, j), space.index(0, i), -Rat::one());
            }
        }
        Ok(BilinearWindow { space, form })
    }

    /// `<v ⊗ t^i, w ⊗ t^j> = (v, w) δ_{i+j,-1}` on `S_{N,2n}`.
    pub fn symplectic(n: usize, depth: usize) -> Result<Self> {
        let space = WindowSpace::standard(2 * n, depth)?;
        let g = sp_gram(n);
        let mut form = RatMatrix::zeros(space.dim(), space.dim());
        for i in space.powers() {
            let j = -1 - i;
            for a in 0..2 * n {
                for b in 0..2 * n {
                    if !g.get(a, b).is_zero() {
                        form.set(space.index(a, i), space.index(b, j), g.get(a, b).clone());
                    }
                }
            }
        }
        Ok(BilinearWindow { space, form })
    }

    pub fn space(&self) -> &WindowSpace {
        &self.space
    }

    pub fn form(&self) -> &RatMatrix {
        &self.form
    }

    pub fn is_skew(&self) -> bool {
        self.form
            .add(&self.form.transpose())
            .map(|s| s.is_zero())
            .unwrap_or(false)
    }

    pub fn is_isotropic(&self, u: &Subspace) -> Result<bool> {
        self.space.check_ambient(u)?;
        let b = u.basis();
        Ok(b.mul(&self.form)?.mul(&b.transpose())?.is_zero())
    }
}

/// `(w_i, w_{2n+1-i}) = 1` for `i ≤ n`.
pub fn sp_gram(n: usize) -> RatMatrix {
    let mut g = RatMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        g.set(i, 2 * n - 1 - i, Rat::one());
        g.set(2 * n - 1 - i, i, -Rat::one());
    }
    g
}

/// `x^T G + G x = 0`.
pub fn is_in_sp(x: &RatMatrix, n: usize) -> bool {
    let g = sp_gram(n);
    x.rows() == 2 * n
        && x.cols() == 2 * n
        && x.transpose()
            .mul(&g)
            .and_then(|a| a.add(&g.mul(x)?))
            .map(|s| s.is_zero())
            .unwrap_or(false)
}

/// A basis of `sp_{2n}` in the chosen form; it has `2n^2 + n` elements.
pub fn sp_basis(n: usize) -> Vec<RatMatrix> {
    let d = 2 * n;
    let g = sp_gram(n);
    let mut cols = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut e = RatMatrix::zeros(d, d);
            e.set(a, b, Rat::one());
            let img = e
                .transpose()
                .mul(&g)
                .and_then(|x| x.add(&g.mul(&e)?))
                .expect("square");
            cols.push(img.entries().to_vec());
        }
    }
    let map = RatMatrix::from_rows_with_cols(cols, d * d)
        .expect("uniform")
        .transpose();
    map.kernel()
        .into_iter()
        .map(|v| RatMatrix::from_entries(d, d, v).expect("d*d entries"))
        .collect()
}

fn membership_with_form(u: &Subspace, form: &BilinearWindow) -> Result<bool> {
    let space = form.space();
    space.check_ambient(u)?;
    let depth = space.check_standard()?;
    let invariant = u.contains(&u.image(&degenerate_shift(space)?)?)?;
    Ok(u.dim() == space.n() * depth && invariant && form.is_isotropic(u)?)
}

/// `pr(tU) ⊆ U` and `U` isotropic for the `sl_2` form, in `S_{N,2}`.
pub fn membership_sl2(u: &Subspace, depth: usize) -> Result<bool> {
    membership_with_form(u, &BilinearWindow::sl2(depth)?)
}

/// `pr(tU) ⊆ U` and `U` isotropic for `<,>`, in `S_{N,2n}`.
pub fn membership_sp(u: &Subspace, n: usize, depth: usize) -> Result<bool> {
    membership_with_form(u, &BilinearWindow::symplectic(n, depth)?)
}

/// Span of the four families of the `sl_2` cell, truncated to depth `N`;
/// `x, y, z` hold the parameters with indices `1..=N`.
pub fn open_cell_sl2(x: &[Rat], y: &[Rat], z: &[Rat], depth: usize) -> Result<Subspace> {
    for p in [x, y, z] {
        if p.len() != depth {
            return Err(Error::DimensionMismatch {
                expected: depth,
                found: p.len(),
            });
        }
    }
    let space = WindowSpace::standard(2, depth)?;
    let param = |v: &[Rat], l: i64| -> Rat {
        if l >= 1 && l <= depth as i64 {
            v[(l - 1) as usize].clone()
        } else {
            Rat::zero()
        }
    };
    let mut rows = Vec::with_capacity(2 * depth);
    for k in 0..depth as i64 {
        let mut v1 = space.basis_vector(0, k);
        let mut v2 = space.basis_vector(1, k);
        for i in 1..=depth as i64 {
            v1[space.index(0, -i)] += param(y, k + i);
            v1[space.index(1, -i)] += param(z, k + i);
            v2[space.index(0, -i)] += param(x, k + i);
            v2[space.index(1, -i)] -= param(y, k + i);
        }
        rows.push(v1);
        rows.push(v2);
    }
    Subspace::span(space.dim(), &rows)
}

/// Jacobian rank of the `sl_2` cell; `3N` generically.
pub fn sl2_jacobian_rank(x: &[Rat], y: &[Rat], z: &[Rat], depth: usize) -> Result<usize> {
    let theta: Vec<Rat> = [x, y, z].concat();
    let space = WindowSpace::standard(2, depth)?;
    jacobian_rank(&theta, &space, |t| {
        open_cell_sl2(&t[..depth], &t[depth..2 * depth], &t[2 * depth..], depth)
    })
}

/// `Σ_l x_l ⊗ t^{-l}` acting by `w ⊗ t^j ↦ x w ⊗ t^{j-l}` when `j ≥ 0` and
/// `j - l < 0`, and by zero otherwise.
pub fn abelian_operator(space: &WindowSpace, xs: &[RatMatrix]) -> Result<RatMatrix> {
    check_blocks(xs, space.n)?;
    let mut op = RatMatrix::zeros(space.dim(), space.dim());
    for (l, x) in xs.iter().enumerate() {
        let l = l as i64 + 1;
        for j in 0..=space.hi {
            let target = j - l;
            if target >= 0 {
                continue;
            }
            if target < space.lo {
                return Err(Error::WindowTooSmall(format!(
                    "t^{target} is below the window [{}, {}]",
                    space.lo, space.hi
                )));
            }
            for a in 0..space.n {
                for b in 0..space.n {
                    let c = x.get(a, b);
                    if !c.is_zero() {
                        let (r, s) = (space.index(a, target), space.index(b, j));
                        let v = op.get(r, s) + c;
                        op.set(r, s, v);
                    }
                }
            }
        }
    }
    Ok(op)
}

/// `exp` of a nilpotent matrix as a finite sum.
pub fn exp_nilpotent(x: &RatMatrix) -> Result<RatMatrix> {
    let mut sum = RatMatrix::identity(x.rows());
    let mut term = RatMatrix::identity(x.rows());
    for k in 1..=x.rows() {
        term = term.mul(x)?.scale(&Rat::new(1.into(), (k as i64).into()));
        if term.is_zero() {
            return Ok(sum);
        }
        sum = sum.add(&term)?;
    }
    if term.is_zero() {
        Ok(sum)
    } else {
        Err(Error::InvalidParameters("matrix is not nilpotent".into()))
    }
}

/// `exp(Σ x_l ⊗ t^{-l})` applied to the base point `W ⊗ t^{≥0}`, with every
/// `x_l ∈ sp_{2n}`.
pub fn open_cell_sp(xs: &[RatMatrix], n: usize, depth: usize) -> Result<Subspace> {
    if xs.len() != depth {
        return Err(Error::DimensionMismatch {
            expected: depth,
            found: xs.len(),
        });
    }
    if xs.iter().any(|x| !is_in_sp(x, n)) {
        return Err(Error::NotSymplecticAlgebra);
    }
    let space = WindowSpace::standard(2 * n, depth)?;
    let g = exp_nilpotent(&abelian_operator(&space, xs)?)?;
    space.power_part(|i| i >= 0).image(&g)
}

/// `x_l = Σ_b c_{l,b} e_b` over `sp_basis(n)`.
pub fn sp_params_to_blocks(coeffs: &[Rat], n: usize, depth: usize) -> Result<Vec<RatMatrix>> {
    let basis = sp_basis(n);
    if coeffs.len() != depth * basis.len() {
        return Err(Error::DimensionMismatch {
            expected: depth * basis.len(),
            found: coeffs.len(),
        });
    }
    (0..depth)
        .map(|l| {
            let mut x = RatMatrix::zeros(2 * n, 2 * n);
            for (b, e) in basis.iter().enumerate() {
                x = x.add(&e.scale(&coeffs[l * basis.len() + b]))?;
            }
            Ok(x)
        })
        .collect()
}

/// Jacobian rank of the `sp_{2n}` cell in `sp_basis` coordinates;
/// `N (2n^2 + n)` generically.
pub fn sp_jacobian_rank(coeffs: &[Rat], n: usize, depth: usize) -> Result<usize> {
    let space = WindowSpace::standard(2 * n, depth)?;
    jacobian_rank(coeffs, &space, |t| {
        open_cell_sp(&sp_params_to_blocks(t, n, depth)?, n, depth)
    })
}

/// Coordinates `A_{k,i} ∈ End W`, `1 ≤ k ≤ K`, `0 ≤ i < K`, of the cell
/// around `W ⊗ C[t]`, together with `ħ`. Blocks outside the range are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellChart {
    n: usize,
    depth: usize,
    hbar: Rat,
    blocks: Vec<RatMatrix>,
}

impl CellChart {
    pub fn zero(n: usize, depth: usize, hbar: Rat) -> Self {
        CellChart {
            n,
            depth,
            hbar,
            blocks: vec![RatMatrix::zeros(n, n); depth * depth],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `K`.
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn hbar(&self) -> &Rat {
        &self.hbar
    }

    pub fn with_hbar(&self, hbar: Rat) -> Self {
        CellChart {
            hbar,
            ..self.clone()
        }
    }

    /// `A_{k,i}`; zero outside the stored range.
    pub fn get(&self, k: usize, i: usize) -> RatMatrix {
        if k >= 1 && k <= self.depth && i < self.depth {
            self.blocks[(k - 1) * self.depth + i].clone()
        } else {
            RatMatrix::zeros(self.n, self.n)
        }
    }

    pub fn set(&mut self, k: usize, i: usize, a: RatMatrix) -> Result<()> {
        if !(k >= 1 && k <= self.depth && i < self.depth) {
            return Err(Error::WindowTooSmall(format!(
                "A_({k},{i}) is outside 1 <= k <= {0}, 0 <= i < {0}",
                self.depth
            )));
        }
        check_blocks(std::slice::from_ref(&a), self.n)?;
        self.blocks[(k - 1) * self.depth + i] = a;
        Ok(())
    }

    /// `A_{k,i} ↦ s^{k+i} A_{k,i}`.
    pub fn rescaled(&self, s: &Rat) -> Self {
        let mut out = self.clone();
        for k in 1..=self.depth {
            for i in 0..self.depth {
                let mut f = Rat::one();
                for _ in 0..k + i {
                    f *= s;
                }
                out.blocks[(k - 1) * self.depth + i] = self.get(k, i).scale(&f);
            }
        }
        out
    }

    /// `A_{k,i}` depends only on `k + i` and vanishes for `k + i > K`.
    pub fn is_block_hankel(&self) -> bool {
        (1..=self.depth).all(|k| {
            (0..self.depth).all(|i| {
                let a = self.get(k, i);
                if k + i > self.depth {
                    a.is_zero()
                } else {
                    a == self.get(k + i, 0)
                }
            })
        })
    }

    /// The window `[-K-1, K+1]` used by `flat_membership`.
    pub fn window(&self) -> WindowSpace {
        let k = self.depth as i64;
        WindowSpace::new(self.n, -k - 1, k + 1).expect("n >= 1")
    }

    /// Span of `w ⊗ t^i + Σ_k A_{k,i} w ⊗ t^{-k}` for `i < K` together with
    /// `W ⊗ t^K` and `W ⊗ t^{K+1}`.
    pub fn subspace(&self, space: &WindowSpace) -> Result<Subspace> {
        let k_max = self.depth as i64;
        if space.n != self.n || space.lo > -k_max || space.hi < k_max {
            return Err(Error::WindowTooSmall(format!(
                "a depth-{k_max} chart needs powers -{k_max}..{k_max}, window is [{}, {}]",
                space.lo, space.hi
            )));
        }
        let mut rows = Vec::new();
        for i in 0..=space.hi {
            for j in 0..self.n {
                let mut v = space.basis_vector(j, i);
                if (i as usize) < self.depth {
                    for k in 1..=self.depth {
                        let a = self.get(k, i as usize);
                        for r in 0..self.n {
                            v[space.index(r, -(k as i64))] += a.get(r, j);
                        }
                    }
                }
                rows.push(v);
            }
        }
        Subspace::span(space.dim(), &rows)
    }
}

/// `α_ħ t U ⊆ U` for the subspace of the chart.
pub fn flat_membership(c: &CellChart) -> Result<bool> {
    let space = c.window();
    let u = c.subspace(&space)?;
    u.contains(&u.image(&alpha_shift(&space, &c.hbar))?)
}

/// `A_{k,i} = A_{k-1,i+1} + ħ A_{k-1,0} A_{1,i}` for `2 ≤ k ≤ K+1`,
/// `0 ≤ i < K`; blocks outside the chart are zero.
pub fn flat_equations_ok(c: &CellChart) -> Result<bool> {
    for k in 2..=c.depth + 1 {
        for i in 0..c.depth {
            let rhs = c
                .get(k - 1, i + 1)
                .add(&c.get(k - 1, 0).mul(&c.get(1, i))?.scale(&c.hbar))?;
            if c.get(k, i) != rhs {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Chart of a subspace of the window `[-K-1, K+1]` that is transversal to
/// `W ⊗ t^{<0}` and contains `W ⊗ t^{≥K}`; `None` otherwise.
pub fn chart_of_subspace(
    u: &Subspace,
    n: usize,
    depth: usize,
    hbar: Rat,
) -> Result<Option<CellChart>> {
    let mut chart = CellChart::zero(n, depth, hbar);
    let space = chart.window();
    let Some(c) = chart_coordinates(u, &space)? else {
        return Ok(None);
    };
    let neg = (-space.lo) as usize * n;
    let coeff = |j: usize, i: usize, r: usize, k: usize| -> Rat {
        // row (j, t^i) of [I | C]; column w_r ⊗ t^{-k}
        let row = i * n + j;
        let col = space.index(r, -(k as i64));
        c[row * neg + col].clone()
    };
    for i in 0..=(space.hi as usize) {
        for j in 0..n {
            for r in 0..n {
                if coeff(j, i, r, (-space.lo) as usize) != Rat::zero() {
                    return Ok(None);
                }
                for k in 1..=depth {
                    if i >= depth && !coeff(j, i, r, k).is_zero() {
                        return Ok(None);
                    }
                }
            }
        }
    }
    for k in 1..=depth {
        for i in 0..depth {
            let a = RatMatrix::from_fn(n, n, |r, j| coeff(j, i, r, k));
            chart.set(k, i, a)?;
        }
    }
    Ok(Some(chart))
}

/// A chart satisfying the `ħ`-equations. For `ħ = 0` a random block Hankel
/// chart; otherwise `U' = Π_j (1 + X_j t^{-j}) W[t]` with `X_j^2 = 0` and
/// `Σ j ≤ K` is `t`-invariant, and scaling `W ⊗ t^{≥0}` by `ħ` turns it
/// into a solution for `ħ`, i.e. `A = A'/ħ`.
pub fn random_flat_solution(
    n: usize,
    depth: usize,
    hbar: &Rat,
    rng: &mut ChaCha8Rng,
) -> Result<CellChart> {
    if hbar.is_zero() {
        let hs: Vec<RatMatrix> = (0..depth)
            .map(|_| RatMatrix::from_fn(n, n, |_, _| rat(rng.gen_range(-3..=3))))
            .collect();
        let mut c = CellChart::zero(n, depth, Rat::zero());
        for k in 1..=depth {
            for i in 0..depth {
                if k + i <= depth {
                    c.set(k, i, hs[k + i - 1].clone())?;
                }
            }
        }
        return Ok(c);
    }
    let space = CellChart::zero(n, depth, Rat::one()).window();
    let mut phi = RatMatrix::identity(space.dim());
    let mut budget = depth;
    while budget > 0 {
        let j = rng.gen_range(1..=budget);
        budget -= j;
        let x = random_square_zero(n, rng);
        let mut factor = RatMatrix::identity(space.dim());
        for i in space.powers() {
            if i - (j as i64) < space.lo {
                continue;
            }
            for a in 0..n {
                for b in 0..n {
                    let c = x.get(a, b);
                    if !c.is_zero() {
                        factor.set(space.index(a, i - j as i64), space.index(b, i), c.clone());
                    }
                }
            }
        }
        phi = phi.mul(&factor)?;
    }
    let base = space.power_part(|i| i >= 0);
    let u = base.image(&phi)?;
    let Some(chart) = chart_of_subspace(&u, n, depth, Rat::one())? else {
        return Err(Error::InvalidParameters(
            "constructed point left the chart".into(),
        ));
    };
    let inv = Rat::one() / hbar;
    let mut out = CellChart::zero(n, depth, hbar.clone());
    for k in 1..=depth {
        for i in 0..depth {
            out.set(k, i, chart.get(k, i).scale(&inv))?;
        }
    }
    Ok(out)
}

/// A random `n×n` matrix with `X^2 = 0`: `u v^T` with `v^T u = 0`.
fn random_square_zero(n: usize, rng: &mut ChaCha8Rng) -> RatMatrix {
    if n < 2 {
        return RatMatrix::zeros(n, n);
    }
    let u: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect();
    // v is orthogonal to u: rotate a random vector's first two slots
    let mut v: Vec<Rat> = (0..n).map(|_| rat(rng.gen_range(-2..=2))).collect();
    let dot: Rat = u.iter().zip(&v).map(|(a, b)| a * b).sum();
    if let Some(p) = u.iter().position(|a| !a.is_zero()) {
        v[p] = &v[p] - dot / &u[p];
    }
    RatMatrix::from_fn(n, n, |a, b| &u[a] * &v[b])
}

/// Perturb one random block entry by `±1`.
pub fn perturb_chart(c: &CellChart, rng: &mut ChaCha8Rng) -> CellChart {
    let mut out = c.clone();
    let k = rng.gen_range(1..=c.depth);
    let i = rng.gen_range(0..c.depth);
    let (a, b) = (rng.gen_range(0..c.n), rng.gen_range(0..c.n));
    let mut block = c.get(k, i);
    let delta = if rng.gen_bool(0.5) {
        Rat::one()
    } else {
        -Rat::one()
    };
    block.set(a, b, block.get(a, b) + delta);
    out.set(k, i, block).expect("index in range");
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusReport {
    #[serde(rename = "K")]
    pub depth: usize,
    pub variables: usize,
    pub equations: usize,
    /// Nullity of the exponent system.
    pub raw_nullity: usize,
    /// Whether simultaneous scaling of all basis vectors solves it.
    pub scalars_in_kernel: bool,
    /// Nullity modulo the scalars, which act trivially on subspaces.
    pub effective_dim: usize,
    /// Whether the loop rotation, Cartan and extra directions span the
    /// kernel together with the scalars.
    pub family_spans: bool,
}

/// Variables: `P_i` at `i + K`, `Q_i` at `2K + i + K`, for `-K ≤ i < K`.
fn torus_var(depth: usize, is_q: bool, i: i64) -> usize {
    let k = depth as i64;
    (i + k) as usize + if is_q { 2 * depth } else { 0 }
}

/// The relation chains on the exponents of the torus weights, one row per
/// equality between consecutive members of a chain.
pub fn torus_system(depth: usize) -> RatMatrix {
    let nvars = 4 * depth;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let term = |num: (bool, i64), den: (bool, i64)| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); nvars];
        v[torus_var(depth, num.0, num.1)] += Rat::one();
        v[torus_var(depth, den.0, den.1)] -= Rat::one();
        v
    };
    let mut chain = |members: Vec<Vec<Rat>>| {
        for w in members.windows(2) {
            rows.push(w[0].iter().zip(&w[1]).map(|(a, b)| a - b).collect());
        }
    };
    for k in 1..=depth as i64 {
        chain((0..k).map(|a| term((false, a), (true, a - k))).collect());
        let mut middle: Vec<Vec<Rat>> = (0..k).map(|a| term((true, a), (true, a - k))).collect();
        middle.extend((0..k).map(|a| term((false, a), (false, a - k))));
        chain(middle);
        chain((0..k).map(|a| term((true, a), (false, a - k))).collect());
    }
    RatMatrix::from_rows_with_cols(rows, nvars).expect("uniform width")
}

pub fn torus_solution_dim(depth: usize) -> Result<TorusReport> {
    if depth < 2 {
        return Err(Error::InvalidParameters("K must be at least 2".into()));
    }
    let sys = torus_system(depth);
    let nvars = 4 * depth;
    let raw_nullity = nvars - sys.rank();
    let solves = |v: &[Rat]| {
        sys.mul_vec(v)
            .map(|r| r.iter().all(Zero::is_zero))
            .unwrap_or(false)
    };
    let ones = vec![Rat::one(); nvars];
    let scalars_in_kernel = solves(&ones);
    let k = depth as i64;
    let direction = |f: &dyn Fn(bool, i64) -> i64| -> Vec<Rat> {
        let mut v = vec![Rat::zero(); nvars];
        for is_q in [false, true] {
            for i in -k..k {
                v[torus_var(depth, is_q, i)] = rat(f(is_q, i));
            }
        }
        v
    };
    let family = vec![
        direction(&|_, i| if i >= 0 { i } else { i + 1 }),
        direction(&|q, _| if q { 1 } else { 0 }),
        direction(&|q, _| if q { 0 } else { 1 }),
        direction(&|_, i| if i >= 0 { 1 } else { 0 }),
    ];
    let family_ok = family.iter().all(|v| solves(v));
    let span = RatMatrix::from_rows_with_cols(family, nvars)?.rank();
    Ok(TorusReport {
        depth,
        variables: nvars,
        equations: sys.rows(),
        raw_nullity,
        scalars_in_kernel,
        effective_dim: raw_nullity - usize::from(scalars_in_kernel),
        family_spans: family_ok && span == raw_nullity,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagReport {
    /// `pr_{w_{i+1} ⊗ t^{-1}} U_i ⊆ U_{i+1}` for `i = 0..n-1`.
    pub projections: Vec<bool>,
    /// `U_n = t^{-1} U_0` inside the window.
    pub periodic: bool,
    /// `pr_{W⊗1} t U_0 ⊆ U_0`.
    pub remark_check: bool,
    pub member: bool,
}

/// Membership of `(U_0, …, U_n)` in the degenerate affine flag variety of
/// `gl_n`, read in the given window.
pub fn flag_membership_gl(flag: &[Subspace], space: &WindowSpace) -> Result<FlagReport> {
    let n = space.n;
    if flag.len() != n + 1 {
        return Err(Error::InvalidFlag(format!(
            "expected {} subspaces, got {}",
            n + 1,
            flag.len()
        )));
    }
    for u in flag {
        space.check_ambient(u)?;
    }
    if let Some(i) = (0..=n).find(|&i| flag[i].dim() != flag[0].dim() + i) {
        return Err(Error::InvalidFlag(format!(
            "dim U_{i} = {} but dim U_0 + {i} = {}",
            flag[i].dim(),
            flag[0].dim() + i
        )));
    }
    if space.lo > -1 || space.hi < 0 {
        return Err(Error::WindowTooSmall(
            "window must contain t^-1 and t^0".into(),
        ));
    }
    if !space.power_part(|i| i > space.lo).contains(&flag[0])? {
        return Err(Error::WindowTooSmall(format!(
            "U_0 meets t^{}, so t^-1 U_0 leaves the window",
            space.lo
        )));
    }
    let projections = (0..n)
        .map(|i| {
            let mut pr = RatMatrix::identity(space.dim());
            let x = space.index(i, -1);
            pr.set(x, x, Rat::zero());
            flag[i + 1].contains(&flag[i].image(&pr)?)
        })
        .collect::<Result<Vec<bool>>>()?;
    let mut t_inv = RatMatrix::zeros(space.dim(), space.dim());
    for i in space.lo + 1..=space.hi {
        for j in 0..n {
            t_inv.set(space.index(j, i - 1), space.index(j, i), Rat::one());
        }
    }
    let shifted = flag[0]
        .image(&t_inv)?
        .sum(&space.power_part(|i| i == space.hi))?;
    let periodic = flag[n] == shifted;
    let remark_check = flag[0].contains(&flag[0].image(&alpha_shift(space, &Rat::zero()))?)?;
    let member = periodic && projections.iter().all(|&b| b);
    Ok(FlagReport {
        projections,
        periodic,
        remark_check,
        member,
    })
}

/// `U_i = W ⊗ t^{≥0} + span(w_1, …, w_i) ⊗ t^{-1}` in the window.
pub fn base_flag(space: &WindowSpace) -> Vec<Subspace> {
    (0..=space.n)
        .map(|i| {
            let mut idx: Vec<usize> = (0..space.dim())
                .filter(|&x| space.label(x).1 >= 0)
                .collect();
            idx.extend((0..i).map(|j| space.index(j, -1)));
            Subspace::coordinate(space.dim(), &idx)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IndexImage {
    /// One-based `i` of `e_i ⊗ t^j`.
    pub row: usize,
    pub power: usize,
    pub target_power: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SchubertReport {
    pub k: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub depth: usize,
    pub a: usize,
    pub b: usize,
    /// `j ↦ j + shift`.
    pub shift: i64,
    pub window: (i64, i64),
    pub images: Vec<IndexImage>,
    pub pattern_ok: bool,
}

/// `e_i ⊗ t^j ↦ w_i ⊗ t^{j-N+a}` with `k = ma + b`, and the check that the
/// highest-weight fixed point lands on `C^m ⊗ t^{0..a-1}` plus
/// `w_1, …, w_b ⊗ t^{-1}`.
pub fn schubert_index_map(k: usize, m: usize, depth: usize) -> Result<SchubertReport> {
    let hw = hw_fixed_point(k, m, depth)?;
    let (a, b) = (k / m, k % m);
    let shift = a as i64 - depth as i64;
    let target = WindowSpace::new(m, shift, shift + depth as i64 - 1)?;
    let loop_space = LoopSpace::new(m, depth)?;
    let images: Vec<IndexImage> = (0..depth)
        .flat_map(|j| {
            (0..m).map(move |i| IndexImage {
                row: i + 1,
                power: j,
                target_power: j as i64 + shift,
            })
        })
        .collect();
    let relabel = |x: usize| {
        let (i, j) = (x % m, x / m);
        target.index(i, j as i64 + shift)
    };
    debug_assert!((0..loop_space.dim()).all(|x| relabel(x) == x));
    let image = permute_columns(hw.subspace(), target.dim(), relabel);
    let mut expected: Vec<usize> = (0..target.dim())
        .filter(|&x| {
            let p = target.label(x).1;
            p >= 0 && p < a as i64
        })
        .collect();
    expected.extend((0..b).map(|i| target.index(i, -1)));
    let pattern_ok = image == Subspace::coordinate(target.dim(), &expected);
    Ok(SchubertReport {
        k,
        m,
        depth,
        a,
        b,
        shift,
        window: (target.lo, target.hi),
        images,
        pattern_ok,
    })
}

/// Random `n×n` integer blocks with entries in `[-3, 3]`.
pub fn random_blocks(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<RatMatrix> {
    (0..count)
        .map(|_| RatMatrix::from_fn(n, n, |_, _| rat(rng.gen_range(-3..=3))))
        .collect()
}

/// Random `sp_{2n}` elements as integer combinations of `sp_basis`.
pub fn random_sp_blocks(n: usize, count: usize, rng: &mut ChaCha8Rng) -> Vec<RatMatrix> {
    let basis = sp_basis(n);
    (0..count)
        .map(|_| {
            basis.iter().fold(RatMatrix::zeros(2 * n, 2 * n), |acc, e| {
                acc.add(&e.scale(&rat(rng.gen_range(-3..=3))))
                    .expect("same shape")
            })
        })
        .collect()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::framed::sample_orbit_generic;
    use crate::partitions::{enumerate, max_partition, Partition};

    fn ints(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn degenerate_shift_examples() {
        let s = WindowSpace::standard(1, 1).unwrap();
        assert!(degenerate_shift(&s).unwrap().is_zero());
        let s = WindowSpace::standard(1, 2).unwrap();
        let d = degenerate_shift(&s).unwrap();
        // basis t^-2, t^-1, t^0, t^1
        assert_eq!(
            d,
            RatMatrix::from_i64(&[&[0, 0, 0, 0], &[1, 0, 0, 0], &[0, 0, 0, 0], &[0, 0, 1, 0]])
        );
        for n in 1..4 {
            for depth in 1..4 {
                let s = WindowSpace::standard(n, depth).unwrap();
                let d = degenerate_shift(&s).unwrap();
                assert!(d.pow(depth).unwrap().is_zero());
                assert_eq!(d.rank(), 2 * n * (depth - 1));
            }
        }
        assert!(degenerate_shift(&WindowSpace::new(1, -1, 1).unwrap()).is_err());
    }

    #[test]
    fn membership_gl_examples() {
        let s = WindowSpace::standard(2, 2).unwrap();
        assert!(membership_gl(&s.power_part(|i| i >= 0), 2, 2).unwrap());
        assert!(membership_gl(&s.power_part(|i| i < 0), 2, 2).unwrap());
        let bad = Subspace::coordinate(
            8,
            &[s.index(0, -2), s.index(1, -2), s.index(0, 0), s.index(1, 0)],
        );
        assert!(!membership_gl(&bad, 2, 2).unwrap());
        assert!(!membership_gl(&s.power_part(|i| i >= 1), 2, 2).unwrap());
    }

    #[test]
    fn folding_examples() {
        for (n, depth) in [(1, 1), (1, 3), (2, 2), (3, 2)] {
            let s = WindowSpace::standard(n, depth).unwrap();
            let top = max_partition(n * depth, 2 * n, depth).unwrap();
            for u in [s.power_part(|i| i >= 0), s.power_part(|i| i < 0)] {
                assert_eq!(fold_to_loop(&u, n, depth).unwrap().classify(), top);
            }
            let p = fold_matrix(n, depth).unwrap();
            let lhs = LoopSpace::new(2 * n, depth)
                .unwrap()
                .shift_matrix()
                .mul(&p)
                .unwrap();
            let rhs = p.mul(&degenerate_shift(&s).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
        let s = WindowSpace::standard(1, 2).unwrap();
        assert!(fold_to_loop(
            &Subspace::coordinate(4, &[s.index(0, -2), s.index(0, 0)]),
            1,
            2
        )
        .is_err());
    }

    #[test]
    fn fold_round_trips() {
        let mut rng = seeded(5);
        for (n, depth) in [(1, 2), (2, 2), (2, 3)] {
            let types = enumerate(n * depth, 2 * n, depth).unwrap();
            for seed in 0..20 {
                let lam = &types[rng.gen_range(0..types.len())];
                let t = sample_orbit_generic(lam, 2 * n, depth, seed).unwrap();
                let u = unfold_from_loop(&t).unwrap();
                assert!(membership_gl(&u, n, depth).unwrap());
                assert_eq!(fold_to_loop(&u, n, depth).unwrap(), t);
            }
        }
    }

    #[test]
    fn open_cell_gl_examples() {
        let zero = vec![RatMatrix::zeros(2, 2); 2];
        let s = WindowSpace::standard(2, 2).unwrap();
        assert_eq!(open_cell_gl(&zero, 2, 2).unwrap(), s.power_part(|i| i >= 0));

        let s1 = WindowSpace::standard(1, 1).unwrap();
        let u = open_cell_gl(&[RatMatrix::from_i64(&[&[5]])], 1, 1).unwrap();
        assert_eq!(u, Subspace::span(2, &[ints(&[5, 1])]).unwrap());
        assert!(membership_gl(&u, 1, 1).unwrap());
        assert_eq!(
            cell_jacobian_rank(&[RatMatrix::from_i64(&[&[5]])], 1, 1).unwrap(),
            1
        );
        assert_eq!(s1.dim(), 2);

        let mut rng = seeded(1);
        for _ in 0..10 {
            let xs = random_blocks(2, 2, &mut rng);
            let u = open_cell_gl(&xs, 2, 2).unwrap();
            assert!(membership_gl(&u, 2, 2).unwrap());
            assert!(!big_cell_minor(&u, &s).unwrap().is_zero());
            assert_eq!(cell_jacobian_rank(&xs, 2, 2).unwrap(), 8);
            let xs = random_blocks(1, 3, &mut rng);
            assert_eq!(cell_jacobian_rank(&xs, 1, 3).unwrap(), 3);
        }
    }

    #[test]
    fn open_cells_fold_to_open_orbit() {
        let mut rng = seeded(2);
        for (n, depth) in [(1, 2), (2, 2), (2, 3), (1, 4)] {
            let top = max_partition(n * depth, 2 * n, depth).unwrap();
            for _ in 0..5 {
                let u = open_cell_gl(&random_blocks(n, depth, &mut rng), n, depth).unwrap();
                assert_eq!(fold_to_loop(&u, n, depth).unwrap().classify(), top);
            }
        }
    }

    #[test]
    fn forms_are_skew() {
        for depth in 1..4 {
            assert!(BilinearWindow::sl2(depth).unwrap().is_skew());
            assert_eq!(
                BilinearWindow::sl2(depth).unwrap(),
                BilinearWindow::symplectic(1, depth).unwrap()
            );
            for n in 1..3 {
                assert!(BilinearWindow::symplectic(n, depth).unwrap().is_skew());
            }
        }
    }

    #[test]
    fn sp_algebra() {
        for n in 1..=3 {
            let basis = sp_basis(n);
            assert_eq!(basis.len(), 2 * n * n + n);
            assert!(basis.iter().all(|x| is_in_sp(x, n)));
        }
        assert!(!is_in_sp(&RatMatrix::identity(2), 1));
        assert!(is_in_sp(&RatMatrix::from_i64(&[&[1, 2], &[3, -1]]), 1));
    }

    #[test]
    fn sl2_examples() {
        for depth in 1..=3 {
            let s = WindowSpace::standard(2, depth).unwrap();
            assert!(membership_sl2(&s.power_part(|i| i >= 0), depth).unwrap());
        }
        let mut rng = seeded(3);
        for depth in 1..=3 {
            for _ in 0..5 {
                let p: Vec<Vec<Rat>> = (0..3)
                    .map(|_| (0..depth).map(|_| rat(rng.gen_range(-3..=3))).collect())
                    .collect();
                let u = open_cell_sl2(&p[0], &p[1], &p[2], depth).unwrap();
                assert!(membership_sl2(&u, depth).unwrap());
                assert_eq!(
                    sl2_jacobian_rank(&p[0], &p[1], &p[2], depth).unwrap(),
                    3 * depth
                );
                // the same point through the sp route with x_l = [[y, x], [z, -y]]
                let xs: Vec<RatMatrix> = (0..depth)
                    .map(|l| {
                        RatMatrix::from_rows(vec![
                            vec![p[1][l].clone(), p[0][l].clone()],
                            vec![p[2][l].clone(), -p[1][l].clone()],
                        ])
                        .unwrap()
                    })
                    .collect();
                assert_eq!(open_cell_sp(&xs, 1, depth).unwrap(), u);
                assert_eq!(open_cell_gl(&xs, 2, depth).unwrap(), u);
            }
        }
        // invariant but not isotropic
        let s = WindowSpace::standard(2, 1).unwrap();
        let u = Subspace::coordinate(4, &[s.index(0, -1), s.index(1, 0)]);
        assert!(membership_gl(&u, 2, 1).unwrap());
        assert!(!membership_sl2(&u, 1).unwrap());
    }

    #[test]
    fn sp_examples() {
        for n in 1..=2 {
            let s = WindowSpace::standard(2 * n, 2).unwrap();
            let zero = vec![RatMatrix::zeros(2 * n, 2 * n); 2];
            let u = open_cell_sp(&zero, n, 2).unwrap();
            assert_eq!(u, s.power_part(|i| i >= 0));
            assert!(membership_sp(&u, n, 2).unwrap());
        }
        let mut rng = seeded(4);
        let xs = random_sp_blocks(2, 1, &mut rng);
        let u = open_cell_sp(&xs, 2, 1).unwrap();
        assert!(membership_sp(&u, 2, 1).unwrap());
        let coeffs: Vec<Rat> = (0..10).map(|_| rat(rng.gen_range(-3..=3))).collect();
        assert_eq!(sp_jacobian_rank(&coeffs, 2, 1).unwrap(), 10);
        assert_eq!(
            open_cell_sp(&[RatMatrix::identity(2)], 1, 1),
            Err(Error::NotSymplecticAlgebra)
        );
        // n = 1 agrees with sl2 on arbitrary subspaces of S_{N,2}
        for seed in 0..30 {
            let u = crate::pluecker::random_subspace(8, 4, seed);
            assert_eq!(
                membership_sp(&u, 1, 2).unwrap(),
                membership_sl2(&u, 2).unwrap()
            );
        }
    }

    #[test]
    fn flat_family_examples() {
        let mut rng = seeded(6);
        let h = random_flat_solution(2, 3, &Rat::zero(), &mut rng).unwrap();
        assert!(h.is_block_hankel());
        assert!(flat_membership(&h).unwrap());
        assert!(flat_equations_ok(&h).unwrap());

        let two_thirds = Rat::new(2.into(), 3.into());
        let c = random_flat_solution(2, 2, &two_thirds, &mut rng).unwrap();
        assert!(flat_membership(&c).unwrap());
        assert!(flat_equations_ok(&c).unwrap());
        // the K = 2 equations spelled out
        let a20 = c
            .get(1, 1)
            .add(&c.get(1, 0).mul(&c.get(1, 0)).unwrap().scale(&two_thirds))
            .unwrap();
        assert_eq!(c.get(2, 0), a20);
        let a21 = c.get(1, 0).mul(&c.get(1, 1)).unwrap().scale(&two_thirds);
        assert_eq!(c.get(2, 1), a21);

        let bad = perturb_chart(&h, &mut rng);
        assert!(!flat_membership(&bad).unwrap());
        assert!(!flat_equations_ok(&bad).unwrap());
    }

    #[test]
    fn flat_predicates_agree_exhaustively_for_gl1() {
        let vals = [-1, 0, 1];
        for hbar in [rat(0), rat(1), Rat::new(2.into(), 3.into()), rat(-2)] {
            let mut solutions = 0;
            for code in 0..81 {
                let mut c = CellChart::zero(1, 2, hbar.clone());
                let mut x = code;
                for (k, i) in [(1, 0), (1, 1), (2, 0), (2, 1)] {
                    c.set(k, i, RatMatrix::from_i64(&[&[vals[x % 3]]])).unwrap();
                    x /= 3;
                }
                let a = flat_membership(&c).unwrap();
                assert_eq!(a, flat_equations_ok(&c).unwrap());
                if hbar.is_zero() {
                    assert_eq!(a, c.is_block_hankel());
                }
                solutions += usize::from(a);
            }
            // block Hankel for ħ = 0: A_{1,0} free, A_{1,1} = A_{2,0}, A_{2,1} = 0
            assert_eq!(solutions, if hbar.is_zero() { 9 } else { 1 });
        }
    }

    #[test]
    fn flat_equations_are_homogeneous() {
        let mut rng = seeded(7);
        for hbar in [rat(0), rat(1), Rat::new(2.into(), 3.into()), rat(-2)] {
            for depth in 2..=4 {
                let c = random_flat_solution(2, depth, &hbar, &mut rng).unwrap();
                let r = c.rescaled(&rat(2));
                assert!(flat_equations_ok(&r).unwrap());
                assert!(flat_membership(&r).unwrap());
            }
        }
    }

    #[test]
    fn torus_examples() {
        for k in [2, 4, 6] {
            let r = torus_solution_dim(k).unwrap();
            assert_eq!(r.raw_nullity, 4);
            assert!(r.scalars_in_kernel);
            assert_eq!(r.effective_dim, 3);
            assert!(r.family_spans);
        }
        assert!(torus_solution_dim(1).is_err());
    }

    #[test]
    fn base_flag_and_violations() {
        for (n, lo, hi) in [(1, -2, 1), (2, -2, 1), (3, -2, 2)] {
            let s = WindowSpace::new(n, lo, hi).unwrap();
            let f = base_flag(&s);
            let r = flag_membership_gl(&f, &s).unwrap();
            assert!(r.member && r.remark_check);
        }
        let s = WindowSpace::new(2, -2, 1).unwrap();
        let u = s.power_part(|i| i >= 0);
        assert!(matches!(
            flag_membership_gl(&[u.clone(), u.clone(), u], &s),
            Err(Error::InvalidFlag(_))
        ));
        let mut f = base_flag(&s);
        f[1] = Subspace::coordinate(
            s.dim(),
            &[
                s.index(0, 0),
                s.index(1, 0),
                s.index(0, 1),
                s.index(1, 1),
                s.index(0, -2),
            ],
        );
        let r = flag_membership_gl(&f, &s).unwrap();
        assert!(!r.member);
        assert_eq!(r.projections, vec![true, false]);
        let low = Subspace::coordinate(
            s.dim(),
            &[s.index(0, -2), s.index(1, 0), s.index(0, 1), s.index(1, 1)],
        );
        let mut f = base_flag(&s);
        f[0] = low;
        assert!(matches!(
            flag_membership_gl(&f, &s),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn coordinate_flags_satisfy_the_remark() {
        // every torus-fixed flag in the window [-2, 1] for n = 2
        let s = WindowSpace::new(2, -2, 1).unwrap();
        let d = s.dim();
        let mut members = 0;
        for c0 in crate::exactlin::combinations(d, 4) {
            let u0 = Subspace::coordinate(d, &c0);
            for c1 in crate::exactlin::combinations(d, 5) {
                let u1 = Subspace::coordinate(d, &c1);
                let mut t_inv = RatMatrix::zeros(d, d);
                for i in s.lo() + 1..=s.hi() {
                    for j in 0..2 {
                        t_inv.set(s.index(j, i - 1), s.index(j, i), Rat::one());
                    }
                }
                let u2 = u0
                    .image(&t_inv)
                    .unwrap()
                    .sum(&s.power_part(|i| i == 1))
                    .unwrap();
                if u2.dim() != 6 {
                    continue;
                }
                let Ok(r) = flag_membership_gl(&[u0.clone(), u1, u2], &s) else {
                    continue;
                };
                if r.member {
                    members += 1;
                    assert!(r.remark_check);
                    assert!(membership_gl(&u0, 2, 2).unwrap());
                }
            }
        }
        assert!(members > 1);
    }

    #[test]
    fn schubert_examples() {
        let r = schubert_index_map(3, 2, 2).unwrap();
        assert_eq!((r.a, r.b, r.shift), (1, 1, -1));
        assert!(r.pattern_ok);
        for (m, depth) in [(2, 2), (3, 2), (1, 4)] {
            let r = schubert_index_map(m * depth, m, depth).unwrap();
            assert_eq!((r.a, r.b, r.shift), (depth, 0, 0));
            assert!(r.pattern_ok);
        }
        let r = schubert_index_map(1, 2, 1).unwrap();
        assert_eq!((r.a, r.b, r.shift), (0, 1, -1));
        assert_eq!(r.window, (-1, -1));
        assert!(r.pattern_ok);
        assert_eq!(r.images.len(), 2);
        for m in 1..=4 {
            for depth in 1..=3 {
                for k in 0..=m * depth {
                    assert!(schubert_index_map(k, m, depth).unwrap().pattern_ok);
                }
            }
        }
        assert!(schubert_index_map(5, 2, 2).is_err());
        let _ = Partition::new(vec![1]).unwrap();
    }
}
