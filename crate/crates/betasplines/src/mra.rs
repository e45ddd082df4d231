//! Finite-window multiresolution transform: project onto a scaling space,
//! split one scale into coarse plus detail, reconstruct by exact
//! substitution of two-scale tables, and estimate Riesz frame bounds on
//! growing windows.
//!
//! Scale `j` uses the basis `b_k(theta^j x)`, so larger `j` means finer;
//! coefficient labels carry the scale while all geometry is computed on the
//! sequence's own grid, which the transform's scale covariance makes
//! sufficient. Windows are index ranges `(lo, hi)` into the node sequence;
//! the region they control is `[node(lo), node(hi)]`, functions are treated
//! as zero outside it, and decomposition keeps basis members whose support
//! crosses a window boundary but flags their coefficients untrusted.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::haar::{haar_system, HaarVariant};
use crate::linalg;
use crate::quadfield::QuadRat;
use crate::refine::{find_node, refine_general, refine_linear, scaling_equation_at};
use crate::spline::{bspline, scaling_classes, PiecewisePoly};
use crate::tiling::{word_string, Letter, NodeSequence};
use crate::wavelet::{mother_wavelets, MotherWavelet};

/// Numeric representation declared by a coefficient vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NumericMode {
    Exact,
    Float,
}

/// One coefficient in either representation.
#[derive(Debug, Clone, PartialEq)]
pub enum Coefficient {
    Exact(QuadRat),
    Float(f64),
}

impl Coefficient {
    pub fn mode(&self) -> NumericMode {
        match self {
            Coefficient::Exact(_) => NumericMode::Exact,
            Coefficient::Float(_) => NumericMode::Float,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Coefficient::Exact(q) => q.to_f64(),
            Coefficient::Float(v) => *v,
        }
    }

    pub fn exact(&self) -> Option<&QuadRat> {
        match self {
            Coefficient::Exact(q) => Some(q),
            Coefficient::Float(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Exact(q) => q.is_zero(),
            Coefficient::Float(v) => *v == 0.0,
        }
    }
}

/// Which family of basis functions a coefficient vector references.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    Scaling,
    Wavelet,
}

/// A single basis coefficient: the basis member is named by its word and the
/// node index anchoring its support at the vector's own scale.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientEntry {
    pub word: Vec<Letter>,
    pub index: i64,
    /// Node value at `index`, kept alongside for export convenience.
    pub position: QuadRat,
    pub value: Coefficient,
    /// Cleared when the member's support is clipped by the analysis window,
    /// so the value depends on the zero-extension boundary policy.
    pub trusted: bool,
}

/// Coefficients of a function over one scale's basis, restricted to an
/// analysis window. Entries reference only basis members whose support
/// meets the window; builders in this module guarantee that and the
/// constructor checks what it can without the sequence geometry.
#[derive(Debug, Clone)]
pub struct CoefficientVector {
    pub scale: i64,
    /// Spline order `s` of the underlying multiresolution.
    pub order: usize,
    pub kind: BasisKind,
    /// Node index range of the analysis window.
    pub window: (i64, i64),
    pub mode: NumericMode,
    pub entries: Vec<CoefficientEntry>,
}

impl CoefficientVector {
    pub fn new(
        scale: i64,
        order: usize,
        kind: BasisKind,
        window: (i64, i64),
        mode: NumericMode,
        mut entries: Vec<CoefficientEntry>,
    ) -> Result<CoefficientVector> {
        if order == 0 {
            return Err(Error::InvalidArgument("order must be at least one".into()));
        }
        if window.0 >= window.1 {
            return Err(Error::InvalidArgument(format!(
                "window ({}, {}) is empty",
                window.0, window.1
            )));
        }
        for entry in &entries {
            if entry.value.mode() != mode {
                return Err(Error::InvalidArgument(
                    "entry representation disagrees with the declared numeric mode".into(),
                ));
            }
            if kind == BasisKind::Scaling && entry.word.len() != order {
                return Err(Error::InvalidArgument(format!(
                    "scaling entry word {} does not have length {order}",
                    word_string(&entry.word)
                )));
            }
        }
        entries.sort_by_key(|e| e.index);
        if entries.windows(2).any(|w| w[0].index == w[1].index) {
            return Err(Error::InvalidArgument(
                "two entries reference the same basis index".into(),
            ));
        }
        Ok(CoefficientVector {
            scale,
            order,
            kind,
            window,
            mode,
            entries,
        })
    }

    pub fn value_at(&self, index: i64) -> Option<&Coefficient> {
        self.entries
            .iter()
            .find(|e| e.index == index)
            .map(|e| &e.value)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }
}

/// Conditioning summary attached to every projection.
#[derive(Debug, Clone)]
pub struct ProjectionReport {
    pub basis_size: usize,
    /// Ratio of extreme Gram eigenvalues; infinite when the float Gram is
    /// numerically singular.
    pub condition: f64,
    pub ill_conditioned: bool,
}

fn check_theta(seq: &NodeSequence, theta: &QuadRat) -> Result<()> {
    if theta.field() != seq.field() {
        return Err(Error::FieldMismatch);
    }
    if (theta - &QuadRat::one(seq.field())).sign() <= 0 {
        return Err(Error::ParameterOutOfRange(
            "the inflation factor must exceed one".into(),
        ));
    }
    Ok(())
}

fn theta_pow(theta: &QuadRat, j: i64) -> Result<QuadRat> {
    let field = theta.field();
    let base = if j >= 0 { theta.clone() } else { theta.inv()? };
    let mut out = QuadRat::one(field);
    for _ in 0..j.unsigned_abs() {
        out = &out * &base;
    }
    Ok(out)
}

fn check_window(seq: &NodeSequence, window: (i64, i64)) -> Result<()> {
    let (lo, hi) = seq.index_range();
    if window.0 >= window.1 {
        return Err(Error::InvalidArgument(format!(
            "window ({}, {}) is empty",
            window.0, window.1
        )));
    }
    if window.0 < lo || window.1 > hi {
        return Err(Error::SequenceTooShort(format!(
            "window ({}, {}) exceeds the generated index range ({lo}, {hi})",
            window.0, window.1
        )));
    }
    Ok(())
}

/// Shifts `p(t)` to `p(t + delta)` by Taylor expansion.
fn poly_shift(p: &[QuadRat], delta: &QuadRat, field: crate::quadfield::FieldSpec) -> Vec<QuadRat> {
    if p.is_empty() || delta.is_zero() {
        return p.to_vec();
    }
    let n = p.len();
    let mut out = vec![QuadRat::zero(field); n];
    let mut powers = vec![QuadRat::one(field)];
    for _ in 1..n {
        let next = powers.last().expect("nonempty") * delta;
        powers.push(next);
    }
    for (m, slot) in out.iter_mut().enumerate() {
        let mut acc = QuadRat::zero(field);
        let mut coeff = QuadRat::one(field);
        for k in m..n {
            if k > m {
                let num = QuadRat::from_int(field, k as i64);
                let den = QuadRat::from_int(field, (k - m) as i64);
                coeff = &(&coeff * &num) / &den;
            }
            let term = &(&coeff * &p[k]) * &powers[k - m];
            acc = &acc + &term;
        }
        *slot = acc;
    }
    out
}

/// The function multiplied by the window indicator, re-expressed as a
/// piecewise polynomial on the clipped breakpoint grid.
fn restrict(f: &PiecewisePoly, lo: &QuadRat, hi: &QuadRat) -> Option<PiecewisePoly> {
    let field = f.field();
    let (sup_lo, sup_hi) = f.support();
    let a = if sup_lo.total_cmp(lo).is_lt() { lo } else { sup_lo };
    let b = if sup_hi.total_cmp(hi).is_gt() { hi } else { sup_hi };
    if (b - a).sign() <= 0 {
        return None;
    }
    let mut bps = vec![a.clone()];
    for bp in f.breakpoints() {
        if bp.total_cmp(a).is_gt() && bp.total_cmp(b).is_lt() {
            bps.push(bp.clone());
        }
    }
    bps.push(b.clone());
    let mut pieces = Vec::with_capacity(bps.len() - 1);
    for u in &bps[..bps.len() - 1] {
        let i = f
            .breakpoints()
            .iter()
            .rposition(|bp| bp.total_cmp(u).is_le())
            .expect("u lies inside the support");
        let i = i.min(f.num_pieces() - 1);
        let delta = u - &f.breakpoints()[i];
        pieces.push(poly_shift(f.piece(i), &delta, field));
    }
    Some(PiecewisePoly::new(field, bps, pieces).expect("clipped grid is valid"))
}

/// The scale-`j` basis functions over the window, as `(index, function)`.
fn scale_basis(
    seq: &NodeSequence,
    theta: &QuadRat,
    s: usize,
    scale: i64,
    window: (i64, i64),
) -> Result<Vec<(i64, PiecewisePoly)>> {
    check_window(seq, window)?;
    if window.1 - window.0 < s as i64 {
        return Err(Error::WindowTooSmall(format!(
            "window of {} gaps cannot hold an order-{s} basis function",
            window.1 - window.0
        )));
    }
    let factor = theta_pow(theta, scale)?;
    let zero = QuadRat::zero(seq.field());
    let mut out = Vec::new();
    for k in window.0..=(window.1 - s as i64) {
        let b = bspline(seq, k, s)?;
        let f = if scale == 0 {
            b
        } else {
            b.precompose_scale_shift(&factor, &zero)?
        };
        out.push((k, f));
    }
    Ok(out)
}

fn gram_exact(functions: &[&PiecewisePoly]) -> Result<Vec<Vec<QuadRat>>> {
    let n = functions.len();
    let field = functions
        .first()
        .map(|f| f.field())
        .ok_or_else(|| Error::InvalidArgument("empty basis".into()))?;
    let mut g = vec![vec![QuadRat::zero(field); n]; n];
    for i in 0..n {
        for j in i..n {
            let (ilo, ihi) = functions[i].support();
            let (jlo, jhi) = functions[j].support();
            let overlap = (ihi - jlo).sign() > 0 && (jhi - ilo).sign() > 0;
            let v = if overlap {
                functions[i].inner_product(functions[j])?
            } else {
                QuadRat::zero(field)
            };
            g[i][j] = v.clone();
            g[j][i] = v;
        }
    }
    Ok(g)
}

fn gram_condition(g: &[Vec<QuadRat>]) -> Result<(f64, bool)> {
    let gf: Vec<Vec<f64>> = g
        .iter()
        .map(|row| row.iter().map(QuadRat::to_f64).collect())
        .collect();
    let eigs = linalg::symmetric_eigenvalues(gf)?;
    let min = eigs.first().copied().unwrap_or(0.0);
    let max = eigs.last().copied().unwrap_or(0.0);
    let condition = if min > 0.0 { max / min } else { f64::INFINITY };
    Ok((condition, !(condition.is_finite() && condition <= 1e12)))
}

/// L2 projection of a piecewise polynomial onto the scale-`scale` scaling
/// basis over the window, with the numeric mode chosen by the caller.
pub fn project(
    f: &PiecewisePoly,
    seq: &NodeSequence,
    theta: &QuadRat,
    s: usize,
    scale: i64,
    window: (i64, i64),
    mode: NumericMode,
) -> Result<(CoefficientVector, ProjectionReport)> {
    check_theta(seq, theta)?;
    if f.field() != seq.field() {
        return Err(Error::FieldMismatch);
    }
    let basis = scale_basis(seq, theta, s, scale, window)?;
    let functions: Vec<&PiecewisePoly> = basis.iter().map(|(_, f)| f).collect();
    let g = gram_exact(&functions)?;
    let mut rhs = Vec::with_capacity(basis.len());
    for (_, b) in &basis {
        rhs.push(f.inner_product(b)?);
    }
    let (condition, ill_conditioned) = gram_condition(&g)?;
    let report = ProjectionReport {
        basis_size: basis.len(),
        condition,
        ill_conditioned,
    };
    let mut entries = Vec::new();
    match mode {
        NumericMode::Exact => {
            let x = linalg::solve_square(&g, &rhs)?;
            for ((k, _), v) in basis.iter().zip(x) {
                if v.is_zero() {
                    continue;
                }
                entries.push(CoefficientEntry {
                    word: seq.word(*k, s)?,
                    index: *k,
                    position: seq.node(*k).clone(),
                    value: Coefficient::Exact(v),
                    trusted: true,
                });
            }
        }
        NumericMode::Float => {
            let gf: Vec<Vec<f64>> = g
                .iter()
                .map(|row| row.iter().map(QuadRat::to_f64).collect())
                .collect();
            let rf: Vec<f64> = rhs.iter().map(QuadRat::to_f64).collect();
            let x = linalg::solve_square_f64(&gf, &rf)?;
            for ((k, _), v) in basis.iter().zip(x) {
                entries.push(CoefficientEntry {
                    word: seq.word(*k, s)?,
                    index: *k,
                    position: seq.node(*k).clone(),
                    value: Coefficient::Float(v),
                    trusted: true,
                });
            }
        }
    }
    let vector = CoefficientVector::new(scale, s, BasisKind::Scaling, window, mode, entries)?;
    Ok((vector, report))
}

struct FloatPoly {
    bps: Vec<f64>,
    pieces: Vec<Vec<f64>>,
}

impl FloatPoly {
    fn of(f: &PiecewisePoly) -> FloatPoly {
        FloatPoly {
            bps: f.breakpoints().iter().map(QuadRat::to_f64).collect(),
            pieces: (0..f.num_pieces())
                .map(|i| f.piece(i).iter().map(QuadRat::to_f64).collect())
                .collect(),
        }
    }

    fn eval(&self, x: f64) -> f64 {
        if x < self.bps[0] || x >= *self.bps.last().expect("nonempty") {
            return 0.0;
        }
        let i = match self.bps.partition_point(|bp| *bp <= x) {
            0 => 0,
            p => (p - 1).min(self.pieces.len() - 1),
        };
        let t = x - self.bps[i];
        self.pieces[i].iter().rev().fold(0.0, |acc, c| acc * t + c)
    }
}

/// Least-squares fit of sampled data `(x, y)` in the scale-`scale` basis:
/// inner products against the samples use the trapezoid rule, the Gram
/// matrix is computed exactly and then rounded. Samples must be sorted by
/// `x` and at least as numerous as the basis.
pub fn project_samples(
    samples: &[(f64, f64)],
    seq: &NodeSequence,
    theta: &QuadRat,
    s: usize,
    scale: i64,
    window: (i64, i64),
) -> Result<(CoefficientVector, ProjectionReport)> {
    check_theta(seq, theta)?;
    let basis = scale_basis(seq, theta, s, scale, window)?;
    if samples.len() < basis.len() {
        return Err(Error::InvalidArgument(format!(
            "{} samples cannot determine {} basis coefficients",
            samples.len(),
            basis.len()
        )));
    }
    if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::InvalidArgument(
            "samples must be sorted by strictly increasing x".into(),
        ));
    }
    let functions: Vec<&PiecewisePoly> = basis.iter().map(|(_, f)| f).collect();
    let g = gram_exact(&functions)?;
    let gf: Vec<Vec<f64>> = g
        .iter()
        .map(|row| row.iter().map(QuadRat::to_f64).collect())
        .collect();
    let mut rhs = vec![0.0; basis.len()];
    for (slot, (_, b)) in rhs.iter_mut().zip(&basis) {
        let fp = FloatPoly::of(b);
        let mut acc = 0.0;
        for pair in samples.windows(2) {
            let (x0, y0) = pair[0];
            let (x1, y1) = pair[1];
            acc += 0.5 * (y0 * fp.eval(x0) + y1 * fp.eval(x1)) * (x1 - x0);
        }
        *slot = acc;
    }
    let (condition, ill_conditioned) = gram_condition(&g)?;
    let report = ProjectionReport {
        basis_size: basis.len(),
        condition,
        ill_conditioned,
    };
    let x = linalg::solve_square_f64(&gf, &rhs)?;
    let mut entries = Vec::new();
    for ((k, _), v) in basis.iter().zip(x) {
        entries.push(CoefficientEntry {
            word: seq.word(*k, s)?,
            index: *k,
            position: seq.node(*k).clone(),
            value: Coefficient::Float(v),
            trusted: true,
        });
    }
    let vector = CoefficientVector::new(scale, s, BasisKind::Scaling, window, NumericMode::Float, entries)?;
    Ok((vector, report))
}

/// Node indices where a translate of the mother wavelet is admissible: the
/// support word matches and the interior `theta * Lambda` pattern agrees
/// with the seed's, so the placed profile keeps its zeros on the coarse set
/// and stays orthogonal to the coarse space.
pub fn wavelet_occurrences(
    seq: &NodeSequence,
    theta: &QuadRat,
    wavelet: &MotherWavelet,
) -> Result<Vec<i64>> {
    check_theta(seq, theta)?;
    let plan = &wavelet.plan;
    let wlen = plan.big_n as i64;
    let (llo, lhi) = seq.letter_range();
    let mut out = Vec::new();
    'occurrences: for o in llo..=(lhi - wlen + 1) {
        if seq.word(o, plan.big_n)? != plan.word {
            continue;
        }
        for i in 1..wlen {
            let expected = plan.theta_points_inside.contains(&(plan.n + i));
            if seq.in_theta_lambda(seq.node(o + i), theta)? != expected {
                continue 'occurrences;
            }
        }
        out.push(o);
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum MemberKind {
    Coarse,
    Wavelet,
}

struct Member {
    kind: MemberKind,
    word: Vec<Letter>,
    index: i64,
    function: PiecewisePoly,
    trusted: bool,
}

/// Every coarse scaling function and admissible wavelet translate whose
/// support meets the open window, coarse members first.
fn decomposition_members(
    seq: &NodeSequence,
    theta: &QuadRat,
    s: usize,
    window: (i64, i64),
) -> Result<Vec<Member>> {
    let field = seq.field();
    let (seq_lo, seq_hi) = seq.index_range();
    let win_lo = seq.node(window.0).clone();
    let win_hi = seq.node(window.1).clone();
    let zero = QuadRat::zero(field);
    let inv_theta = theta.inv()?;

    let mut members = Vec::new();
    let span_check = |lo: &QuadRat, hi: &QuadRat, label: &str| -> Result<bool> {
        if (hi - &win_lo).sign() <= 0 || (lo - &win_hi).sign() >= 0 {
            return Ok(false);
        }
        if (lo - &win_lo).sign() < 0 && (hi - &win_hi).sign() > 0 {
            return Err(Error::WindowTooSmall(format!(
                "{label} spans the whole window ({}, {})",
                win_lo.to_f64(),
                win_hi.to_f64()
            )));
        }
        Ok(true)
    };

    for m in seq_lo..=(seq_hi - s as i64) {
        let lo = theta * seq.node(m);
        let hi = theta * seq.node(m + s as i64);
        if !span_check(&lo, &hi, "a coarse scaling function")? {
            continue;
        }
        if (&lo - seq.node(seq_lo)).sign() < 0 || (&hi - seq.node(seq_hi)).sign() > 0 {
            return Err(Error::SequenceTooShort(
                "a coarse function over the window leaves the generated range; \
                 widen the sequence margin around the analysis window"
                    .into(),
            ));
        }
        let function = bspline(seq, m, s)?.precompose_scale_shift(&inv_theta, &zero)?;
        let trusted = (&lo - &win_lo).sign() >= 0 && (&hi - &win_hi).sign() <= 0;
        members.push(Member {
            kind: MemberKind::Coarse,
            word: seq.word(m, s)?,
            index: m,
            function,
            trusted,
        });
    }

    for wavelet in mother_wavelets(seq, theta, s)? {
        let wlen = wavelet.plan.big_n as i64;
        let seed = seq.node(wavelet.plan.n).clone();
        for o in wavelet_occurrences(seq, theta, &wavelet)? {
            let lo = seq.node(o);
            let hi = seq.node(o + wlen);
            if !span_check(lo, hi, "a wavelet translate")? {
                continue;
            }
            let function = wavelet.zeta.translate(&(lo - &seed));
            let trusted = (lo - &win_lo).sign() >= 0 && (hi - &win_hi).sign() <= 0;
            members.push(Member {
                kind: MemberKind::Wavelet,
                word: wavelet.plan.word.clone(),
                index: o,
                function,
                trusted,
            });
        }
    }
    Ok(members)
}

/// Splits a scaling coefficient vector into the coarse-space projection and
/// the wavelet detail one scale down. The change of basis is solved on the
/// window with zero extension outside it; coefficients of members whose
/// support is clipped by a window boundary are flagged untrusted.
pub fn decompose(
    c: &CoefficientVector,
    seq: &NodeSequence,
    theta: &QuadRat,
) -> Result<(CoefficientVector, CoefficientVector)> {
    check_theta(seq, theta)?;
    if c.kind != BasisKind::Scaling {
        return Err(Error::InvalidArgument(
            "decompose expects scaling coefficients".into(),
        ));
    }
    let s = c.order;
    check_window(seq, c.window)?;
    for entry in &c.entries {
        if entry.index < c.window.0 || entry.index > c.window.1 - s as i64 {
            return Err(Error::InvalidArgument(format!(
                "entry at index {} is not supported inside the window ({}, {})",
                entry.index, c.window.0, c.window.1
            )));
        }
    }
    let coarse_new = |entries| {
        CoefficientVector::new(c.scale - 1, s, BasisKind::Scaling, c.window, c.mode, entries)
    };
    let detail_new = |entries| {
        CoefficientVector::new(c.scale - 1, s, BasisKind::Wavelet, c.window, c.mode, entries)
    };
    if c.entries.is_empty() {
        return Ok((coarse_new(Vec::new())?, detail_new(Vec::new())?));
    }

    let members = decomposition_members(seq, theta, s, c.window)?;
    let win_lo = seq.node(c.window.0);
    let win_hi = seq.node(c.window.1);
    let mut kept: Vec<(&Member, PiecewisePoly)> = Vec::new();
    for member in &members {
        if let Some(r) = restrict(&member.function, win_lo, win_hi) {
            if !r.is_zero() {
                kept.push((member, r));
            }
        }
    }
    if kept.is_empty() {
        return Err(Error::WindowTooSmall(
            "no coarse or wavelet member meets the window".into(),
        ));
    }
    let restricted: Vec<&PiecewisePoly> = kept.iter().map(|(_, r)| r).collect();
    let g = gram_exact(&restricted)?;

    let mut fine: Vec<PiecewisePoly> = Vec::with_capacity(c.entries.len());
    for entry in &c.entries {
        fine.push(bspline(seq, entry.index, s)?);
    }

    let values: Vec<Coefficient> = match c.mode {
        NumericMode::Exact => {
            let parts: Vec<(QuadRat, &PiecewisePoly)> = c
                .entries
                .iter()
                .map(|e| e.value.exact().expect("mode checked").clone())
                .zip(fine.iter())
                .collect();
            let f = PiecewisePoly::linear_combination(&parts)?;
            let mut rhs = Vec::with_capacity(kept.len());
            for r in &restricted {
                rhs.push(f.inner_product(r)?);
            }
            let sol = linalg::solve_consistent(&g, &rhs)?;
            let x = sol.solution;
            let mut residual = f.inner_product(&f)?;
            for (i, xi) in x.iter().enumerate() {
                if xi.is_zero() {
                    continue;
                }
                let two = QuadRat::from_int(f.field(), 2);
                let cross = &(&two * xi) * &rhs[i];
                residual = &residual - &cross;
                for (j, xj) in x.iter().enumerate() {
                    if !xj.is_zero() {
                        let quad = &(xi * xj) * &g[i][j];
                        residual = &residual + &quad;
                    }
                }
            }
            if !residual.is_zero() {
                return Err(Error::NotInSpan(
                    "the window section is not spanned by the coarse and wavelet members".into(),
                ));
            }
            x.into_iter().map(Coefficient::Exact).collect()
        }
        NumericMode::Float => {
            let gf: Vec<Vec<f64>> = g
                .iter()
                .map(|row| row.iter().map(QuadRat::to_f64).collect())
                .collect();
            let mut rhs = vec![0.0; kept.len()];
            for (slot, r) in rhs.iter_mut().zip(&restricted) {
                let mut acc = 0.0;
                for (entry, b) in c.entries.iter().zip(&fine) {
                    acc += entry.value.to_f64() * b.inner_product(r)?.to_f64();
                }
                *slot = acc;
            }
            let x = linalg::solve_semidefinite_f64(&gf, &rhs)?;
            x.into_iter().map(Coefficient::Float).collect()
        }
    };

    let mut coarse_entries = Vec::new();
    let mut detail_entries = Vec::new();
    for ((member, _), value) in kept.iter().zip(values) {
        if value.is_zero() {
            continue;
        }
        let entry = CoefficientEntry {
            word: member.word.clone(),
            index: member.index,
            position: seq.node(member.index).clone(),
            value,
            trusted: member.trusted,
        };
        match member.kind {
            MemberKind::Coarse => coarse_entries.push(entry),
            MemberKind::Wavelet => detail_entries.push(entry),
        }
    }
    Ok((coarse_new(coarse_entries)?, detail_new(detail_entries)?))
}

/// Rebuilds the fine-scale coefficients from a coarse part and a detail
/// part by exact substitution of the two-scale tables. The output window is
/// widened when boundary-crossing members contribute fine terms outside the
/// analysis window; such terms are flagged untrusted.
pub fn reconstruct(
    coarse: &CoefficientVector,
    detail: &CoefficientVector,
    seq: &NodeSequence,
    theta: &QuadRat,
) -> Result<CoefficientVector> {
    check_theta(seq, theta)?;
    if coarse.kind != BasisKind::Scaling || detail.kind != BasisKind::Wavelet {
        return Err(Error::InvalidArgument(
            "reconstruct expects a scaling part and a wavelet part".into(),
        ));
    }
    if coarse.window != detail.window || coarse.scale != detail.scale {
        return Err(Error::WindowMismatch(format!(
            "coarse (scale {}, window {:?}) and detail (scale {}, window {:?}) disagree",
            coarse.scale, coarse.window, detail.scale, detail.window
        )));
    }
    if coarse.order != detail.order || coarse.mode != detail.mode {
        return Err(Error::InvalidArgument(
            "coarse and detail parts must share order and numeric mode".into(),
        ));
    }
    let s = coarse.order;
    check_window(seq, coarse.window)?;

    let mut tables: Vec<(crate::refine::RefinementTable, &CoefficientEntry)> = Vec::new();
    for entry in &coarse.entries {
        if seq.word(entry.index, s)? != entry.word {
            return Err(Error::InvalidArgument(format!(
                "coarse entry word {} does not match the sequence at index {}",
                word_string(&entry.word),
                entry.index
            )));
        }
        tables.push((scaling_equation_at(seq, theta, s, entry.index)?, entry));
    }
    if !detail.entries.is_empty() {
        let mothers = mother_wavelets(seq, theta, s)?;
        let classes = scaling_classes(seq, s)?;
        for entry in &detail.entries {
            let mother = mothers
                .iter()
                .find(|w| w.plan.word == entry.word)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "no wavelet has support word {}",
                        word_string(&entry.word)
                    ))
                })?;
            if seq.word(entry.index, mother.plan.big_n)? != entry.word {
                return Err(Error::InvalidArgument(format!(
                    "detail entry word {} does not occur at index {}",
                    word_string(&entry.word),
                    entry.index
                )));
            }
            let delta = seq.node(entry.index) - seq.node(mother.plan.n);
            let placed = mother.zeta.translate(&delta);
            let label = format!("zeta_{}", word_string(&entry.word));
            let table = if s == 2 {
                refine_linear(&label, &placed, seq, &classes)?
            } else {
                refine_general(&label, &placed, seq, &classes)?
            };
            tables.push((table, entry));
        }
    }

    let mut exact_acc: BTreeMap<i64, QuadRat> = BTreeMap::new();
    let mut float_acc: BTreeMap<i64, f64> = BTreeMap::new();
    for (table, entry) in &tables {
        for term in &table.terms {
            let k = find_node(seq, &term.translate).ok_or_else(|| {
                Error::NotInSpan("a refinement translate is not a sequence node".into())
            })?;
            match (&entry.value, coarse.mode) {
                (Coefficient::Exact(v), _) => {
                    let add = v * &term.coefficient;
                    exact_acc
                        .entry(k)
                        .and_modify(|acc| *acc = &*acc + &add)
                        .or_insert(add);
                }
                (Coefficient::Float(v), _) => {
                    *float_acc.entry(k).or_insert(0.0) += v * term.coefficient.to_f64();
                }
            }
        }
    }

    let mut window = coarse.window;
    let mut entries = Vec::new();
    let indices: Vec<i64> = match coarse.mode {
        NumericMode::Exact => exact_acc.keys().copied().collect(),
        NumericMode::Float => float_acc.keys().copied().collect(),
    };
    for k in indices {
        let value = match coarse.mode {
            NumericMode::Exact => Coefficient::Exact(exact_acc[&k].clone()),
            NumericMode::Float => Coefficient::Float(float_acc[&k]),
        };
        if value.is_zero() {
            continue;
        }
        window.0 = window.0.min(k);
        window.1 = window.1.max(k + s as i64);
        entries.push(CoefficientEntry {
            word: seq.word(k, s)?,
            index: k,
            position: seq.node(k).clone(),
            value,
            trusted: k >= coarse.window.0 && k <= coarse.window.1 - s as i64,
        });
    }
    CoefficientVector::new(
        coarse.scale + 1,
        s,
        BasisKind::Scaling,
        window,
        coarse.mode,
        entries,
    )
}

/// Which family of functions to bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameBasis {
    /// Scale-zero spline scaling translates of order `s`.
    Scaling { s: usize },
    /// Admissible wavelet translates of order `s`, normalized.
    Wavelets { s: usize },
    /// The orthonormal piecewise-constant wavelet system.
    HaarOrthonormal,
}

#[derive(Debug, Clone)]
pub struct FrameBoundEstimate {
    pub nodes: usize,
    pub window: (i64, i64),
    pub basis_size: usize,
    /// Smallest eigenvalue of the normalized Gram matrix.
    pub lower: f64,
    /// Largest eigenvalue of the normalized Gram matrix.
    pub upper: f64,
}

#[derive(Debug, Clone)]
pub struct FrameBoundReport {
    pub estimates: Vec<FrameBoundEstimate>,
    pub lower_nonincreasing: bool,
    pub upper_nondecreasing: bool,
}

fn gram_extremes(mut g: Vec<Vec<f64>>) -> Result<(f64, f64)> {
    let n = g.len();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let avg = 0.5 * (g[i][j] + g[j][i]);
                g[i][j] = avg;
                g[j][i] = avg;
            }
        }
    }
    let eigs = linalg::symmetric_eigenvalues(g)?;
    Ok((
        eigs.first().copied().unwrap_or(0.0),
        eigs.last().copied().unwrap_or(0.0),
    ))
}

/// Extreme eigenvalues of the unit-normalized Gram matrix of a basis family
/// over growing windows, with the Riesz-bound trend across windows.
pub fn frame_bounds(
    seq: &NodeSequence,
    theta: &QuadRat,
    basis: &FrameBasis,
    sizes: &[usize],
) -> Result<FrameBoundReport> {
    check_theta(seq, theta)?;
    if sizes.is_empty() || sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::InvalidArgument(
            "window sizes must be nonempty and strictly increasing".into(),
        ));
    }
    let mut estimates = Vec::with_capacity(sizes.len());
    for &n in sizes {
        let ni = n as i64;
        let window = match basis {
            FrameBasis::HaarOrthonormal => (0, ni),
            _ => (-(ni / 2), ni - ni / 2),
        };
        check_window(seq, window)?;
        let g = match basis {
            FrameBasis::Scaling { s } => {
                let members = scale_basis(seq, theta, *s, 0, window)?;
                let functions: Vec<&PiecewisePoly> = members.iter().map(|(_, f)| f).collect();
                normalized_gram_f64(&gram_exact(&functions)?)
            }
            FrameBasis::Wavelets { s } => {
                let win_lo = seq.node(window.0);
                let win_hi = seq.node(window.1);
                let mut placed = Vec::new();
                for wavelet in mother_wavelets(seq, theta, *s)? {
                    let wlen = wavelet.plan.big_n as i64;
                    let seed = seq.node(wavelet.plan.n).clone();
                    for o in wavelet_occurrences(seq, theta, &wavelet)? {
                        let inside = (seq.node(o) - win_lo).sign() >= 0
                            && (seq.node(o + wlen) - win_hi).sign() <= 0;
                        if inside {
                            placed.push(wavelet.zeta.translate(&(seq.node(o) - &seed)));
                        }
                    }
                }
                if placed.is_empty() {
                    return Err(Error::WindowTooSmall(format!(
                        "no wavelet translate fits in a {n}-node window"
                    )));
                }
                let functions: Vec<&PiecewisePoly> = placed.iter().collect();
                normalized_gram_f64(&gram_exact(&functions)?)
            }
            FrameBasis::HaarOrthonormal => {
                let system = haar_system(seq.field(), HaarVariant::Orthonormal)?;
                let win_lo = seq.node(window.0);
                let win_hi = seq.node(window.1);
                let mut placed = Vec::new();
                for wavelet in &system.wavelets {
                    for position in system.wavelet_translates(&wavelet.label, seq)? {
                        let f = wavelet.function.translate(&position);
                        let (lo, hi) = (f.support().0.clone(), f.support().1.clone());
                        if (&lo - win_lo).sign() >= 0 && (&hi - win_hi).sign() <= 0 {
                            placed.push(f);
                        }
                    }
                }
                if placed.is_empty() {
                    return Err(Error::WindowTooSmall(format!(
                        "no Haar wavelet fits in a {n}-node window"
                    )));
                }
                let m = placed.len();
                let mut g = vec![vec![0.0; m]; m];
                for i in 0..m {
                    for j in i..m {
                        let v = placed[i].inner_product(&placed[j])?.to_f64();
                        g[i][j] = v;
                        g[j][i] = v;
                    }
                }
                let norms: Vec<f64> = (0..m).map(|i| g[i][i].sqrt()).collect();
                for i in 0..m {
                    for j in 0..m {
                        g[i][j] /= norms[i] * norms[j];
                    }
                }
                g
            }
        };
        let basis_size = g.len();
        let (lower, upper) = gram_extremes(g)?;
        estimates.push(FrameBoundEstimate {
            nodes: n,
            window,
            basis_size,
            lower,
            upper,
        });
    }
    let tol = 1e-9;
    let lower_nonincreasing = estimates
        .windows(2)
        .all(|w| w[1].lower <= w[0].lower + tol);
    let upper_nondecreasing = estimates
        .windows(2)
        .all(|w| w[1].upper >= w[0].upper - tol);
    Ok(FrameBoundReport {
        estimates,
        lower_nonincreasing,
        upper_nondecreasing,
    })
}

fn normalized_gram_f64(g: &[Vec<QuadRat>]) -> Vec<Vec<f64>> {
    let n = g.len();
    let norms: Vec<f64> = (0..n).map(|i| g[i][i].to_f64().sqrt()).collect();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[i][j] = g[i][j].to_f64() / (norms[i] * norms[j]);
        }
    }
    out
}
