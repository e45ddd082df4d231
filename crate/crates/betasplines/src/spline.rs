//! Exact piecewise polynomials and B-splines on irregular knot sequences.
//!
//! [`PiecewisePoly`] stores each piece in the local variable `x - b_i` of
//! its interval so that evaluation, calculus, and inner products stay in
//! the quadratic field with no rounding anywhere. B-splines of any order
//! come in two independent constructions, the two-term recurrence and the
//! truncated-power route through Vandermonde moment conditions, which the
//! tests hold against each other. [`scaling_classes`] groups the splines of
//! a cut-and-project sequence by knot word: translates within one class are
//! copies of a single shape, so finitely many shapes generate everything.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::linalg;
use crate::quadfield::{FieldSpec, QuadRat};
use crate::tiling::{classify_words, Letter, ModelSetSpec, NodeSequence};

fn poly_trim(mut p: Vec<QuadRat>) -> Vec<QuadRat> {
    while p.last().is_some_and(QuadRat::is_zero) {
        p.pop();
    }
    p
}

fn poly_eval(p: &[QuadRat], t: &QuadRat) -> QuadRat {
    let mut acc = QuadRat::zero(t.field());
    for c in p.iter().rev() {
        acc = &(&acc * t) + c;
    }
    acc
}

fn poly_add(a: &[QuadRat], b: &[QuadRat], field: FieldSpec) -> Vec<QuadRat> {
    let n = a.len().max(b.len());
    let zero = QuadRat::zero(field);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).unwrap_or(&zero);
        let y = b.get(i).unwrap_or(&zero);
        out.push(x + y);
    }
    poly_trim(out)
}

fn poly_scale(p: &[QuadRat], c: &QuadRat) -> Vec<QuadRat> {
    poly_trim(p.iter().map(|x| x * c).collect())
}

fn poly_mul(a: &[QuadRat], b: &[QuadRat], field: FieldSpec) -> Vec<QuadRat> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![QuadRat::zero(field); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = x * y;
            out[i + j] = &out[i + j] + &t;
        }
    }
    poly_trim(out)
}

/// Coefficients of `p(t + c)` from those of `p(t)`.
fn poly_shift(p: &[QuadRat], c: &QuadRat, field: FieldSpec) -> Vec<QuadRat> {
    if c.is_zero() {
        return poly_trim(p.to_vec());
    }
    let mut out = vec![QuadRat::zero(field); p.len()];
    for (i, coeff) in p.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        // coeff * (t + c)^i spread by the binomial theorem
        let mut binom = QuadRat::one(field);
        let mut cpow = QuadRat::one(field);
        for j in (0..=i).rev() {
            // binom currently equals C(i, j) * c^(i-j) built incrementally
            let term = &(coeff * &binom) * &cpow;
            out[j] = &out[j] + &term;
            if j > 0 {
                binom = (&binom * &QuadRat::from_int(field, j as i64))
                    .checked_div(&QuadRat::from_int(field, (i - j + 1) as i64))
                    .expect("binomial division is exact");
                cpow = &cpow * c;
            }
        }
    }
    poly_trim(out)
}

fn poly_derive(p: &[QuadRat], field: FieldSpec) -> Vec<QuadRat> {
    let mut out = Vec::with_capacity(p.len().saturating_sub(1));
    for (i, c) in p.iter().enumerate().skip(1) {
        out.push(c * &QuadRat::from_int(field, i as i64));
    }
    poly_trim(out)
}

/// Antiderivative with zero constant term.
fn poly_integrate(p: &[QuadRat], field: FieldSpec) -> Vec<QuadRat> {
    let mut out = Vec::with_capacity(p.len() + 1);
    out.push(QuadRat::zero(field));
    for (i, c) in p.iter().enumerate() {
        out.push(
            c.checked_div(&QuadRat::from_int(field, (i + 1) as i64))
                .expect("nonzero integer divisor"),
        );
    }
    poly_trim(out)
}

/// A compactly supported piecewise polynomial with exact coefficients.
///
/// The function is `pieces[i]` evaluated at `x - breakpoints[i]` on
/// `[breakpoints[i], breakpoints[i+1])` and zero outside
/// `[breakpoints[0], breakpoints.last())`. Pieces are stored with trailing
/// zero coefficients trimmed, so structural equality is function equality
/// whenever two values share a breakpoint set.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewisePoly {
    field: FieldSpec,
    breakpoints: Vec<QuadRat>,
    pieces: Vec<Vec<QuadRat>>,
}

impl PiecewisePoly {
    pub fn new(
        field: FieldSpec,
        breakpoints: Vec<QuadRat>,
        pieces: Vec<Vec<QuadRat>>,
    ) -> Result<PiecewisePoly> {
        if breakpoints.len() < 2 || pieces.len() + 1 != breakpoints.len() {
            return Err(Error::InvalidArgument(format!(
                "{} breakpoints with {} pieces",
                breakpoints.len(),
                pieces.len()
            )));
        }
        if breakpoints.iter().any(|b| b.field() != field) {
            return Err(Error::FieldMismatch);
        }
        for pair in breakpoints.windows(2) {
            if (&pair[1] - &pair[0]).sign() <= 0 {
                return Err(Error::InvalidArgument(
                    "breakpoints must increase strictly".into(),
                ));
            }
        }
        Ok(PiecewisePoly {
            field,
            breakpoints,
            pieces: pieces.into_iter().map(poly_trim).collect(),
        })
    }

    /// Builds from per-interval linear pieces `(slope, intercept)` in the
    /// local variable, the layout used by the printed coefficient tables.
    pub fn from_linear_pieces(
        field: FieldSpec,
        breakpoints: Vec<QuadRat>,
        linear: &[(QuadRat, QuadRat)],
    ) -> Result<PiecewisePoly> {
        let pieces = linear
            .iter()
            .map(|(k, q)| vec![q.clone(), k.clone()])
            .collect();
        PiecewisePoly::new(field, breakpoints, pieces)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn breakpoints(&self) -> &[QuadRat] {
        &self.breakpoints
    }

    pub fn num_pieces(&self) -> usize {
        self.pieces.len()
    }

    /// Local coefficients (ascending powers of `x - breakpoints[i]`).
    pub fn piece(&self, i: usize) -> &[QuadRat] {
        &self.pieces[i]
    }

    /// The piece reduced to `(slope, intercept)`; errors above degree 1.
    pub fn linear_piece(&self, i: usize) -> Result<(QuadRat, QuadRat)> {
        let p = &self.pieces[i];
        if p.len() > 2 {
            return Err(Error::InvalidArgument(format!(
                "piece {i} has degree {}",
                p.len() - 1
            )));
        }
        let zero = QuadRat::zero(self.field);
        Ok((
            p.get(1).unwrap_or(&zero).clone(),
            p.first().unwrap_or(&zero).clone(),
        ))
    }

    pub fn is_zero(&self) -> bool {
        self.pieces.iter().all(Vec::is_empty)
    }

    /// Support interval `[lo, hi]` as the outermost breakpoints.
    pub fn support(&self) -> (&QuadRat, &QuadRat) {
        (
            self.breakpoints.first().unwrap(),
            self.breakpoints.last().unwrap(),
        )
    }

    /// Index of the piece whose interval contains `x`, if any.
    fn piece_index(&self, x: &QuadRat) -> Option<usize> {
        if (x - self.breakpoints.first().unwrap()).sign() < 0
            || (x - self.breakpoints.last().unwrap()).sign() >= 0
        {
            return None;
        }
        // Binary search for the last breakpoint <= x.
        let mut lo = 0usize;
        let mut hi = self.breakpoints.len() - 1;
        while lo + 1 < hi {
            let mid = (lo + hi) / 2;
            match self.breakpoints[mid].total_cmp(x) {
                Ordering::Greater => hi = mid,
                _ => lo = mid,
            }
        }
        Some(lo)
    }

    /// Exact evaluation with the half-open convention: zero at and beyond
    /// the right end of the support.
    pub fn eval(&self, x: &QuadRat) -> QuadRat {
        match self.piece_index(x) {
            None => QuadRat::zero(self.field),
            Some(i) => poly_eval(&self.pieces[i], &(x - &self.breakpoints[i])),
        }
    }

    pub fn derivative(&self) -> PiecewisePoly {
        PiecewisePoly {
            field: self.field,
            breakpoints: self.breakpoints.clone(),
            pieces: self
                .pieces
                .iter()
                .map(|p| poly_derive(p, self.field))
                .collect(),
        }
    }

    /// The continuous antiderivative vanishing at the left end of the
    /// support (constant to the right of the support).
    pub fn antiderivative(&self) -> PiecewisePoly {
        let mut acc = QuadRat::zero(self.field);
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for (i, p) in self.pieces.iter().enumerate() {
            let mut prim = poly_integrate(p, self.field);
            if prim.is_empty() {
                prim.push(acc.clone());
            } else {
                prim[0] = &prim[0] + &acc;
            }
            let len = &self.breakpoints[i + 1] - &self.breakpoints[i];
            acc = poly_eval(&prim, &len);
            pieces.push(poly_trim(prim));
        }
        PiecewisePoly {
            field: self.field,
            breakpoints: self.breakpoints.clone(),
            pieces,
        }
    }

    /// Exact `k`-th moment `int x^k f(x) dx`.
    pub fn moment(&self, k: usize) -> QuadRat {
        let mut monomial = vec![QuadRat::zero(self.field); k + 1];
        monomial[k] = QuadRat::one(self.field);
        let mut total = QuadRat::zero(self.field);
        for (i, p) in self.pieces.iter().enumerate() {
            let xk = poly_shift(&monomial, &self.breakpoints[i], self.field);
            let prod = poly_mul(&xk, p, self.field);
            let prim = poly_integrate(&prod, self.field);
            let len = &self.breakpoints[i + 1] - &self.breakpoints[i];
            total = &total + &poly_eval(&prim, &len);
        }
        total
    }

    pub fn definite_integral(&self) -> QuadRat {
        let mut total = QuadRat::zero(self.field);
        for (i, p) in self.pieces.iter().enumerate() {
            let prim = poly_integrate(p, self.field);
            let len = &self.breakpoints[i + 1] - &self.breakpoints[i];
            total = &total + &poly_eval(&prim, &len);
        }
        total
    }

    /// Exact L2 pairing.
    pub fn inner_product(&self, other: &PiecewisePoly) -> Result<QuadRat> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let zero = QuadRat::zero(self.field);
        let lo = if (self.breakpoints[0].total_cmp(&other.breakpoints[0])) == Ordering::Less {
            other.breakpoints[0].clone()
        } else {
            self.breakpoints[0].clone()
        };
        let hi_self = self.breakpoints.last().unwrap();
        let hi_other = other.breakpoints.last().unwrap();
        let hi = if hi_self.total_cmp(hi_other) == Ordering::Less {
            hi_self.clone()
        } else {
            hi_other.clone()
        };
        if (&hi - &lo).sign() <= 0 {
            return Ok(zero);
        }
        let mut cuts: Vec<QuadRat> = self
            .breakpoints
            .iter()
            .chain(other.breakpoints.iter())
            .filter(|b| (*b - &lo).sign() >= 0 && (*b - &hi).sign() <= 0)
            .cloned()
            .collect();
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup();
        let mut total = zero;
        for pair in cuts.windows(2) {
            let (u, v) = (&pair[0], &pair[1]);
            let (Some(i), Some(j)) = (self.piece_index(u), other.piece_index(u)) else {
                continue;
            };
            let a = poly_shift(&self.pieces[i], &(u - &self.breakpoints[i]), self.field);
            let b = poly_shift(&other.pieces[j], &(u - &other.breakpoints[j]), self.field);
            let prod = poly_mul(&a, &b, self.field);
            let prim = poly_integrate(&prod, self.field);
            total = &total + &poly_eval(&prim, &(v - u));
        }
        Ok(total)
    }

    pub fn norm_sq(&self) -> QuadRat {
        self.inner_product(self).expect("same field")
    }

    pub fn translate(&self, d: &QuadRat) -> PiecewisePoly {
        PiecewisePoly {
            field: self.field,
            breakpoints: self.breakpoints.iter().map(|b| b + d).collect(),
            pieces: self.pieces.clone(),
        }
    }

    pub fn scalar_mul(&self, c: &QuadRat) -> PiecewisePoly {
        PiecewisePoly {
            field: self.field,
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| poly_scale(p, c)).collect(),
        }
    }

    /// The function `x -> f(a x + b)` for `a > 0`.
    pub fn precompose_scale_shift(&self, a: &QuadRat, b: &QuadRat) -> Result<PiecewisePoly> {
        if a.sign() <= 0 {
            return Err(Error::InvalidArgument(
                "precompose factor must be positive".into(),
            ));
        }
        let breakpoints: Vec<QuadRat> = self
            .breakpoints
            .iter()
            .map(|bp| (bp - b).checked_div(a))
            .collect::<Result<_>>()?;
        let mut pieces = Vec::with_capacity(self.pieces.len());
        for p in &self.pieces {
            let mut apow = QuadRat::one(self.field);
            let mut q = Vec::with_capacity(p.len());
            for c in p {
                q.push(c * &apow);
                apow = &apow * a;
            }
            pieces.push(poly_trim(q));
        }
        Ok(PiecewisePoly {
            field: self.field,
            breakpoints,
            pieces,
        })
    }

    /// Exact linear combination over a shared breakpoint refinement, with
    /// zero edge pieces trimmed away.
    pub fn linear_combination(terms: &[(QuadRat, &PiecewisePoly)]) -> Result<PiecewisePoly> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::InvalidArgument(
                "linear combination needs at least one term".into(),
            ));
        };
        let field = first.field;
        if terms.iter().any(|(c, f)| c.field() != field || f.field != field) {
            return Err(Error::FieldMismatch);
        }
        let mut cuts: Vec<QuadRat> = terms
            .iter()
            .flat_map(|(_, f)| f.breakpoints.iter().cloned())
            .collect();
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup();
        let mut pieces: Vec<Vec<QuadRat>> = Vec::with_capacity(cuts.len() - 1);
        for w in cuts.windows(2) {
            let u = &w[0];
            let mut acc: Vec<QuadRat> = Vec::new();
            for (c, f) in terms {
                if c.is_zero() {
                    continue;
                }
                if let Some(i) = f.piece_index(u) {
                    let local = poly_shift(&f.pieces[i], &(u - &f.breakpoints[i]), field);
                    acc = poly_add(&acc, &poly_scale(&local, c), field);
                }
            }
            pieces.push(acc);
        }
        // Trim zero pieces at both edges, keeping at least one interval.
        let mut start = 0usize;
        while start + 1 < pieces.len() && pieces[start].is_empty() {
            start += 1;
        }
        let mut end = pieces.len();
        while end > start + 1 && pieces[end - 1].is_empty() {
            end -= 1;
        }
        PiecewisePoly::new(
            field,
            cuts[start..=end].to_vec(),
            pieces[start..end].to_vec(),
        )
    }

    /// Exact check that the function, extended by zero, has continuous
    /// derivatives up to `order` everywhere (order 0 means continuity).
    pub fn is_smooth_to_order(&self, order: usize) -> bool {
        let mut f = self.clone();
        for _ in 0..=order {
            if !f.matches_at_breakpoints() {
                return false;
            }
            f = f.derivative();
        }
        true
    }

    fn matches_at_breakpoints(&self) -> bool {
        let zero = QuadRat::zero(self.field);
        let left_start = poly_eval(self.pieces[0].as_slice(), &zero);
        if !left_start.is_zero() {
            return false;
        }
        for i in 1..self.pieces.len() {
            let len = &self.breakpoints[i] - &self.breakpoints[i - 1];
            let left = poly_eval(&self.pieces[i - 1], &len);
            let right = poly_eval(&self.pieces[i], &zero);
            if left != right {
                return false;
            }
        }
        let n = self.pieces.len();
        let len = &self.breakpoints[n] - &self.breakpoints[n - 1];
        poly_eval(&self.pieces[n - 1], &len).is_zero()
    }
}

fn check_knot_range(seq: &NodeSequence, n: i64, s: usize) -> Result<()> {
    let (lo, hi) = seq.index_range();
    if s == 0 {
        return Err(Error::ParameterOutOfRange("spline order must be >= 1".into()));
    }
    if n < lo || n + s as i64 > hi {
        return Err(Error::IndexOutOfRange {
            index: n,
            lo,
            hi: hi - s as i64,
        });
    }
    Ok(())
}

fn indicator(seq: &NodeSequence, m: i64) -> PiecewisePoly {
    let field = seq.field();
    PiecewisePoly {
        field,
        breakpoints: vec![seq.node(m).clone(), seq.node(m + 1).clone()],
        pieces: vec![vec![QuadRat::one(field)]],
    }
}

fn mul_linear(f: &PiecewisePoly, a0: &QuadRat, a1: &QuadRat) -> PiecewisePoly {
    let field = f.field;
    let pieces = f
        .pieces
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let local = vec![a0 + &(a1 * &f.breakpoints[i]), a1.clone()];
            poly_mul(p, &local, field)
        })
        .collect();
    PiecewisePoly {
        field,
        breakpoints: f.breakpoints.clone(),
        pieces,
    }
}

/// Order-`s` B-spline on knots `node(n)..node(n+s)` by the two-term
/// recurrence, normalized so all splines of one order sum to one (hence
/// its integral is `(node(n+s) - node(n)) / s`).
pub fn bspline_by_recurrence(seq: &NodeSequence, n: i64, s: usize) -> Result<PiecewisePoly> {
    check_knot_range(seq, n, s)?;
    let field = seq.field();
    let one = QuadRat::one(field);
    let mut level: Vec<PiecewisePoly> = (n..n + s as i64).map(|m| indicator(seq, m)).collect();
    for k in 2..=s {
        let mut next = Vec::with_capacity(level.len() - 1);
        for (j, _) in level.iter().enumerate().take(level.len() - 1) {
            let m = n + j as i64;
            let left_den = seq.node(m + k as i64 - 1) - seq.node(m);
            let right_den = seq.node(m + k as i64) - seq.node(m + 1);
            let inv_l = one.checked_div(&left_den)?;
            let inv_r = one.checked_div(&right_den)?;
            let left = mul_linear(&level[j], &-&(&inv_l * seq.node(m)), &inv_l);
            let right = mul_linear(
                &level[j + 1],
                &(&inv_r * seq.node(m + k as i64)),
                &-&inv_r,
            );
            next.push(PiecewisePoly::linear_combination(&[
                (one.clone(), &left),
                (one.clone(), &right),
            ])?);
        }
        level = next;
    }
    Ok(level.into_iter().next().unwrap())
}

/// The same B-spline by the independent truncated-power route.
///
/// Solves the moment system `sum_l a_l node(n+l)^j = 0` for `j < s` and
/// `= (-1)^s / s!` for `j = s`, cross-checks the closed product formula for
/// the weights, builds `sum_l a_l (x - node(n+l))_+^(s-1) / (s-1)!`, and
/// scales it to the recurrence normalization. Returns the spline, the
/// weights, and the proportionality constant applied.
pub fn bspline_by_vandermonde(
    seq: &NodeSequence,
    n: i64,
    s: usize,
) -> Result<(PiecewisePoly, Vec<QuadRat>, QuadRat)> {
    check_knot_range(seq, n, s)?;
    let field = seq.field();
    let one = QuadRat::one(field);
    let knots: Vec<&QuadRat> = (0..=s).map(|l| seq.node(n + l as i64)).collect();
    let mut factorial = one.clone();
    for j in 2..=s {
        factorial = &factorial * &QuadRat::from_int(field, j as i64);
    }
    // Vandermonde moment system.
    let mut rows = Vec::with_capacity(s + 1);
    let mut rhs = Vec::with_capacity(s + 1);
    for j in 0..=s {
        let mut row = Vec::with_capacity(s + 1);
        for k in knots.iter() {
            let mut pw = one.clone();
            for _ in 0..j {
                pw = &pw * *k;
            }
            row.push(pw);
        }
        rows.push(row);
        rhs.push(if j < s {
            QuadRat::zero(field)
        } else {
            let sign = if s % 2 == 0 { 1 } else { -1 };
            QuadRat::from_int(field, sign).checked_div(&factorial)?
        });
    }
    let weights = linalg::solve_square(&rows, &rhs)?;
    // Independent closed form for the same weights.
    for (l, w) in weights.iter().enumerate() {
        let mut prod = one.clone();
        for (m, k) in knots.iter().enumerate() {
            if m == l {
                continue;
            }
            let diff = if m < l {
                knots[l] - *k
            } else {
                *k - knots[l]
            };
            prod = &prod * &diff;
        }
        let sign = if l % 2 == 0 { 1 } else { -1 };
        let closed = QuadRat::from_int(field, sign)
            .checked_div(&(&factorial * &prod))?;
        assert_eq!(w, &closed, "moment solve disagrees with the product formula");
    }
    // Truncated powers, degree s - 1, left to right.
    let mut fact_sm1 = one.clone();
    for j in 2..s {
        fact_sm1 = &fact_sm1 * &QuadRat::from_int(field, j as i64);
    }
    let inv_fact = one.checked_div(&fact_sm1)?;
    let monomial: Vec<QuadRat> = (0..s)
        .map(|j| {
            if j + 1 == s {
                inv_fact.clone()
            } else {
                QuadRat::zero(field)
            }
        })
        .collect();
    let mut pieces = Vec::with_capacity(s);
    for l in 0..s {
        let mut acc: Vec<QuadRat> = Vec::new();
        for m in 0..=l {
            let d = knots[l] - knots[m];
            let shifted = poly_shift(&monomial, &d, field);
            acc = poly_add(&acc, &poly_scale(&shifted, &weights[m]), field);
        }
        pieces.push(acc);
    }
    // Beyond the last knot every truncated power is active and the moment
    // conditions force cancellation; verify exactly.
    let mut tail: Vec<QuadRat> = Vec::new();
    for m in 0..=s {
        let d = knots[s] - knots[m];
        let shifted = poly_shift(&monomial, &d, field);
        tail = poly_add(&tail, &poly_scale(&shifted, &weights[m]), field);
    }
    assert!(
        tail.is_empty(),
        "truncated-power combination fails to vanish beyond the support"
    );
    let raw = PiecewisePoly::new(
        field,
        knots.iter().map(|k| (*k).clone()).collect(),
        pieces,
    )?;
    let target = (knots[s] - knots[0]).checked_div(&QuadRat::from_int(field, s as i64))?;
    let constant = target.checked_div(&raw.definite_integral())?;
    Ok((raw.scalar_mul(&constant), weights, constant))
}

/// Order-`s` B-spline on knots `node(n)..node(n+s)` (recurrence route).
pub fn bspline(seq: &NodeSequence, n: i64, s: usize) -> Result<PiecewisePoly> {
    bspline_by_recurrence(seq, n, s)
}

/// One translation class of order-`s` splines: all knot runs carrying the
/// same word produce translates of one shape.
#[derive(Debug, Clone)]
pub struct ScalingClass {
    pub word: Vec<Letter>,
    pub representative: i64,
    pub members: Vec<i64>,
    pub window: ModelSetSpec,
    pub spline: PiecewisePoly,
}

/// Splines of a cut-and-project sequence grouped by their `s`-letter knot
/// word: exactly `s + 1` classes, ordered with their acceptance windows
/// from left to right.
pub fn scaling_classes(seq: &NodeSequence, s: usize) -> Result<Vec<ScalingClass>> {
    let classes = classify_words(seq, s)?;
    classes
        .into_iter()
        .map(|c| {
            let spline = bspline(seq, c.representative, s)?;
            Ok(ScalingClass {
                word: c.word,
                representative: c.representative,
                members: c.members,
                window: c.window,
                spline,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tiling::{generate_fibonacci_chain, integer_lattice, word_string};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn t() -> FieldSpec {
        FieldSpec::golden()
    }

    fn q(p: i64, qc: i64) -> QuadRat {
        QuadRat::from_pq_int(t(), p, qc)
    }

    fn fib(k_min: i64, k_max: i64) -> NodeSequence {
        generate_fibonacci_chain(&ModelSetSpec::default_fibonacci(), k_min, k_max).unwrap()
    }

    fn unit_hat() -> PiecewisePoly {
        // Hat on [0, 2] peaking at 1.
        PiecewisePoly::new(
            t(),
            vec![q(0, 0), q(1, 0), q(2, 0)],
            vec![vec![q(0, 0), q(1, 0)], vec![q(1, 0), q(-1, 0)]],
        )
        .unwrap()
    }

    #[test]
    fn piecewise_evaluation_and_calculus() {
        let hat = unit_hat();
        assert_eq!(hat.eval(&q(1, 0)), q(1, 0));
        assert_eq!(hat.eval(&QuadRat::from_ratio(t(), 1, 2, 0, 1)),
            QuadRat::from_ratio(t(), 1, 2, 0, 1));
        assert!(hat.eval(&q(2, 0)).is_zero());
        assert!(hat.eval(&q(-1, 0)).is_zero());
        assert_eq!(hat.definite_integral(), q(1, 0));
        let d = hat.derivative();
        assert_eq!(d.eval(&QuadRat::from_ratio(t(), 1, 2, 0, 1)), q(1, 0));
        assert_eq!(d.eval(&QuadRat::from_ratio(t(), 3, 2, 0, 1)), q(-1, 0));
        let f = hat.antiderivative();
        assert!(f.eval(&q(0, 0)).is_zero());
        assert_eq!(f.eval(&q(1, 0)), QuadRat::from_ratio(t(), 1, 2, 0, 1));
        let shifted = hat.translate(&q(0, 1));
        assert_eq!(shifted.eval(&q(1, 1)), q(1, 0));
        assert!(hat.is_smooth_to_order(0));
        assert!(!hat.is_smooth_to_order(1));
    }

    #[test]
    fn inner_products_match_hand_integrals() {
        let hat = unit_hat();
        // int hat^2 = 2/3, neighboring hats overlap in 1/6.
        assert_eq!(hat.norm_sq(), QuadRat::from_ratio(t(), 2, 3, 0, 1));
        let next = hat.translate(&q(1, 0));
        assert_eq!(
            hat.inner_product(&next).unwrap(),
            QuadRat::from_ratio(t(), 1, 6, 0, 1)
        );
        let far = hat.translate(&q(5, 0));
        assert!(hat.inner_product(&far).unwrap().is_zero());
    }

    #[test]
    fn precompose_rescales_support_and_values() {
        let hat = unit_hat();
        // g(x) = hat(tau^2 x - 1) lives on [1/tau^2, 3/tau^2].
        let theta = q(1, 1);
        let g = hat.precompose_scale_shift(&theta, &q(-1, 0)).unwrap();
        let mid = q(2, 0).checked_div(&theta).unwrap();
        assert_eq!(g.eval(&mid), q(1, 0));
        // Norms scale by the inverse factor.
        let lhs = &g.norm_sq() * &theta;
        assert_eq!(lhs, hat.norm_sq());
    }

    #[test]
    fn linear_combination_cancels_exactly() {
        let hat = unit_hat();
        let sum = PiecewisePoly::linear_combination(&[
            (q(1, 0), &hat),
            (q(-1, 0), &hat),
        ])
        .unwrap();
        assert!(sum.is_zero());
        let mix = PiecewisePoly::linear_combination(&[
            (q(2, 0), &hat),
            (q(0, 1), &hat.translate(&q(1, 0))),
        ])
        .unwrap();
        assert_eq!(mix.eval(&q(1, 0)), q(2, 0));
        assert_eq!(mix.eval(&q(2, 0)), q(0, 1));
        assert_eq!(mix.support().0, &q(0, 0));
        assert_eq!(mix.support().1, &q(3, 0));
    }

    #[test]
    fn vandermonde_weights_on_the_uniform_lattice() {
        let lattice = integer_lattice(t(), -4, 4).unwrap();
        let (spline, weights, constant) = bspline_by_vandermonde(&lattice, 0, 2).unwrap();
        assert_eq!(
            weights,
            vec![
                QuadRat::from_ratio(t(), 1, 4, 0, 1),
                QuadRat::from_ratio(t(), -1, 2, 0, 1),
                QuadRat::from_ratio(t(), 1, 4, 0, 1),
            ]
        );
        assert_eq!(constant, q(4, 0));
        assert_eq!(spline, unit_hat());
    }

    #[test]
    fn recurrence_and_vandermonde_agree_on_the_chain() {
        let seq = fib(-12, 12);
        for s in [2usize, 3, 4] {
            for n in [-5i64, -3, -1, 0, 2] {
                let a = bspline_by_recurrence(&seq, n, s).unwrap();
                let (b, _, _) = bspline_by_vandermonde(&seq, n, s).unwrap();
                assert_eq!(a, b, "routes differ at n = {n}, s = {s}");
            }
        }
    }

    #[test]
    fn bspline_support_integral_smoothness_and_positivity() {
        let seq = fib(-10, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for s in [2usize, 3, 4] {
            for n in [-4i64, -2, 0, 1] {
                let b = bspline(&seq, n, s).unwrap();
                let (lo, hi) = b.support();
                assert_eq!(lo, seq.node(n));
                assert_eq!(hi, seq.node(n + s as i64));
                let span = seq.node(n + s as i64) - seq.node(n);
                let target = span
                    .checked_div(&QuadRat::from_int(t(), s as i64))
                    .unwrap();
                assert_eq!(b.definite_integral(), target);
                assert!(b.is_smooth_to_order(s - 2));
                assert!(!b.is_smooth_to_order(s - 1), "too smooth for s = {s}");
                for _ in 0..25 {
                    let num = rng.gen_range(0..=64i64);
                    let frac = QuadRat::from_ratio(t(), num, 64, 0, 1);
                    let x = &(&frac * &span) + seq.node(n);
                    assert!(b.eval(&x).sign() >= 0, "negative value at {x}");
                }
                assert!(b.piece(0).len() <= s, "degree exceeds s - 1");
            }
        }
    }

    #[test]
    fn bsplines_sum_to_one_between_knots() {
        let seq = fib(-10, 10);
        for s in [2usize, 3, 4] {
            // Points inside (lambda_0, lambda_1): all covering splines.
            let x = &(&QuadRat::from_ratio(t(), 1, 3, 0, 1) * &seq.gap(0))
                + seq.node(0);
            let mut total = QuadRat::zero(t());
            for n in (1 - s as i64)..=0 {
                total = &total + &bspline(&seq, n, s).unwrap().eval(&x);
            }
            assert_eq!(total, QuadRat::one(t()), "partition fails for s = {s}");
        }
    }

    #[test]
    fn scaling_classes_of_the_chain_match_hand_built_hats() {
        let seq = fib(-30, 30);
        let classes = scaling_classes(&seq, 2).unwrap();
        assert_eq!(classes.len(), 3);
        let words: Vec<String> = classes.iter().map(|c| word_string(&c.word)).collect();
        assert_eq!(words, ["LL", "LS", "SL"]);
        // Hat over LL knots 0, 1, 2: up then down.
        let ll = PiecewisePoly::new(
            t(),
            vec![q(0, 0), q(1, 0), q(2, 0)],
            vec![vec![q(0, 0), q(1, 0)], vec![q(1, 0), q(-1, 0)]],
        )
        .unwrap();
        // Hat over LS knots -tau, 1-tau, 0: slopes 1 then -tau.
        let ls = PiecewisePoly::new(
            t(),
            vec![q(0, -1), q(1, -1), q(0, 0)],
            vec![vec![q(0, 0), q(1, 0)], vec![q(1, 0), q(0, -1)]],
        )
        .unwrap();
        // Hat over SL knots 1-tau, 0, 1: slopes tau then -1.
        let sl = PiecewisePoly::new(
            t(),
            vec![q(1, -1), q(0, 0), q(1, 0)],
            vec![vec![q(0, 0), q(0, 1)], vec![q(1, 0), q(-1, 0)]],
        )
        .unwrap();
        assert_eq!(classes[0].spline, ll);
        assert_eq!(classes[1].spline, ls);
        assert_eq!(classes[2].spline, sl);
        // Members carry translates of the class shape.
        for class in &classes {
            for &m in class.members.iter().take(6) {
                let shift = seq.node(m) - seq.node(class.representative);
                let translated = class.spline.translate(&shift);
                assert_eq!(bspline(&seq, m, 2).unwrap(), translated);
            }
        }
    }

    #[test]
    fn scaling_class_count_grows_with_order() {
        let seq = fib(-40, 40);
        for s in [2usize, 3, 4, 5] {
            let classes = scaling_classes(&seq, s).unwrap();
            assert_eq!(classes.len(), s + 1, "class count for order {s}");
            for class in &classes {
                assert!(class.spline.is_smooth_to_order(s.saturating_sub(2)));
            }
        }
    }
}
