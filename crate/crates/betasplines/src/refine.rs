//! Two-scale (refinement) equations: expand a coarse-scale spline exactly in
//! the scaling basis of the refined tiling.
//!
//! Everything is phrased in the fine variable.  A coarse function `f(x)`
//! placed on the inflated tiling becomes the target `F(y) = f(y / theta)`,
//! and the expansion sought is `F(y) = sum g_j phi_{w(j)}(y - node_j)` over
//! the node sequence's own scaling functions.  Two routes are provided: a
//! forward recursion over node gaps for piecewise-linear targets, where the
//! order-2 splines form a cardinal basis, and an interval-matching exact
//! solve for everything else.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::linalg;
use crate::quadfield::QuadRat;
use crate::spline::{bspline, scaling_classes, PiecewisePoly, ScalingClass};
use crate::tiling::{word_string, Letter, NodeSequence};
use crate::wavelet::{mother_wavelets, MotherWavelet};

/// One summand `coefficient * phi_word(y - translate)` of an expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct RefinementTerm {
    pub word: Vec<Letter>,
    pub translate: QuadRat,
    pub coefficient: QuadRat,
}

/// An exact expansion of one target function in the node sequence's scaling
/// basis.  Terms are ordered by translate and never carry zero coefficients;
/// builders verify the residual vanishes identically before returning.
#[derive(Debug, Clone)]
pub struct RefinementTable {
    /// Name of the expanded function, e.g. `phi_LL` or `zeta_LLSLS`.
    pub target: String,
    /// Where the target sits in its own variable (its support's left end on
    /// the coarse tiling, or the seed node for a wavelet profile).
    pub target_translate: QuadRat,
    pub terms: Vec<RefinementTerm>,
}

impl RefinementTable {
    /// Rebuilds the right-hand side as a single piecewise polynomial.
    pub fn realize(&self, classes: &[ScalingClass]) -> Result<PiecewisePoly> {
        let Some(class) = classes.first() else {
            return Err(Error::InvalidArgument(
                "realizing a table needs at least one scaling class".into(),
            ));
        };
        let field = class.spline.field();
        if self.terms.is_empty() {
            let zero = QuadRat::zero(field);
            let one = QuadRat::one(field);
            return PiecewisePoly::new(field, vec![zero, one], vec![vec![]]);
        }
        let mut realized = Vec::with_capacity(self.terms.len());
        for term in &self.terms {
            let class = class_for(classes, &term.word)?;
            realized.push(anchored_shape(class).translate(&term.translate));
        }
        let parts: Vec<(QuadRat, &PiecewisePoly)> = self
            .terms
            .iter()
            .map(|t| t.coefficient.clone())
            .zip(realized.iter())
            .collect();
        PiecewisePoly::linear_combination(&parts)
    }

    /// Looks a term up by its translate node.
    pub fn term_at(&self, translate: &QuadRat) -> Option<&RefinementTerm> {
        self.terms.iter().find(|t| &t.translate == translate)
    }
}

/// The class representative shifted so its support starts at zero.
fn anchored_shape(class: &ScalingClass) -> PiecewisePoly {
    let lo = class.spline.support().0.clone();
    class.spline.translate(&-&lo)
}

fn class_for<'a>(classes: &'a [ScalingClass], word: &[Letter]) -> Result<&'a ScalingClass> {
    classes
        .iter()
        .find(|c| c.word == word)
        .ok_or_else(|| Error::InvalidArgument(format!("no scaling class for word {}", word_string(word))))
}

fn uniform_order(classes: &[ScalingClass]) -> Result<usize> {
    let Some(first) = classes.first() else {
        return Err(Error::InvalidArgument(
            "refinement needs at least one scaling class".into(),
        ));
    };
    let s = first.word.len();
    if classes.iter().any(|c| c.word.len() != s) {
        return Err(Error::InvalidArgument(
            "scaling classes must share one word length".into(),
        ));
    }
    Ok(s)
}

pub(crate) fn find_node(seq: &NodeSequence, x: &QuadRat) -> Option<i64> {
    let (mut lo, mut hi) = seq.index_range();
    while lo <= hi {
        let mid = lo + (hi - lo) / 2;
        match seq.node(mid).total_cmp(x) {
            Ordering::Less => lo = mid + 1,
            Ordering::Greater => hi = mid - 1,
            Ordering::Equal => return Some(mid),
        }
    }
    None
}

fn check_coverage(target: &PiecewisePoly, seq: &NodeSequence) -> Result<()> {
    let (lo_idx, hi_idx) = seq.index_range();
    let (sup_lo, sup_hi) = target.support();
    if (sup_lo - seq.node(lo_idx)).sign() < 0 || (sup_hi - seq.node(hi_idx)).sign() > 0 {
        return Err(Error::SequenceTooShort(format!(
            "target support [{}, {}] exceeds the generated window",
            sup_lo.to_f64(),
            sup_hi.to_f64()
        )));
    }
    Ok(())
}

fn empty_table(label: &str, field: crate::quadfield::FieldSpec) -> RefinementTable {
    RefinementTable {
        target: label.to_string(),
        target_translate: QuadRat::zero(field),
        terms: Vec::new(),
    }
}

fn assert_residual_vanishes(
    table: &RefinementTable,
    target: &PiecewisePoly,
    classes: &[ScalingClass],
) -> Result<()> {
    let realized = table.realize(classes)?;
    let field = target.field();
    let diff = PiecewisePoly::linear_combination(&[
        (QuadRat::one(field), &realized),
        (-&QuadRat::one(field), target),
    ])?;
    assert!(
        diff.is_zero(),
        "refinement table for {} leaves a nonzero residual",
        table.target
    );
    Ok(())
}

/// Expands a continuous piecewise-linear target by forward substitution over
/// the node gaps.  The order-2 scaling functions take value one at their
/// middle node and vanish at all others, so the running node value of the
/// target is the expansion coefficient; the value accumulated across the
/// whole support must return to zero exactly.
pub fn refine_linear(
    label: &str,
    target: &PiecewisePoly,
    seq: &NodeSequence,
    classes: &[ScalingClass],
) -> Result<RefinementTable> {
    let field = seq.field();
    if target.field() != field || classes.iter().any(|c| c.spline.field() != field) {
        return Err(Error::FieldMismatch);
    }
    let s = uniform_order(classes)?;
    if s != 2 {
        return Err(Error::InvalidArgument(
            "the forward recursion needs the order-2 piecewise linear basis".into(),
        ));
    }
    if target.is_zero() {
        return Ok(empty_table(label, field));
    }
    for i in 0..target.num_pieces() {
        if target.piece(i).len() > 2 {
            return Err(Error::InvalidArgument(
                "the forward recursion handles piecewise linear targets only".into(),
            ));
        }
    }
    if !target.is_smooth_to_order(0) {
        return Err(Error::NotInSpan(
            "a discontinuous target is outside the span of continuous splines".into(),
        ));
    }
    check_coverage(target, seq)?;
    for bp in target.breakpoints() {
        if find_node(seq, bp).is_none() {
            return Err(Error::NotInSpan(format!(
                "target breakpoint {} is not a node of the sequence",
                bp.to_f64()
            )));
        }
    }
    let (sup_lo, sup_hi) = target.support();
    let a = find_node(seq, sup_lo).expect("support ends are breakpoints");
    let b = find_node(seq, sup_hi).expect("support ends are breakpoints");

    let mut peak_of: Vec<QuadRat> = Vec::with_capacity(classes.len());
    for class in classes {
        peak_of.push(class.spline.eval(&class.spline.breakpoints()[1]));
    }
    let deriv = target.derivative();
    let two = QuadRat::from_int(field, 2);
    let mut value = QuadRat::zero(field);
    let mut terms = Vec::new();
    for i in a..b {
        let left = seq.node(i);
        let right = seq.node(i + 1);
        let mid = (left + right).checked_div(&two)?;
        let slope = deriv.eval(&mid);
        value = &value + &(&slope * &(right - left));
        if i < b - 1 && !value.is_zero() {
            let word = seq.word(i, s)?;
            let class_index = classes
                .iter()
                .position(|c| c.word == word)
                .ok_or_else(|| {
                    Error::InvalidArgument(format!("no scaling class for word {}", word_string(&word)))
                })?;
            terms.push(RefinementTerm {
                word,
                translate: left.clone(),
                coefficient: value.checked_div(&peak_of[class_index])?,
            });
        }
    }
    if !value.is_zero() {
        return Err(Error::NotInSpan(
            "the accumulated value does not close to zero at the right support end".into(),
        ));
    }
    let table = RefinementTable {
        target: label.to_string(),
        target_translate: sup_lo.clone(),
        terms,
    };
    assert_residual_vanishes(&table, target, classes)?;
    Ok(table)
}

/// Expands an arbitrary compactly supported spline target by matching
/// polynomial jets on every subinterval of the merged breakpoint grid and
/// solving the resulting linear system exactly.
pub fn refine_general(
    label: &str,
    target: &PiecewisePoly,
    seq: &NodeSequence,
    classes: &[ScalingClass],
) -> Result<RefinementTable> {
    let field = seq.field();
    if target.field() != field || classes.iter().any(|c| c.spline.field() != field) {
        return Err(Error::FieldMismatch);
    }
    let s = uniform_order(classes)?;
    if target.is_zero() {
        return Ok(empty_table(label, field));
    }
    check_coverage(target, seq)?;
    let (sup_lo, sup_hi) = target.support();
    let (lo_idx, hi_idx) = seq.index_range();

    let mut candidates: Vec<(Vec<Letter>, QuadRat, PiecewisePoly)> = Vec::new();
    for j in lo_idx..=(hi_idx - s as i64) {
        let left = seq.node(j);
        let right = seq.node(j + s as i64);
        if (right - sup_lo).sign() <= 0 || (left - sup_hi).sign() >= 0 {
            continue;
        }
        let word = seq.word(j, s)?;
        let class = class_for(classes, &word)?;
        candidates.push((word, left.clone(), anchored_shape(class).translate(left)));
    }
    if candidates.is_empty() {
        return Err(Error::NotInSpan(
            "no scaling function overlaps the target support".into(),
        ));
    }

    let mut cuts: Vec<QuadRat> = target.breakpoints().to_vec();
    for (_, _, f) in &candidates {
        cuts.extend(f.breakpoints().iter().cloned());
    }
    cuts.sort_by(|a, b| a.total_cmp(b));
    cuts.dedup();

    let depth = candidates
        .iter()
        .map(|(_, _, f)| (0..f.num_pieces()).map(|i| f.piece(i).len()).max().unwrap_or(1))
        .chain((0..target.num_pieces()).map(|i| target.piece(i).len()))
        .max()
        .unwrap_or(1)
        .saturating_sub(1);
    let target_ladder = derivative_ladder(target, depth);
    let ladders: Vec<Vec<PiecewisePoly>> = candidates
        .iter()
        .map(|(_, _, f)| derivative_ladder(f, depth))
        .collect();

    let mut rows: Vec<Vec<QuadRat>> = Vec::new();
    let mut rhs: Vec<QuadRat> = Vec::new();
    for w in cuts.windows(2) {
        let u = &w[0];
        for m in 0..=depth {
            rows.push(ladders.iter().map(|l| l[m].eval(u)).collect());
            rhs.push(target_ladder[m].eval(u));
        }
    }
    let sol = linalg::solve_consistent(&rows, &rhs)?;
    if !sol.free_columns.is_empty() {
        return Err(Error::RankDeficient(format!(
            "{} overlapping scaling functions are linearly dependent",
            sol.free_columns.len()
        )));
    }
    let terms: Vec<RefinementTerm> = candidates
        .into_iter()
        .zip(sol.solution)
        .filter(|(_, g)| !g.is_zero())
        .map(|((word, translate, _), coefficient)| RefinementTerm {
            word,
            translate,
            coefficient,
        })
        .collect();
    let table = RefinementTable {
        target: label.to_string(),
        target_translate: sup_lo.clone(),
        terms,
    };
    assert_residual_vanishes(&table, target, classes)?;
    Ok(table)
}

fn derivative_ladder(f: &PiecewisePoly, depth: usize) -> Vec<PiecewisePoly> {
    let mut out = vec![f.clone()];
    for _ in 0..depth {
        out.push(out.last().expect("nonempty ladder").derivative());
    }
    out
}

/// The two-scale equation of the scaling function whose word starts at node
/// `k`: expands `phi_w(x - node_k)`, read in the fine variable `y = theta x`,
/// over the sequence's scaling basis.
pub fn scaling_equation_at(
    seq: &NodeSequence,
    theta: &QuadRat,
    s: usize,
    k: i64,
) -> Result<RefinementTable> {
    let field = seq.field();
    if (theta - &QuadRat::one(field)).sign() <= 0 {
        return Err(Error::ParameterOutOfRange(
            "the inflation factor must exceed one".into(),
        ));
    }
    let word = seq.word(k, s)?;
    let coarse = bspline(seq, k, s)?;
    let target = coarse.precompose_scale_shift(&theta.inv()?, &QuadRat::zero(field))?;
    let classes = scaling_classes(seq, s)?;
    let label = format!("phi_{}", word_string(&word));
    let mut table = if s == 2 {
        refine_linear(&label, &target, seq, &classes)?
    } else {
        refine_general(&label, &target, seq, &classes)?
    };
    table.target_translate = seq.node(k).clone();
    Ok(table)
}

/// One two-scale equation per scaling class, each derived at the class
/// member closest to the origin so the inflated support stays inside the
/// window.
pub fn scaling_equation_tables(
    seq: &NodeSequence,
    theta: &QuadRat,
    s: usize,
) -> Result<Vec<RefinementTable>> {
    let classes = scaling_classes(seq, s)?;
    let mut out = Vec::with_capacity(classes.len());
    for class in &classes {
        let k = class
            .members
            .iter()
            .copied()
            .min_by(|&a, &b| {
                let na = abs_node(seq, a);
                let nb = abs_node(seq, b);
                na.total_cmp(&nb).then(seq.node(a).total_cmp(seq.node(b)).reverse())
            })
            .ok_or_else(|| {
                Error::SequenceTooShort(format!(
                    "word {} has no occurrence in the window",
                    word_string(&class.word)
                ))
            })?;
        out.push(scaling_equation_at(seq, theta, s, k)?);
    }
    Ok(out)
}

fn abs_node(seq: &NodeSequence, k: i64) -> QuadRat {
    let x = seq.node(k);
    if x.sign() < 0 {
        -x
    } else {
        x.clone()
    }
}

/// A mother wavelet together with the expansion of its unnormalized profile
/// `zeta` in the scaling basis.  The normalized wavelet divides every
/// coefficient by `sqrt(norm_sq_scaled)`; that step is left to exporters so
/// the table stays in the field.
#[derive(Debug, Clone)]
pub struct WaveletScalingEquation {
    pub wavelet: MotherWavelet,
    pub table: RefinementTable,
}

/// Scaling equations for all mother wavelets of order `s`, one table per
/// word, targets taken pre-normalization.
pub fn wavelet_scaling_equations(
    seq: &NodeSequence,
    theta: &QuadRat,
    s: usize,
) -> Result<Vec<WaveletScalingEquation>> {
    let wavelets = mother_wavelets(seq, theta, s)?;
    let classes = scaling_classes(seq, s)?;
    let mut out = Vec::with_capacity(wavelets.len());
    for wavelet in wavelets {
        let label = format!("zeta_{}", word_string(&wavelet.plan.word));
        let table = if s == 2 {
            refine_linear(&label, &wavelet.zeta, seq, &classes)?
        } else {
            refine_general(&label, &wavelet.zeta, seq, &classes)?
        };
        out.push(WaveletScalingEquation { wavelet, table });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::FieldSpec;
    use crate::tiling::{generate_fibonacci_chain, parse_word, ModelSetSpec};

    fn t() -> FieldSpec {
        FieldSpec::golden()
    }

    fn q(p: i64, qc: i64) -> QuadRat {
        QuadRat::from_pq_int(t(), p, qc)
    }

    fn scaled(num: i64, den: i64, p: i64, qc: i64) -> QuadRat {
        QuadRat::from_ratio(t(), num * p, den, num * qc, den)
    }

    fn fib(k_min: i64, k_max: i64) -> NodeSequence {
        generate_fibonacci_chain(&ModelSetSpec::default_fibonacci(), k_min, k_max).unwrap()
    }

    fn theta() -> QuadRat {
        q(1, 1)
    }

    fn assert_terms(table: &RefinementTable, expected: &[(&str, QuadRat, QuadRat)]) {
        assert_eq!(
            table.terms.len(),
            expected.len(),
            "{} has {} terms",
            table.target,
            table.terms.len()
        );
        for (term, (word, translate, coefficient)) in table.terms.iter().zip(expected) {
            assert_eq!(term.word, parse_word(word).unwrap(), "word in {}", table.target);
            assert_eq!(&term.translate, translate, "translate in {}", table.target);
            assert_eq!(&term.coefficient, coefficient, "coefficient in {}", table.target);
        }
    }

    #[test]
    fn hat_expands_as_itself_at_matching_scale() {
        let seq = fib(-12, 12);
        let classes = scaling_classes(&seq, 2).unwrap();
        let hat = bspline(&seq, 0, 2).unwrap();
        let table = refine_linear("phi_LL", &hat, &seq, &classes).unwrap();
        assert_terms(&table, &[("LL", q(0, 0), q(1, 0))]);
        let general = refine_general("phi_LL", &hat, &seq, &classes).unwrap();
        assert_eq!(table.terms, general.terms);
    }

    #[test]
    fn scaling_equations_match_the_printed_forms() {
        let seq = fib(-12, 12);
        let inv_theta_sq = q(2, -1);

        let ll = scaling_equation_at(&seq, &theta(), 2, 0).unwrap();
        assert_eq!(ll.target, "phi_LL");
        assert_eq!(ll.target_translate, q(0, 0));
        assert_terms(
            &ll,
            &[
                ("LL", q(0, 0), inv_theta_sq.clone()),
                ("LS", q(1, 0), &q(2, 0) * &inv_theta_sq),
                ("SL", q(2, 0), q(1, 0)),
                ("LL", q(1, 1), q(-1, 1)),
                ("LS", q(2, 1), q(-3, 2)),
            ],
        );

        let ls = scaling_equation_at(&seq, &theta(), 2, -2).unwrap();
        assert_eq!(ls.target_translate, q(0, -1));
        assert_terms(
            &ls,
            &[
                ("LL", q(-1, -2), inv_theta_sq.clone()),
                ("LS", q(0, -2), &q(2, 0) * &inv_theta_sq),
                ("SL", q(1, -2), q(1, 0)),
                ("LS", q(0, -1), inv_theta_sq.clone()),
            ],
        );

        let sl = scaling_equation_at(&seq, &theta(), 2, -1).unwrap();
        assert_eq!(sl.target_translate, q(1, -1));
        assert_terms(
            &sl,
            &[
                ("LS", q(0, -1), q(-1, 1)),
                ("SL", q(1, -1), q(1, 0)),
                ("LL", q(0, 0), q(-1, 1)),
                ("LS", q(1, 0), q(-3, 2)),
            ],
        );
    }

    #[test]
    fn class_tables_pick_near_origin_representatives() {
        let seq = fib(-12, 12);
        let tables = scaling_equation_tables(&seq, &theta(), 2).unwrap();
        assert_eq!(tables.len(), 3);
        for table in &tables {
            assert!(!table.terms.is_empty());
            assert!(table.terms.iter().all(|t| !t.coefficient.is_zero()));
        }
        let ll = tables.iter().find(|t| t.target == "phi_LL").unwrap();
        assert_eq!(ll.target_translate, q(0, 0));
    }

    #[test]
    fn wavelet_equations_reproduce_the_published_table() {
        let seq = fib(-40, 40);
        let equations = wavelet_scaling_equations(&seq, &theta(), 2).unwrap();
        assert_eq!(equations.len(), 4);
        for eq in &equations {
            assert_eq!(
                eq.table.terms.len(),
                eq.wavelet.plan.big_n - 1,
                "term count for {}",
                eq.table.target
            );
            assert_eq!(eq.table.target_translate, *eq.wavelet.zeta.support().0);
        }
        let by_word = |w: &str| {
            equations
                .iter()
                .find(|e| e.table.target == format!("zeta_{w}"))
                .unwrap()
        };
        let classes = scaling_classes(&seq, 2).unwrap();
        let relocated = |w: &str, seed: QuadRat| {
            let eq = by_word(w);
            let delta = &seed - eq.wavelet.zeta.support().0;
            let target = eq.wavelet.zeta.translate(&delta);
            refine_linear(&eq.table.target, &target, &seq, &classes).unwrap()
        };

        assert_terms(
            &relocated("LLSLS", q(-1, -2)),
            &[
                ("LL", q(-1, -2), q(6, 0)),
                ("LS", q(0, -2), scaled(12, 11, 5, -13)),
                ("SL", q(1, -2), scaled(12, 11, 4, 5)),
                ("LS", q(0, -1), scaled(12, 11, 2, -3)),
            ],
        );
        assert_terms(
            &relocated("LSLSLL", q(0, -2)),
            &[
                ("LS", q(0, -2), q(6, 0)),
                ("SL", q(1, -2), scaled(-6, 1, 3, 4)),
                ("LS", q(0, -1), scaled(6, 11, 58, 79)),
                ("SL", q(1, -1), scaled(-18, 11, 13, 16)),
                ("LL", q(0, 0), scaled(3, 11, 13, 16)),
            ],
        );
        assert_terms(
            &relocated("LSLLS", q(0, -1)),
            &[
                ("LS", q(0, -1), q(6, 0)),
                ("SL", q(1, -1), scaled(-6, 1, 3, 4)),
                ("LL", q(0, 0), scaled(3, 1, 8, 11)),
                ("LS", q(1, 0), scaled(-6, 1, 1, 4)),
            ],
        );
        assert_terms(
            &relocated("LLSLL", q(0, 0)),
            &[
                ("LL", q(0, 0), q(6, 0)),
                ("LS", q(1, 0), scaled(36, 11, 6, -7)),
                ("SL", q(2, 0), scaled(-36, 11, 1, -3)),
                ("LL", q(1, 1), scaled(6, 11, 1, -3)),
            ],
        );

        let scaled_norm = |w: &str| by_word(w).wavelet.norm_sq_scaled.clone();
        assert_eq!(scaled_norm("LLSLS"), scaled(24, 121, 109, 161));
        assert_eq!(scaled_norm("LSLSLL"), scaled(12, 121, 6363, 10391));
        assert_eq!(scaled_norm("LSLLS"), scaled(6, 1, 73, 118));
        assert_eq!(scaled_norm("LLSLL"), scaled(24, 121, 151, 130));
    }

    #[test]
    fn routes_agree_on_linear_targets() {
        let seq = fib(-40, 40);
        let classes = scaling_classes(&seq, 2).unwrap();
        for eq in wavelet_scaling_equations(&seq, &theta(), 2).unwrap() {
            let general =
                refine_general(&eq.table.target, &eq.wavelet.zeta, &seq, &classes).unwrap();
            assert_eq!(eq.table.terms, general.terms, "routes differ for {}", eq.table.target);
        }
        for k in [0i64, -2, -1] {
            let word = seq.word(k, 2).unwrap();
            let target = bspline(&seq, k, 2)
                .unwrap()
                .precompose_scale_shift(&theta().inv().unwrap(), &q(0, 0))
                .unwrap();
            let label = format!("phi_{}", word_string(&word));
            let linear = refine_linear(&label, &target, &seq, &classes).unwrap();
            let general = refine_general(&label, &target, &seq, &classes).unwrap();
            assert_eq!(linear.terms, general.terms);
        }
    }

    #[test]
    fn two_scale_composition_is_consistent() {
        let seq = fib(-40, 40);
        let classes = scaling_classes(&seq, 2).unwrap();
        let first = scaling_equation_at(&seq, &theta(), 2, 0).unwrap();

        let mut composed: Vec<(Vec<Letter>, QuadRat, QuadRat)> = Vec::new();
        for term in &first.terms {
            let j = find_node(&seq, &term.translate).unwrap();
            let inner = scaling_equation_at(&seq, &theta(), 2, j).unwrap();
            for t in &inner.terms {
                let coefficient = &term.coefficient * &t.coefficient;
                match composed
                    .iter_mut()
                    .find(|(w, tr, _)| w == &t.word && tr == &t.translate)
                {
                    Some((_, _, acc)) => *acc = &*acc + &coefficient,
                    None => composed.push((t.word.clone(), t.translate.clone(), coefficient)),
                }
            }
        }
        composed.retain(|(_, _, c)| !c.is_zero());
        composed.sort_by(|a, b| a.1.total_cmp(&b.1));

        let theta_sq = &theta() * &theta();
        let direct_target = bspline(&seq, 0, 2)
            .unwrap()
            .precompose_scale_shift(&theta_sq.inv().unwrap(), &q(0, 0))
            .unwrap();
        let direct = refine_linear("phi_LL", &direct_target, &seq, &classes).unwrap();

        assert_eq!(composed.len(), direct.terms.len());
        for ((word, translate, coefficient), term) in composed.iter().zip(&direct.terms) {
            assert_eq!(word, &term.word);
            assert_eq!(translate, &term.translate);
            assert_eq!(coefficient, &term.coefficient);
        }
    }

    #[test]
    fn general_route_handles_quadratic_splines() {
        let seq = fib(-20, 20);
        let table = scaling_equation_at(&seq, &theta(), 3, 0).unwrap();
        assert!(table.terms.len() > 1);
        assert!(table.terms.iter().all(|t| !t.coefficient.is_zero()));
        let classes = scaling_classes(&seq, 3).unwrap();
        let target = bspline(&seq, 0, 3)
            .unwrap()
            .precompose_scale_shift(&theta().inv().unwrap(), &q(0, 0))
            .unwrap();
        assert!(matches!(
            refine_linear("phi", &target, &seq, &classes),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn degenerate_and_error_paths() {
        let seq = fib(-12, 12);
        let classes = scaling_classes(&seq, 2).unwrap();
        let zero = PiecewisePoly::new(t(), vec![q(0, 0), q(1, 0)], vec![vec![]]).unwrap();
        let table = refine_linear("zero", &zero, &seq, &classes).unwrap();
        assert!(table.terms.is_empty());
        assert!(refine_general("zero", &zero, &seq, &classes)
            .unwrap()
            .terms
            .is_empty());

        let half = QuadRat::from_ratio(t(), 1, 2, 0, 1);
        let kinked = PiecewisePoly::from_linear_pieces(
            t(),
            vec![q(0, 0), half.clone(), q(1, 0)],
            &[(q(2, 0), q(0, 0)), (q(-2, 0), q(1, 0))],
        )
        .unwrap();
        assert!(matches!(
            refine_linear("kinked", &kinked, &seq, &classes),
            Err(Error::NotInSpan(_))
        ));
        assert!(matches!(
            refine_general("kinked", &kinked, &seq, &classes),
            Err(Error::NotInSpan(_))
        ));

        let jump = PiecewisePoly::new(
            t(),
            vec![q(0, 0), q(1, 0), q(2, 0)],
            vec![vec![q(0, 0), q(1, 0)], vec![q(2, 0), q(-1, 0)]],
        )
        .unwrap();
        assert!(matches!(
            refine_linear("jump", &jump, &seq, &classes),
            Err(Error::NotInSpan(_))
        ));

        let far = bspline(&seq, 0, 2).unwrap().translate(&q(100, 0));
        assert!(matches!(
            refine_linear("far", &far, &seq, &classes),
            Err(Error::SequenceTooShort(_))
        ));
    }
}
