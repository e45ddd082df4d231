//! Spline wavelets on self-similar node sequences.
//!
//! The construction runs in four exact steps. `compute_e` finds the node
//! indices whose successor drops out of the scaled set `theta * Lambda`;
//! each such index seeds a wavelet. `support_plan` grows the minimal
//! support window whose letter word determines the wavelet shape.
//! `build_psi_spline` solves the square interpolation system for the
//! auxiliary spline `Psi` (degree `2s - 1`, maximal smoothness, vanishing
//! on `theta * Lambda` inside its support), and differentiating `s` times
//! yields the piecewise polynomial `zeta` with `s` vanishing moments. The
//! mother wavelet is `zeta(theta x)` normalized; its squared norm stays in
//! the quadratic field, so only the final square root is symbolic.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::linalg;
use crate::quadfield::QuadRat;
use crate::spline::PiecewisePoly;
use crate::tiling::{classify_words, Letter, ModelSetSpec, NodeSequence, SequenceSource};

/// Indices `n` (within the generated range) with `node(n+1)` outside
/// `theta * Lambda`; every wavelet support starts at such an index.
///
/// On the Fibonacci chain with `theta = tau^2` these are exactly the
/// positions carrying the letter `L`, which is asserted.
pub fn compute_e(seq: &NodeSequence, theta: &QuadRat) -> Result<Vec<i64>> {
    let (lo, hi) = seq.letter_range();
    let mut out = Vec::new();
    let golden_chain = seq.source() == SequenceSource::FibonacciChain
        && theta == &QuadRat::from_pq_int(seq.field(), 1, 1);
    for n in lo..=hi {
        let inside = seq.in_theta_lambda(seq.node(n + 1), theta)?;
        if golden_chain {
            assert_eq!(
                seq.letter(n) == Letter::L,
                !inside,
                "chain membership must mirror the letter at {n}"
            );
        }
        if !inside {
            out.push(n);
        }
    }
    Ok(out)
}

/// Minimal wavelet support starting at `n`: the word, its length, and the
/// interior nodes that belong to `theta * Lambda`.
#[derive(Debug, Clone)]
pub struct WaveletSupportPlan {
    pub n: i64,
    /// Number of tiles in the support (the word length).
    pub big_n: usize,
    pub word: Vec<Letter>,
    /// Indices `k` with `node(k)` in `theta * Lambda`, `n < k < n + big_n`.
    pub theta_points_inside: Vec<i64>,
    /// Polynomial order of the interpolating spline, always `2s`.
    pub s2: usize,
}

/// Finds the smallest support length `N` with
/// `N = s2 + #(theta points strictly inside)`, starting from index `n`,
/// which must satisfy the `compute_e` condition.
pub fn support_plan(
    seq: &NodeSequence,
    theta: &QuadRat,
    n: i64,
    s2: usize,
) -> Result<WaveletSupportPlan> {
    if s2 < 2 || s2 % 2 != 0 {
        return Err(Error::ParameterOutOfRange(format!(
            "spline order {s2} must be an even number >= 2"
        )));
    }
    if seq.in_theta_lambda(seq.node(n + 1), theta)? {
        return Err(Error::InvalidArgument(format!(
            "index {n} does not start a wavelet: its successor stays in the scaled set"
        )));
    }
    let (_, node_hi) = seq.index_range();
    let mut inside: Vec<i64> = Vec::new();
    let mut big_n = s2;
    // Seed the interior memberships for the initial window.
    for k in (n + 1)..(n + big_n as i64) {
        if k >= node_hi {
            return Err(Error::SequenceTooShort(format!(
                "support search from {n} ran past the generated range"
            )));
        }
        if seq.in_theta_lambda(seq.node(k), theta)? {
            inside.push(k);
        }
    }
    loop {
        if big_n == s2 + inside.len() {
            break;
        }
        let k = n + big_n as i64;
        if k >= node_hi {
            return Err(Error::SequenceTooShort(format!(
                "support search from {n} ran past the generated range"
            )));
        }
        if seq.in_theta_lambda(seq.node(k), theta)? {
            inside.push(k);
        }
        big_n += 1;
    }
    // Sanity: the interior then holds exactly s2 - 1 complementary nodes.
    assert_eq!(
        big_n - 1 - inside.len(),
        s2 - 1,
        "support interior must hold s2 - 1 nodes outside the scaled set"
    );
    Ok(WaveletSupportPlan {
        n,
        big_n,
        word: seq.word(n, big_n)?,
        theta_points_inside: inside,
        s2,
    })
}

/// Support plans for the distinct mother wavelets of a sequence, one per
/// word, in order of first appearance scanning the seed indices upward.
/// For `s` vanishing moments there are exactly `2s` of them.
pub fn mother_wavelet_plans(
    seq: &NodeSequence,
    theta: &QuadRat,
    s: usize,
) -> Result<Vec<WaveletSupportPlan>> {
    if s < 2 {
        return Err(Error::ParameterOutOfRange(
            "mother wavelets need at least 2 vanishing moments".into(),
        ));
    }
    let mut plans: Vec<WaveletSupportPlan> = Vec::new();
    let mut seen: HashSet<Vec<Letter>> = HashSet::new();
    for n in compute_e(seq, theta)? {
        let plan = match support_plan(seq, theta, n, 2 * s) {
            Ok(p) => p,
            // Seeds too close to the right edge cannot finish their word.
            Err(Error::SequenceTooShort(_)) => continue,
            Err(e) => return Err(e),
        };
        if seen.insert(plan.word.clone()) {
            plans.push(plan);
        }
    }
    if plans.len() != 2 * s {
        return Err(Error::WindowTooSmall(format!(
            "found {} distinct wavelet words, expected {}; enlarge the window",
            plans.len(),
            2 * s
        )));
    }
    Ok(plans)
}

/// The distinct wavelet words themselves.
pub fn enumerate_mother_words(
    seq: &NodeSequence,
    theta: &QuadRat,
    s: usize,
) -> Result<Vec<Vec<Letter>>> {
    Ok(mother_wavelet_plans(seq, theta, s)?
        .into_iter()
        .map(|p| p.word)
        .collect())
}

/// Value of `d^m/dt^m t^j` at `t`.
fn monomial_derivative(
    field: crate::quadfield::FieldSpec,
    j: usize,
    m: usize,
    t: &QuadRat,
) -> QuadRat {
    if j < m {
        return QuadRat::zero(field);
    }
    let mut c = QuadRat::one(field);
    for i in (j - m + 1)..=j {
        c = &c * &QuadRat::from_int(field, i as i64);
    }
    let mut pw = QuadRat::one(field);
    for _ in 0..(j - m) {
        pw = &pw * t;
    }
    &c * &pw
}

/// Solves for the auxiliary spline `Psi` of a support plan: degree
/// `s2 - 1` pieces on the support tiles, smooth to order `s2 - 2` against
/// the zero extension, vanishing at every interior node of
/// `theta * Lambda`, and taking the value `u` at the first interior node.
///
/// The constraint count matches the unknown count exactly; a singular
/// system therefore signals a wrong support plan rather than a tolerance
/// problem, and is reported as an error.
pub fn build_psi_spline(
    seq: &NodeSequence,
    plan: &WaveletSupportPlan,
    u: &QuadRat,
) -> Result<PiecewisePoly> {
    if u.is_zero() {
        return Err(Error::InvalidArgument("interpolation value must be nonzero".into()));
    }
    let field = seq.field();
    let s2 = plan.s2;
    let big_n = plan.big_n;
    let unknowns = big_n * s2;
    let zero = QuadRat::zero(field);

    let breakpoints: Vec<QuadRat> = (plan.n..=plan.n + big_n as i64)
        .map(|k| seq.node(k).clone())
        .collect();
    let lengths: Vec<QuadRat> = breakpoints
        .windows(2)
        .map(|w| &w[1] - &w[0])
        .collect();

    let mut rows: Vec<Vec<QuadRat>> = Vec::with_capacity(unknowns);
    let mut rhs: Vec<QuadRat> = Vec::with_capacity(unknowns);
    let var = |piece: usize, power: usize| piece * s2 + power;

    // Zero extension on the left: derivatives 0..s2-2 of piece 0 at its
    // left end.
    for m in 0..(s2 - 1) {
        let mut row = vec![zero.clone(); unknowns];
        row[var(0, m)] = monomial_derivative(field, m, m, &zero);
        rows.push(row);
        rhs.push(zero.clone());
    }
    // Interior smoothness, left to right.
    for i in 1..big_n {
        for m in 0..(s2 - 1) {
            let mut row = vec![zero.clone(); unknowns];
            for j in m..s2 {
                row[var(i - 1, j)] = monomial_derivative(field, j, m, &lengths[i - 1]);
            }
            row[var(i, m)] = -&monomial_derivative(field, m, m, &zero);
            rows.push(row);
            rhs.push(zero.clone());
        }
    }
    // Zero extension on the right.
    for m in 0..(s2 - 1) {
        let mut row = vec![zero.clone(); unknowns];
        for j in m..s2 {
            row[var(big_n - 1, j)] = monomial_derivative(field, j, m, &lengths[big_n - 1]);
        }
        rows.push(row);
        rhs.push(zero.clone());
    }
    // Zeros on the scaled set inside the support.
    for &k in &plan.theta_points_inside {
        let piece = (k - plan.n) as usize;
        let mut row = vec![zero.clone(); unknowns];
        row[var(piece, 0)] = QuadRat::one(field);
        rows.push(row);
        rhs.push(zero.clone());
    }
    // Interpolation at the first interior node.
    let mut row = vec![zero.clone(); unknowns];
    row[var(1, 0)] = QuadRat::one(field);
    rows.push(row);
    rhs.push(u.clone());

    if rows.len() != unknowns {
        return Err(Error::RankDeficient(format!(
            "{} constraints against {} coefficients ({} smoothness, {} zeros, 1 interpolation)",
            rows.len(),
            unknowns,
            (big_n + 1) * (s2 - 1),
            plan.theta_points_inside.len(),
        )));
    }
    let coeffs = linalg::solve_square(&rows, &rhs)?;
    let pieces: Vec<Vec<QuadRat>> = (0..big_n)
        .map(|i| coeffs[i * s2..(i + 1) * s2].to_vec())
        .collect();
    PiecewisePoly::new(field, breakpoints, pieces)
}

/// The `s`-th derivative of `Psi`: piecewise degree `s - 1`, continuous to
/// order `s - 2`, with `s` exactly vanishing moments (all asserted).
pub fn zeta_from_psi(psi: &PiecewisePoly, s: usize) -> Result<PiecewisePoly> {
    if s < 2 {
        return Err(Error::ParameterOutOfRange(
            "the derivative order must be at least 2".into(),
        ));
    }
    let mut zeta = psi.clone();
    for _ in 0..s {
        zeta = zeta.derivative();
    }
    assert!(
        zeta.is_smooth_to_order(s - 2),
        "derivative must stay continuous to order s - 2"
    );
    for k in 0..s {
        assert!(
            zeta.moment(k).is_zero(),
            "moment {k} of the derivative must vanish"
        );
    }
    Ok(zeta)
}

/// A mother wavelet: the shape `zeta`, its `theta`-compressed version, and
/// the exact squared norm of the compressed version. The normalized
/// wavelet is `zeta_scaled / sqrt(norm_sq)`; the square root never needs
/// to be evaluated except for display.
#[derive(Debug, Clone)]
pub struct MotherWavelet {
    pub plan: WaveletSupportPlan,
    pub zeta: PiecewisePoly,
    /// `zeta(theta x)`.
    pub zeta_scaled: PiecewisePoly,
    /// Exact `|zeta|^2`.
    pub norm_sq: QuadRat,
    /// Exact `|zeta(theta x)|^2 = |zeta|^2 / theta`.
    pub norm_sq_scaled: QuadRat,
    /// Acceptance window of the support word: the wavelet's translates sit
    /// at `theta^{-1} * lambda` for chain points `lambda` whose conjugate
    /// falls in this window. Absent when the sequence carries no window.
    pub translation_window: Option<ModelSetSpec>,
}

/// Builds the mother wavelet of a support plan with the interpolation
/// convention `Psi(node(n+1)) = 1`.
pub fn mother_wavelet(
    seq: &NodeSequence,
    theta: &QuadRat,
    plan: &WaveletSupportPlan,
) -> Result<MotherWavelet> {
    let field = seq.field();
    let one = QuadRat::one(field);
    let psi = build_psi_spline(seq, plan, &one)?;
    let s = plan.s2 / 2;
    let zeta = zeta_from_psi(&psi, s)?;
    let zeta_scaled = zeta.precompose_scale_shift(theta, &QuadRat::zero(field))?;
    let norm_sq = zeta.norm_sq();
    let norm_sq_scaled = zeta_scaled.norm_sq();
    assert_eq!(
        &norm_sq_scaled * theta,
        norm_sq,
        "squared norms must scale by the compression factor"
    );
    let translation_window = match seq.window() {
        None => None,
        Some(_) => classify_words(seq, plan.big_n)
            .ok()
            .and_then(|classes| {
                classes
                    .into_iter()
                    .find(|c| c.word == plan.word)
                    .map(|c| c.window)
            }),
    };
    Ok(MotherWavelet {
        plan: plan.clone(),
        zeta,
        zeta_scaled,
        norm_sq,
        norm_sq_scaled,
        translation_window,
    })
}

/// All mother wavelets of a sequence for `s` vanishing moments.
pub fn mother_wavelets(
    seq: &NodeSequence,
    theta: &QuadRat,
    s: usize,
) -> Result<Vec<MotherWavelet>> {
    mother_wavelet_plans(seq, theta, s)?
        .iter()
        .map(|plan| mother_wavelet(seq, theta, plan))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::FieldSpec;
    use crate::tiling::{
        generate_fibonacci_chain, integer_lattice, word_string,
    };

    fn t() -> FieldSpec {
        FieldSpec::golden()
    }

    fn q(p: i64, qc: i64) -> QuadRat {
        QuadRat::from_pq_int(t(), p, qc)
    }

    /// `(num/den) * (p + q tau)`.
    fn scaled(num: i64, den: i64, p: i64, qc: i64) -> QuadRat {
        QuadRat::from_ratio(t(), num * p, den, num * qc, den)
    }

    fn fib(k_min: i64, k_max: i64) -> NodeSequence {
        generate_fibonacci_chain(&ModelSetSpec::default_fibonacci(), k_min, k_max).unwrap()
    }

    fn theta() -> QuadRat {
        q(1, 1)
    }

    #[test]
    fn seed_indices_on_the_chain_and_the_lattice() {
        let seq = fib(-5, 5);
        let e = compute_e(&seq, &theta()).unwrap();
        assert_eq!(e, vec![-5, -4, -2, 0, 1, 3, 4]);
        // Dyadic sanity: on the integers with theta = 2 the missing
        // successors are the odd nodes, so the seeds are the even indices.
        let lattice = integer_lattice(t(), -8, 8).unwrap();
        let e = compute_e(&lattice, &q(2, 0)).unwrap();
        assert_eq!(e, vec![-8, -6, -4, -2, 0, 2, 4, 6]);
    }

    #[test]
    fn support_plans_at_the_four_seeds() {
        let seq = fib(-8, 12);
        let cases: [(i64, usize, &str, usize); 4] = [
            (-5, 5, "LLSLS", 1),
            (-4, 6, "LSLSLL", 2),
            (-2, 5, "LSLLS", 1),
            (0, 5, "LLSLL", 1),
        ];
        for (n, big_n, word, inside) in cases {
            let plan = support_plan(&seq, &theta(), n, 4).unwrap();
            assert_eq!(plan.big_n, big_n, "support length at {n}");
            assert_eq!(word_string(&plan.word), word);
            assert_eq!(plan.theta_points_inside.len(), inside);
            // Minimality: one node fewer breaks the count equation.
            let shorter = plan.big_n - 1;
            let count = plan
                .theta_points_inside
                .iter()
                .filter(|&&k| k < n + shorter as i64)
                .count();
            assert_ne!(shorter, 4 + count, "support at {n} is not minimal");
        }
        assert!(matches!(
            support_plan(&seq, &theta(), -3, 4),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn mother_word_sets_and_lengths() {
        let seq = fib(-40, 40);
        let words = enumerate_mother_words(&seq, &theta(), 2).unwrap();
        let strings: Vec<String> = words.iter().map(|w| word_string(w)).collect();
        assert_eq!(strings, ["LLSLS", "LSLSLL", "LSLLS", "LLSLL"]);
        for s in [2usize, 3, 4] {
            let plans = mother_wavelet_plans(&seq, &theta(), s).unwrap();
            assert_eq!(plans.len(), 2 * s, "word count for s = {s}");
            // p = ceil((2s - 2) tau) + 1; lengths are p or p + 1.
            let stretch = QuadRat::from_pq_int(t(), 0, 2 * s as i64 - 2);
            let p = stretch.ceil().to_string().parse::<usize>().unwrap() + 1;
            for plan in &plans {
                assert!(
                    plan.big_n == p || plan.big_n == p + 1,
                    "length {} outside {{{p}, {}}} for s = {s}",
                    plan.big_n,
                    p + 1
                );
            }
        }
        let tiny = fib(-3, 3);
        assert!(matches!(
            mother_wavelet_plans(&tiny, &theta(), 2),
            Err(Error::WindowTooSmall(_))
        ));
    }

    #[test]
    fn psi_interpolates_vanishes_and_is_smooth() {
        let seq = fib(-10, 10);
        for n in [-5i64, -4, -2, 0] {
            let plan = support_plan(&seq, &theta(), n, 4).unwrap();
            let psi = build_psi_spline(&seq, &plan, &QuadRat::one(t())).unwrap();
            assert_eq!(psi.eval(seq.node(n + 1)), QuadRat::one(t()));
            for &k in &plan.theta_points_inside {
                assert!(psi.eval(seq.node(k)).is_zero(), "psi(node {k}) != 0");
            }
            assert!(psi.is_smooth_to_order(2));
            assert!(!psi.is_smooth_to_order(3));
            let (lo, hi) = psi.support();
            assert_eq!(lo, seq.node(n));
            assert_eq!(hi, seq.node(n + plan.big_n as i64));
        }
    }

    #[test]
    fn shortened_support_is_infeasible() {
        let seq = fib(-10, 10);
        let plan = support_plan(&seq, &theta(), -5, 4).unwrap();
        let mut bad = plan.clone();
        bad.big_n -= 1;
        bad.word.pop();
        bad.theta_points_inside
            .retain(|&k| k < bad.n + bad.big_n as i64);
        let err = build_psi_spline(&seq, &bad, &QuadRat::one(t())).unwrap_err();
        assert!(
            matches!(err, Error::RankDeficient(_) | Error::SingularSystem(_)),
            "unexpected error {err}"
        );
    }

    #[test]
    fn zeta_tables_for_all_four_words() {
        let seq = fib(-10, 10);
        // Per word: seed index, (slope, intercept) rows, squared norm, and
        // the decimal shadow of the norm.
        let llsls_rows = vec![
            (q(6, 0), q(0, 0)),
            (scaled(-6, 11, 1, 26), q(6, 0)),
            (scaled(12, 11, 18, 17), scaled(12, 11, 5, -13)),
            (scaled(-24, 11, 1, 4), scaled(12, 11, 4, 5)),
            (scaled(12, 11, 3, 1), scaled(12, 11, 2, -3)),
        ];
        let lslsll_rows = vec![
            (q(6, 0), q(0, 0)),
            (scaled(-24, 1, 1, 2), q(6, 0)),
            (scaled(6, 11, 91, 123), scaled(-6, 1, 3, 4)),
            (scaled(-6, 11, 127, 224), scaled(6, 11, 58, 79)),
            (scaled(21, 11, 13, 16), scaled(-18, 11, 13, 16)),
            (scaled(-3, 11, 13, 16), scaled(3, 11, 13, 16)),
        ];
        let lslls_rows = vec![
            (q(6, 0), q(0, 0)),
            (scaled(-24, 1, 1, 2), q(6, 0)),
            (scaled(3, 1, 14, 19), scaled(-6, 1, 3, 4)),
            (scaled(-3, 1, 10, 19), scaled(3, 1, 8, 11)),
            (scaled(6, 1, 4, 5), scaled(-6, 1, 1, 4)),
        ];
        let llsll_rows = vec![
            (q(6, 0), q(0, 0)),
            (scaled(-6, 11, -25, 42), q(6, 0)),
            (scaled(36, 11, 10, 3), scaled(-36, 11, -6, 7)),
            (scaled(-42, 11, -1, 3), scaled(36, 11, -1, 3)),
            (scaled(6, 11, -1, 3), scaled(-6, 11, -1, 3)),
        ];
        let cases: [(i64, &str, &[(QuadRat, QuadRat)], QuadRat, f64); 4] = [
            (-5, "LLSLS", &llsls_rows, scaled(24, 121, 270, 431), 13.8519),
            (-4, "LSLSLL", &lslsll_rows, scaled(12, 121, 16754, 27145), 77.572),
            (-2, "LSLLS", &lslls_rows, scaled(6, 1, 191, 309), 64.3882),
            (0, "LLSLL", &llsll_rows, scaled(24, 121, 281, 411), 13.6981),
        ];
        for (n, word, rows, norm_sq, norm_float) in cases {
            let plan = support_plan(&seq, &theta(), n, 4).unwrap();
            assert_eq!(word_string(&plan.word), word);
            let w = mother_wavelet(&seq, &theta(), &plan).unwrap();
            assert_eq!(w.zeta.num_pieces(), rows.len(), "piece count for {word}");
            for (i, (k, qq)) in rows.iter().enumerate() {
                let (slope, intercept) = w.zeta.linear_piece(i).unwrap();
                assert_eq!(&slope, k, "slope of piece {i} of {word}");
                assert_eq!(&intercept, qq, "intercept of piece {i} of {word}");
            }
            assert_eq!(w.norm_sq, norm_sq, "squared norm of {word}");
            let float = w.norm_sq.to_f64().sqrt();
            assert!(
                (float - norm_float).abs() < 1e-3,
                "norm of {word}: {float} vs {norm_float}"
            );
        }
    }

    #[test]
    fn compressed_norms_match_the_reported_values() {
        let seq = fib(-12, 12);
        let expected = [
            ("LLSLS", 8.561),
            ("LSLSLL", 47.942),
            ("LSLLS", 39.794),
            ("LLSLL", 8.466),
        ];
        let wavelets = mother_wavelets(&seq, &theta(), 2).unwrap();
        assert_eq!(wavelets.len(), expected.len());
        for (word, float) in expected {
            let w = wavelets
                .iter()
                .find(|w| word_string(&w.plan.word) == word)
                .unwrap();
            let got = w.norm_sq_scaled.to_f64().sqrt();
            assert!(
                (got - float).abs() < 1e-3,
                "compressed norm of {word}: {got} vs {float}"
            );
            // Exact change-of-variables identity.
            assert_eq!(&w.norm_sq_scaled * &theta(), w.norm_sq);
        }
    }

    #[test]
    fn zeta_shapes_are_class_invariants() {
        let seq = fib(-30, 30);
        let th = theta();
        // LSLLS appears at -2 and again at 1; LLSLS at -5 and 3.
        for (a, b) in [(-2i64, 1i64), (-5, 3)] {
            let pa = support_plan(&seq, &th, a, 4).unwrap();
            let pb = support_plan(&seq, &th, b, 4).unwrap();
            assert_eq!(pa.word, pb.word);
            let wa = mother_wavelet(&seq, &th, &pa).unwrap();
            let wb = mother_wavelet(&seq, &th, &pb).unwrap();
            let shift = seq.node(b) - seq.node(a);
            assert_eq!(wa.zeta.translate(&shift), wb.zeta);
        }
    }

    #[test]
    fn supports_overlap_every_tile_three_or_four_times() {
        let seq = fib(-40, 40);
        let th = theta();
        let mut plans = Vec::new();
        for n in compute_e(&seq, &th).unwrap() {
            if let Ok(p) = support_plan(&seq, &th, n, 4) {
                plans.push(p);
            }
        }
        // Middle tiles are covered by every plan that can reach them.
        for m in -20i64..20 {
            let covering = plans
                .iter()
                .filter(|p| p.n <= m && m < p.n + p.big_n as i64)
                .count();
            assert!(
                covering == 3 || covering == 4,
                "tile {m} covered {covering} times"
            );
        }
    }

    #[test]
    fn translation_windows_follow_the_word_classes() {
        let seq = fib(-40, 40);
        let wavelets = mother_wavelets(&seq, &theta(), 2).unwrap();
        for w in &wavelets {
            let window = w.translation_window.as_ref().unwrap();
            // The seed's own conjugate lies in its window.
            assert!(window.contains(&seq.node(w.plan.n).conjugate()));
        }
        // Windows of distinct words are disjoint: check the lower ends are
        // pairwise distinct.
        let mut lows: Vec<&QuadRat> = wavelets
            .iter()
            .map(|w| w.translation_window.as_ref().unwrap().lo())
            .collect();
        lows.sort_by(|a, b| a.total_cmp(b));
        for pair in lows.windows(2) {
            assert_ne!(pair[0], pair[1]);
        }
    }
}
