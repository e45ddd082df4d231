//! Piecewise-constant (Haar) scaling functions and wavelets on the two-tile
//! discretizations.
//!
//! The long tile carries the unit indicator `phi_L` and the short tile the
//! normalized indicator `phi_S`.  Both refine exactly under the inflation
//! `x -> beta x`, and Gram-Schmidt inside a single inflated tile produces an
//! orthonormal wavelet family on the nonnegative half-line.  A second,
//! shift-friendlier family keeps one wavelet per ordered tile pair (`LL`,
//! `LS`, `SL`) at the price of orthonormality between translates.
//!
//! Every function here is a rational-profile step function times the square
//! root of a field element, so all computations stay exact: [`RootScaled`]
//! carries the scalar part and [`HaarFunction`] the function part.

use std::fmt;

use crate::error::{Error, Result};
use crate::quadfield::{Family, FieldSpec, QuadRat};
use crate::spline::PiecewisePoly;
use crate::tiling::{Letter, NodeSequence, SubstitutionRule};

/// A scalar of the form `coeff * sqrt(radicand)` with both parts in the
/// field.  The radicand must be nonnegative; zero values are normalized to
/// `0 * sqrt(1)` so equality and signs stay simple.
#[derive(Debug, Clone)]
pub struct RootScaled {
    coeff: QuadRat,
    radicand: QuadRat,
}

impl RootScaled {
    /// Panics if the radicand is negative; that is a caller bug, not data.
    pub fn new(coeff: QuadRat, radicand: QuadRat) -> RootScaled {
        assert!(
            radicand.sign() >= 0,
            "RootScaled radicand must be nonnegative"
        );
        if coeff.is_zero() || radicand.is_zero() {
            let field = coeff.field();
            return RootScaled {
                coeff: QuadRat::zero(field),
                radicand: QuadRat::one(field),
            };
        }
        RootScaled { coeff, radicand }
    }

    pub fn rational(value: QuadRat) -> RootScaled {
        let field = value.field();
        RootScaled::new(value, QuadRat::one(field))
    }

    pub fn sqrt_of(radicand: QuadRat) -> RootScaled {
        let field = radicand.field();
        RootScaled::new(QuadRat::one(field), radicand)
    }

    pub fn zero(field: FieldSpec) -> RootScaled {
        RootScaled::rational(QuadRat::zero(field))
    }

    pub fn one(field: FieldSpec) -> RootScaled {
        RootScaled::rational(QuadRat::one(field))
    }

    pub fn coeff(&self) -> &QuadRat {
        &self.coeff
    }

    pub fn radicand(&self) -> &QuadRat {
        &self.radicand
    }

    pub fn field(&self) -> FieldSpec {
        self.coeff.field()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn sign(&self) -> i32 {
        self.coeff.sign()
    }

    /// The exact square `coeff^2 * radicand`, always a plain field element.
    pub fn square(&self) -> QuadRat {
        &(&self.coeff * &self.coeff) * &self.radicand
    }

    pub fn mul(&self, other: &RootScaled) -> RootScaled {
        RootScaled::new(&self.coeff * &other.coeff, &self.radicand * &other.radicand)
    }

    pub fn scale(&self, c: &QuadRat) -> RootScaled {
        RootScaled::new(&self.coeff * c, self.radicand.clone())
    }

    pub fn neg(&self) -> RootScaled {
        RootScaled {
            coeff: -&self.coeff,
            radicand: self.radicand.clone(),
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.coeff.to_f64() * self.radicand.to_f64().sqrt()
    }
}

impl PartialEq for RootScaled {
    /// Representation-independent: `2 sqrt(2)` equals `sqrt(8)`.
    fn eq(&self, other: &RootScaled) -> bool {
        self.sign() == other.sign() && self.square() == other.square()
    }
}

impl fmt::Display for RootScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = self.field();
        if self.radicand == QuadRat::one(field) {
            return write!(f, "{}", self.coeff.canonical_string());
        }
        if self.coeff == QuadRat::one(field) {
            return write!(f, "sqrt({})", self.radicand.canonical_string());
        }
        if self.coeff == -&QuadRat::one(field) {
            return write!(f, "-sqrt({})", self.radicand.canonical_string());
        }
        write!(
            f,
            "({}) * sqrt({})",
            self.coeff.canonical_string(),
            self.radicand.canonical_string()
        )
    }
}

/// A step function `profile(x) * sqrt(radicand)` with a rational-profile
/// [`PiecewisePoly`] of degree zero.  Closed under translation, dilation and
/// the inner products used by the Haar constructions.
#[derive(Debug, Clone)]
pub struct HaarFunction {
    profile: PiecewisePoly,
    radicand: QuadRat,
}

impl HaarFunction {
    pub fn new(profile: PiecewisePoly, radicand: QuadRat) -> Result<HaarFunction> {
        if radicand.field() != profile.field() {
            return Err(Error::FieldMismatch);
        }
        if radicand.sign() <= 0 {
            return Err(Error::InvalidArgument(
                "the scale factor under the square root must be positive".into(),
            ));
        }
        for i in 0..profile.num_pieces() {
            if profile.piece(i).len() > 1 {
                return Err(Error::InvalidArgument(
                    "Haar functions are piecewise constant".into(),
                ));
            }
        }
        Ok(HaarFunction { profile, radicand })
    }

    pub fn field(&self) -> FieldSpec {
        self.profile.field()
    }

    pub fn profile(&self) -> &PiecewisePoly {
        &self.profile
    }

    pub fn radicand(&self) -> &QuadRat {
        &self.radicand
    }

    pub fn support(&self) -> (&QuadRat, &QuadRat) {
        self.profile.support()
    }

    pub fn is_zero(&self) -> bool {
        self.profile.is_zero()
    }

    pub fn eval(&self, x: &QuadRat) -> RootScaled {
        RootScaled::new(self.profile.eval(x), self.radicand.clone())
    }

    pub fn integral(&self) -> RootScaled {
        RootScaled::new(self.profile.definite_integral(), self.radicand.clone())
    }

    pub fn inner_product(&self, other: &HaarFunction) -> Result<RootScaled> {
        let pairing = self.profile.inner_product(&other.profile)?;
        Ok(RootScaled::new(pairing, &self.radicand * &other.radicand))
    }

    pub fn norm_sq(&self) -> QuadRat {
        &self.profile.norm_sq() * &self.radicand
    }

    pub fn translate(&self, d: &QuadRat) -> HaarFunction {
        HaarFunction {
            profile: self.profile.translate(d),
            radicand: self.radicand.clone(),
        }
    }

    /// The function `x -> f(a x + b)` for `a > 0`.
    pub fn precompose_scale_shift(&self, a: &QuadRat, b: &QuadRat) -> Result<HaarFunction> {
        Ok(HaarFunction {
            profile: self.profile.precompose_scale_shift(a, b)?,
            radicand: self.radicand.clone(),
        })
    }

    /// Multiplies the function by `sqrt(w)` for positive `w`, folding the
    /// factor into the radicand.
    pub fn mul_sqrt(&self, w: &QuadRat) -> Result<HaarFunction> {
        if w.sign() <= 0 {
            return Err(Error::InvalidArgument(
                "square-root factors must be positive".into(),
            ));
        }
        Ok(HaarFunction {
            profile: self.profile.clone(),
            radicand: &self.radicand * w,
        })
    }

    pub fn scale_by(&self, c: &RootScaled) -> HaarFunction {
        if c.is_zero() {
            return HaarFunction {
                profile: self.profile.scalar_mul(c.coeff()),
                radicand: QuadRat::one(self.field()),
            };
        }
        HaarFunction {
            profile: self.profile.scalar_mul(c.coeff()),
            radicand: &self.radicand * c.radicand(),
        }
    }

    /// Exact linear combination `sum c_k f_k`.  All effective terms must
    /// realize radicands that differ from the first one by square factors;
    /// otherwise the sum leaves the representable class and this errors.
    pub fn combine(terms: &[(RootScaled, &HaarFunction)]) -> Result<HaarFunction> {
        let Some((_, first)) = terms.first() else {
            return Err(Error::InvalidArgument(
                "a Haar combination needs at least one term".into(),
            ));
        };
        let field = first.field();
        if terms
            .iter()
            .any(|(c, f)| c.field() != field || f.field() != field)
        {
            return Err(Error::FieldMismatch);
        }
        let mut target: Option<QuadRat> = None;
        let mut parts: Vec<(QuadRat, &PiecewisePoly)> = Vec::new();
        for (c, f) in terms {
            if c.is_zero() || f.is_zero() {
                continue;
            }
            let w = c.radicand() * &f.radicand;
            let t = target.get_or_insert_with(|| w.clone());
            let ratio = w.checked_div(t)?;
            let Some(s) = ratio.sqrt() else {
                return Err(Error::InvalidArgument(
                    "term radicands differ by a non-square factor".into(),
                ));
            };
            parts.push((c.coeff() * &s, &f.profile));
        }
        let Some(radicand) = target else {
            let zero = QuadRat::zero(field);
            let one = QuadRat::one(field);
            let profile = PiecewisePoly::new(field, vec![zero, one.clone()], vec![vec![]])?;
            return Ok(HaarFunction {
                profile,
                radicand: one,
            });
        };
        let profile = PiecewisePoly::linear_combination(&parts)?;
        Ok(HaarFunction { profile, radicand })
    }
}

impl PartialEq for HaarFunction {
    /// Pointwise comparison on the merged breakpoint grid; the stored
    /// radicands may differ as long as the functions agree.
    fn eq(&self, other: &HaarFunction) -> bool {
        if self.field() != other.field() {
            return false;
        }
        let mut cuts: Vec<QuadRat> = self
            .profile
            .breakpoints()
            .iter()
            .chain(other.profile.breakpoints().iter())
            .cloned()
            .collect();
        cuts.sort_by(|a, b| a.total_cmp(b));
        cuts.dedup();
        cuts.iter()
            .take(cuts.len().saturating_sub(1))
            .all(|x| self.eval(x) == other.eval(x))
    }
}

fn unit_indicator(field: FieldSpec, lo: QuadRat, hi: QuadRat) -> PiecewisePoly {
    PiecewisePoly::new(field, vec![lo, hi], vec![vec![QuadRat::one(field)]])
        .expect("indicator interval is valid")
}

fn inv_beta(field: FieldSpec) -> QuadRat {
    field.beta().inv().expect("beta is nonzero")
}

/// The pair `(phi_L, phi_S)`: the unit indicator of the long tile and the
/// L2-normalized indicator of the short tile.
pub fn haar_scaling(field: FieldSpec) -> (HaarFunction, HaarFunction) {
    let rule = SubstitutionRule::for_field(field);
    let zero = QuadRat::zero(field);
    let one = QuadRat::one(field);
    let phi_l = HaarFunction {
        profile: unit_indicator(field, zero.clone(), one.clone()),
        radicand: one,
    };
    let len_s = rule.tile_len(Letter::S).clone();
    let phi_s = HaarFunction {
        profile: unit_indicator(field, zero, len_s.clone()),
        radicand: len_s.inv().expect("short tile has positive length"),
    };
    (phi_l, phi_s)
}

/// Splits a tile of the given type into its `beta`-contracted subtiles.
/// Returns `(letter, offset)` pairs with offsets relative to the tile's left
/// end, in left-to-right order.
pub fn fine_tiles(field: FieldSpec, letter: Letter) -> Vec<(Letter, QuadRat)> {
    let rule = SubstitutionRule::for_field(field);
    let ib = inv_beta(field);
    let mut offset = QuadRat::zero(field);
    let mut out = Vec::new();
    for &l in rule.image(letter) {
        out.push((l, offset.clone()));
        offset = &offset + &(rule.tile_len(l) * &ib);
    }
    out
}

/// The mirror image of [`fine_tiles`], used on the negative half-line where
/// the two-sided point sets are reflections of the positive ones.
pub fn fine_tiles_mirrored(field: FieldSpec, letter: Letter) -> Vec<(Letter, QuadRat)> {
    let rule = SubstitutionRule::for_field(field);
    let ib = inv_beta(field);
    let mut offset = QuadRat::zero(field);
    let mut out = Vec::new();
    for &l in rule.image(letter).iter().rev() {
        out.push((l, offset.clone()));
        offset = &offset + &(rule.tile_len(l) * &ib);
    }
    out
}

/// The orthonormal scaling functions of the refined tiling restricted to one
/// tile: each subtile's normalized indicator, in left-to-right order.
pub fn fine_scaling_basis(field: FieldSpec, letter: Letter) -> Result<Vec<HaarFunction>> {
    let (phi_l, phi_s) = haar_scaling(field);
    let beta = field.beta();
    let mut out = Vec::new();
    for (l, off) in fine_tiles(field, letter) {
        let mother = match l {
            Letter::L => &phi_l,
            Letter::S => &phi_s,
        };
        let shifted = mother.precompose_scale_shift(&beta, &-&(&beta * &off))?;
        out.push(shifted.mul_sqrt(&beta)?);
    }
    Ok(out)
}

/// One term of a two-scale identity: `coefficient * mother(beta x - shift)`.
#[derive(Debug, Clone)]
pub struct HaarRefinementTerm {
    pub letter: Letter,
    pub shift: QuadRat,
    pub coefficient: RootScaled,
    pub function: HaarFunction,
}

/// A verified two-scale identity for one scaling function.
#[derive(Debug, Clone)]
pub struct HaarRefinementRule {
    pub label: String,
    pub lhs: HaarFunction,
    pub terms: Vec<HaarRefinementTerm>,
}

impl HaarRefinementRule {
    /// Re-derives the left-hand side from the terms and compares exactly.
    pub fn verify(&self) -> Result<bool> {
        let terms: Vec<(RootScaled, &HaarFunction)> = self
            .terms
            .iter()
            .map(|t| (t.coefficient.clone(), &t.function))
            .collect();
        Ok(HaarFunction::combine(&terms)? == self.lhs)
    }
}

fn refinement_rule(
    field: FieldSpec,
    label: &str,
    lhs: &HaarFunction,
    spec: &[(Letter, i64, RootScaled)],
) -> Result<HaarRefinementRule> {
    let (phi_l, phi_s) = haar_scaling(field);
    let beta = field.beta();
    let mut terms = Vec::with_capacity(spec.len());
    for (letter, shift, coefficient) in spec {
        let mother = match letter {
            Letter::L => &phi_l,
            Letter::S => &phi_s,
        };
        let shift = QuadRat::from_int(field, *shift);
        let function = mother.precompose_scale_shift(&beta, &-&shift)?;
        terms.push(HaarRefinementTerm {
            letter: *letter,
            shift,
            coefficient: coefficient.clone(),
            function,
        });
    }
    let rule = HaarRefinementRule {
        label: label.to_string(),
        lhs: lhs.clone(),
        terms,
    };
    assert!(rule.verify()?, "two-scale identity failed for {label}");
    Ok(rule)
}

/// The two-scale identities for `phi_L` and `phi_S`, verified exactly on
/// construction.  Shifts are the integers `l` in `mother(beta x - l)`.
pub fn haar_refinement(field: FieldSpec) -> Result<Vec<HaarRefinementRule>> {
    let (phi_l, phi_s) = haar_scaling(field);
    let a = i64::from(field.a());
    let one = RootScaled::one(field);
    let rule = SubstitutionRule::for_field(field);
    let len_s = rule.tile_len(Letter::S).clone();
    let mut l_spec: Vec<(Letter, i64, RootScaled)> = Vec::new();
    let mut s_spec: Vec<(Letter, i64, RootScaled)> = Vec::new();
    match field.family() {
        Family::Minus => {
            for l in 0..a {
                l_spec.push((Letter::L, l, one.clone()));
            }
            l_spec.push((Letter::S, a, RootScaled::sqrt_of(inv_beta(field))));
            s_spec.push((Letter::L, 0, RootScaled::sqrt_of(field.beta())));
        }
        Family::Plus => {
            for l in 0..a - 1 {
                l_spec.push((Letter::L, l, one.clone()));
            }
            l_spec.push((Letter::S, a - 1, RootScaled::sqrt_of(len_s.clone())));
            let inv_len = len_s.inv().expect("short tile has positive length");
            for l in 0..a - 2 {
                s_spec.push((Letter::L, l, RootScaled::sqrt_of(inv_len.clone())));
            }
            s_spec.push((Letter::S, a - 2, one));
        }
    }
    Ok(vec![
        refinement_rule(field, "phi_L", &phi_l, &l_spec)?,
        refinement_rule(field, "phi_S", &phi_s, &s_spec)?,
    ])
}

/// Gram-Schmidt over rational-profile step functions.  Returns unit vectors;
/// the intermediate unnormalized vectors stay in the rational class, so the
/// only irrationality is the final normalization, which the radicand absorbs.
pub fn orthonormalize(profiles: &[PiecewisePoly]) -> Result<Vec<HaarFunction>> {
    let Some(first) = profiles.first() else {
        return Err(Error::InvalidArgument(
            "orthonormalization needs at least one function".into(),
        ));
    };
    let field = first.field();
    let mut basis: Vec<PiecewisePoly> = Vec::with_capacity(profiles.len());
    let mut norms: Vec<QuadRat> = Vec::with_capacity(profiles.len());
    for (k, f) in profiles.iter().enumerate() {
        let mut terms: Vec<(QuadRat, &PiecewisePoly)> = vec![(QuadRat::one(field), f)];
        let mut coeffs = Vec::with_capacity(basis.len());
        for (u, n) in basis.iter().zip(&norms) {
            let c = f.inner_product(u)?.checked_div(n)?;
            coeffs.push(-&c);
        }
        for (c, u) in coeffs.iter().zip(&basis) {
            terms.push((c.clone(), u));
        }
        let u = PiecewisePoly::linear_combination(&terms)?;
        let n = u.norm_sq();
        if n.sign() <= 0 {
            return Err(Error::RankDeficient(format!(
                "function {k} is in the span of its predecessors"
            )));
        }
        basis.push(u);
        norms.push(n);
    }
    basis
        .into_iter()
        .zip(norms)
        .map(|(u, n)| HaarFunction::new(u, n.inv()?))
        .collect()
}

/// Which Haar wavelet family to construct.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HaarVariant {
    /// Fully orthonormal; covers the nonnegative half-line only.
    Orthonormal,
    /// One wavelet per ordered tile pair; a Riesz basis over both half-lines.
    Riesz,
}

/// A mother wavelet together with the tile word that governs where its
/// translates sit.
#[derive(Debug, Clone)]
pub struct HaarWavelet {
    pub label: String,
    pub word: Vec<Letter>,
    pub function: HaarFunction,
}

/// Orthonormal detail generators, one tile type at a time: Gram-Schmidt on
/// the coarse indicator followed by the refined long-tile indicators, with
/// the leading scaling direction dropped.
pub fn haar_orthonormal_wavelets(field: FieldSpec) -> Result<Vec<HaarWavelet>> {
    let rule = SubstitutionRule::for_field(field);
    let ib = inv_beta(field);
    let mut out = Vec::new();
    let tile_types: &[Letter] = match field.family() {
        Family::Minus => &[Letter::L],
        Family::Plus => &[Letter::L, Letter::S],
    };
    for &letter in tile_types {
        let zero = QuadRat::zero(field);
        let coarse = unit_indicator(field, zero, rule.tile_len(letter).clone());
        let mut profiles = vec![coarse];
        for (l, off) in fine_tiles(field, letter) {
            if l == Letter::L {
                profiles.push(unit_indicator(field, off.clone(), &off + &ib));
            }
        }
        if profiles.len() == 1 {
            continue;
        }
        let ortho = orthonormalize(&profiles)?;
        for (i, function) in ortho.into_iter().enumerate().skip(1) {
            out.push(HaarWavelet {
                label: format!("psi_{letter}_{i}"),
                word: vec![letter],
                function,
            });
        }
    }
    Ok(out)
}

fn riesz_ll(field: FieldSpec) -> Result<HaarFunction> {
    let (phi_l, _) = haar_scaling(field);
    let beta = field.beta();
    let half_beta = QuadRat::from_ratio(field, 0, 1, 1, 2);
    let c = RootScaled::sqrt_of(half_beta);
    let left = phi_l.precompose_scale_shift(&beta, &QuadRat::zero(field))?;
    let right = phi_l.precompose_scale_shift(&beta, &-&QuadRat::one(field))?;
    HaarFunction::combine(&[(c.clone(), &left), (c.neg(), &right)])
}

fn riesz_pair(field: FieldSpec, short_first: bool) -> Result<HaarFunction> {
    let (phi_l, phi_s) = haar_scaling(field);
    let beta = field.beta();
    let rule = SubstitutionRule::for_field(field);
    let len_s = rule.tile_len(Letter::S);
    let w_s = phi_s.radicand().clone();
    let (long_shift, short_shift) = if short_first {
        (len_s.clone(), QuadRat::zero(field))
    } else {
        (QuadRat::zero(field), QuadRat::one(field))
    };
    let long_part = phi_l.precompose_scale_shift(&beta, &-&long_shift)?;
    let short_part = phi_s.precompose_scale_shift(&beta, &-&short_shift)?;
    let unnorm = HaarFunction::combine(&[
        (RootScaled::one(field), &long_part),
        (
            RootScaled::new(-&QuadRat::one(field), w_s.clone()),
            &short_part,
        ),
    ])?;
    unnorm.mul_sqrt(&unnorm.norm_sq().inv()?)
}

/// The three pair wavelets `psi_LL`, `psi_LS`, `psi_SL`, each unit norm with
/// zero integral.  `psi_LL` lives on two refined long tiles, the other two on
/// a long-short pair in either order, positive on the long piece.
pub fn haar_riesz_wavelets(field: FieldSpec) -> Result<(HaarWavelet, HaarWavelet, HaarWavelet)> {
    let ll = HaarWavelet {
        label: "psi_LL".to_string(),
        word: vec![Letter::L, Letter::L],
        function: riesz_ll(field)?,
    };
    let ls = HaarWavelet {
        label: "psi_LS".to_string(),
        word: vec![Letter::L, Letter::S],
        function: riesz_pair(field, false)?,
    };
    let sl = HaarWavelet {
        label: "psi_SL".to_string(),
        word: vec![Letter::S, Letter::L],
        function: riesz_pair(field, true)?,
    };
    for w in [&ll, &ls, &sl] {
        assert!(
            w.function.norm_sq() == QuadRat::one(field),
            "{} must have unit norm",
            w.label
        );
        assert!(w.function.integral().is_zero(), "{} must have zero mean", w.label);
    }
    Ok((ll, ls, sl))
}

/// A basis function placed at a concrete position on the line.
#[derive(Debug, Clone)]
pub struct PlacedFunction {
    pub label: String,
    pub position: QuadRat,
    pub function: HaarFunction,
}

/// A complete Haar system for one field: scaling pair, wavelet family and
/// the verified two-scale identities.
#[derive(Debug, Clone)]
pub struct HaarSystem {
    pub field: FieldSpec,
    pub variant: HaarVariant,
    pub phi_l: HaarFunction,
    pub phi_s: HaarFunction,
    pub wavelets: Vec<HaarWavelet>,
    pub refinement: Vec<HaarRefinementRule>,
}

pub fn haar_system(field: FieldSpec, variant: HaarVariant) -> Result<HaarSystem> {
    let (phi_l, phi_s) = haar_scaling(field);
    let wavelets = match variant {
        HaarVariant::Orthonormal => haar_orthonormal_wavelets(field)?,
        HaarVariant::Riesz => {
            let (ll, ls, sl) = haar_riesz_wavelets(field)?;
            vec![ll, ls, sl]
        }
    };
    Ok(HaarSystem {
        field,
        variant,
        phi_l,
        phi_s,
        wavelets,
        refinement: haar_refinement(field)?,
    })
}

impl HaarSystem {
    /// Nodes of the sequence whose tile carries the given letter.
    pub fn scaling_translates(&self, seq: &NodeSequence, letter: Letter) -> Result<Vec<QuadRat>> {
        if seq.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let (lo, hi) = seq.letter_range();
        Ok((lo..=hi)
            .filter(|&k| seq.letter(k) == letter)
            .map(|k| seq.node(k).clone())
            .collect())
    }

    /// Positions where the labeled wavelet's translates sit over the given
    /// sequence.  Orthonormal wavelets sit on every tile of their type on the
    /// nonnegative axis; pair wavelets sit wherever their two-letter word
    /// occurs inside a single tile's refinement, with mirrored refinements on
    /// the negative axis.
    pub fn wavelet_translates(&self, label: &str, seq: &NodeSequence) -> Result<Vec<QuadRat>> {
        if seq.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let wavelet = self
            .wavelets
            .iter()
            .find(|w| w.label == label)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown wavelet label {label}")))?;
        let (lo, hi) = seq.letter_range();
        let mut out = Vec::new();
        match self.variant {
            HaarVariant::Orthonormal => {
                for k in lo..=hi {
                    let node = seq.node(k);
                    if node.sign() >= 0 && seq.letter(k) == wavelet.word[0] {
                        out.push(node.clone());
                    }
                }
            }
            HaarVariant::Riesz => {
                for k in lo..=hi {
                    let node = seq.node(k);
                    let tiles = if node.sign() < 0 {
                        fine_tiles_mirrored(self.field, seq.letter(k))
                    } else {
                        fine_tiles(self.field, seq.letter(k))
                    };
                    for pair in tiles.windows(2) {
                        if pair[0].0 == wavelet.word[0] && pair[1].0 == wavelet.word[1] {
                            out.push(node + &pair[0].1);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// All scaling and wavelet translates whose home tile lies in the
    /// sequence's covered range, as concrete placed functions.
    pub fn basis_over(&self, seq: &NodeSequence) -> Result<Vec<PlacedFunction>> {
        if seq.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let (lo, hi) = seq.letter_range();
        if self.variant == HaarVariant::Orthonormal && seq.node(lo).sign() < 0 {
            return Err(Error::InvalidArgument(
                "the orthonormal family covers the nonnegative half-line only".into(),
            ));
        }
        let mut out = Vec::new();
        for k in lo..=hi {
            let node = seq.node(k).clone();
            let letter = seq.letter(k);
            let (phi, phi_label) = match letter {
                Letter::L => (&self.phi_l, "phi_L"),
                Letter::S => (&self.phi_s, "phi_S"),
            };
            out.push(PlacedFunction {
                label: phi_label.to_string(),
                position: node.clone(),
                function: phi.translate(&node),
            });
            match self.variant {
                HaarVariant::Orthonormal => {
                    for w in self.wavelets.iter().filter(|w| w.word[0] == letter) {
                        out.push(PlacedFunction {
                            label: w.label.clone(),
                            position: node.clone(),
                            function: w.function.translate(&node),
                        });
                    }
                }
                HaarVariant::Riesz => {
                    let tiles = if node.sign() < 0 {
                        fine_tiles_mirrored(self.field, letter)
                    } else {
                        fine_tiles(self.field, letter)
                    };
                    for pair in tiles.windows(2) {
                        for w in &self.wavelets {
                            if pair[0].0 == w.word[0] && pair[1].0 == w.word[1] {
                                let position = &node + &pair[0].1;
                                out.push(PlacedFunction {
                                    label: w.label.clone(),
                                    position: position.clone(),
                                    function: w.function.translate(&position),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Expands `f` in an orthonormal family by inner products, then checks the
/// expansion reproduces `f` exactly; anything outside the span errors.
pub fn expand_in_orthonormal(
    f: &HaarFunction,
    basis: &[HaarFunction],
) -> Result<Vec<RootScaled>> {
    let mut coeffs = Vec::with_capacity(basis.len());
    for e in basis {
        coeffs.push(f.inner_product(e)?);
    }
    let terms: Vec<(RootScaled, &HaarFunction)> =
        coeffs.iter().cloned().zip(basis.iter()).collect();
    let recombined = HaarFunction::combine(&terms)?;
    if &recombined != f {
        return Err(Error::NotInSpan(
            "the function is not in the span of the given family".into(),
        ));
    }
    Ok(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::Family;
    use crate::tiling::{generate_beta_integers, greedy_beta_digit_vec};

    fn minus(a: u32) -> FieldSpec {
        FieldSpec::new(Family::Minus, a).unwrap()
    }

    fn plus(a: u32) -> FieldSpec {
        FieldSpec::new(Family::Plus, a).unwrap()
    }

    fn all_fields() -> Vec<FieldSpec> {
        vec![minus(1), minus(2), minus(3), plus(3), plus(4)]
    }

    fn q(field: FieldSpec, p: i64, qc: i64) -> QuadRat {
        QuadRat::from_pq_int(field, p, qc)
    }

    #[test]
    fn root_scaled_arithmetic_and_equality() {
        let t = minus(1);
        let two = q(t, 2, 0);
        let eight = q(t, 8, 0);
        let a = RootScaled::new(two.clone(), two.clone());
        let b = RootScaled::sqrt_of(eight.clone());
        assert_eq!(a, b);
        assert!(a != b.neg());
        assert_eq!(a.mul(&b), RootScaled::rational(eight));
        assert_eq!(
            RootScaled::sqrt_of(q(t, 0, 1)).mul(&RootScaled::sqrt_of(q(t, 0, 1))),
            RootScaled::rational(q(t, 0, 1))
        );
        let zero = RootScaled::new(QuadRat::zero(t), two.clone());
        assert!(zero.is_zero());
        assert_eq!(zero.radicand(), &QuadRat::one(t));
        assert!((a.to_f64() - 8f64.sqrt()).abs() < 1e-12);
        assert_eq!(RootScaled::rational(two.clone()).to_string(), "2/1 + 0/1*b");
        assert_eq!(RootScaled::sqrt_of(two.clone()).to_string(), "sqrt(2/1 + 0/1*b)");
        assert_eq!(
            RootScaled::new(two.clone(), two).to_string(),
            "(2/1 + 0/1*b) * sqrt(2/1 + 0/1*b)"
        );
    }

    #[test]
    fn scaling_functions_are_normalized_indicators() {
        for field in all_fields() {
            let (phi_l, phi_s) = haar_scaling(field);
            let one = QuadRat::one(field);
            assert_eq!(phi_l.norm_sq(), one);
            assert_eq!(phi_s.norm_sq(), one);
            assert_eq!(phi_l.integral(), RootScaled::one(field));
            let len_s = SubstitutionRule::for_field(field).tile_len(Letter::S).clone();
            assert_eq!(phi_s.support().1, &len_s);
            assert_eq!(&(phi_s.radicand() * &len_s), &one);
            assert!(phi_l.inner_product(&phi_s).is_ok());
        }
    }

    #[test]
    fn refinement_identities_hold_exactly() {
        for field in all_fields() {
            let rules = haar_refinement(field).unwrap();
            assert_eq!(rules.len(), 2);
            for rule in &rules {
                assert!(rule.verify().unwrap());
            }
        }
        let t = minus(1);
        let rules = haar_refinement(t).unwrap();
        let l_rule = &rules[0];
        assert_eq!(l_rule.terms.len(), 2);
        assert_eq!(
            (l_rule.terms[0].letter, l_rule.terms[0].shift.clone()),
            (Letter::L, q(t, 0, 0))
        );
        assert_eq!(
            (l_rule.terms[1].letter, l_rule.terms[1].shift.clone()),
            (Letter::S, q(t, 1, 0))
        );
        assert_eq!(
            l_rule.terms[1].coefficient,
            RootScaled::sqrt_of(q(t, -1, 1))
        );
        let s_rule = &rules[1];
        assert_eq!(s_rule.terms.len(), 1);
        assert_eq!(s_rule.terms[0].coefficient, RootScaled::sqrt_of(q(t, 0, 1)));

        let omega = minus(2);
        let rules = haar_refinement(omega).unwrap();
        let l_rule = &rules[0];
        let letters: Vec<Letter> = l_rule.terms.iter().map(|term| term.letter).collect();
        assert_eq!(letters, vec![Letter::L, Letter::L, Letter::S]);
        assert_eq!(l_rule.terms[1].shift, q(omega, 1, 0));
        assert_eq!(
            l_rule.terms[2].coefficient,
            RootScaled::sqrt_of(q(omega, -2, 1))
        );
    }

    #[test]
    fn orthonormal_tile_systems_are_orthonormal() {
        for field in all_fields() {
            let a = field.a() as usize;
            let wavelets = haar_orthonormal_wavelets(field).unwrap();
            let expected = match field.family() {
                Family::Minus => a,
                Family::Plus => (a - 1) + (a - 2),
            };
            assert_eq!(wavelets.len(), expected);
            for letter in [Letter::L, Letter::S] {
                let (phi_l, phi_s) = haar_scaling(field);
                let phi = match letter {
                    Letter::L => phi_l,
                    Letter::S => phi_s,
                };
                let mut family: Vec<HaarFunction> = vec![phi];
                family.extend(
                    wavelets
                        .iter()
                        .filter(|w| w.word[0] == letter)
                        .map(|w| w.function.clone()),
                );
                for i in 0..family.len() {
                    for j in 0..family.len() {
                        let g = family[i].inner_product(&family[j]).unwrap();
                        if i == j {
                            assert_eq!(g, RootScaled::one(field));
                        } else {
                            assert!(g.is_zero(), "family for {letter} not orthogonal");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn golden_wavelet_matches_closed_form() {
        let t = minus(1);
        let beta = t.beta();
        let (phi_l, phi_s) = haar_scaling(t);
        let left = phi_l
            .precompose_scale_shift(&beta, &QuadRat::zero(t))
            .unwrap();
        let right = phi_s
            .precompose_scale_shift(&beta, &-&QuadRat::one(t))
            .unwrap();
        let closed_form = HaarFunction::combine(&[
            (RootScaled::sqrt_of(q(t, -1, 1)), &left),
            (RootScaled::new(-&QuadRat::one(t), QuadRat::one(t)), &right),
        ])
        .unwrap();
        let wavelets = haar_orthonormal_wavelets(t).unwrap();
        assert_eq!(wavelets.len(), 1);
        assert_eq!(wavelets[0].function, closed_form);
        assert_eq!(closed_form.norm_sq(), QuadRat::one(t));
    }

    #[test]
    fn wavelets_expand_exactly_in_the_fine_basis() {
        for field in all_fields() {
            let wavelets = haar_orthonormal_wavelets(field).unwrap();
            for letter in [Letter::L, Letter::S] {
                let fine = fine_scaling_basis(field, letter).unwrap();
                for w in wavelets.iter().filter(|w| w.word[0] == letter) {
                    let coeffs = expand_in_orthonormal(&w.function, &fine).unwrap();
                    let weight: QuadRat = coeffs
                        .iter()
                        .map(RootScaled::square)
                        .fold(QuadRat::zero(field), |acc, s| &acc + &s);
                    assert_eq!(weight, QuadRat::one(field));
                }
            }
        }
        let t = minus(1);
        let stub = HaarFunction::new(
            unit_indicator(t, q(t, 0, 0), QuadRat::from_ratio(t, 1, 2, 0, 1)),
            QuadRat::one(t),
        )
        .unwrap();
        let fine = fine_scaling_basis(t, Letter::L).unwrap();
        assert!(matches!(
            expand_in_orthonormal(&stub, &fine),
            Err(Error::NotInSpan(_))
        ));
    }

    #[test]
    fn riesz_pair_is_normalized_and_balanced() {
        for field in all_fields() {
            let (ll, ls, sl) = haar_riesz_wavelets(field).unwrap();
            let one = QuadRat::one(field);
            for w in [&ll, &ls, &sl] {
                assert_eq!(w.function.norm_sq(), one);
                assert!(w.function.integral().is_zero());
            }
            assert_eq!(
                ll.function.eval(&QuadRat::zero(field)),
                RootScaled::sqrt_of(QuadRat::from_ratio(field, 0, 1, 1, 2))
            );
            let beta = field.beta();
            let expected_sq = match field.family() {
                Family::Minus => beta.checked_div(&(&beta + &one)).unwrap(),
                Family::Plus => {
                    let a = i64::from(field.a());
                    let num = &q(field, -1, a - 1);
                    let den = &q(field, -1, 2);
                    num.checked_div(den).unwrap()
                }
            };
            let height = ls.function.eval(&QuadRat::zero(field));
            assert_eq!(height.square(), expected_sq);
            assert!(height.sign() > 0);
            let sl_height = sl
                .function
                .eval(&SubstitutionRule::for_field(field).tile_len(Letter::S).checked_div(&beta).unwrap());
            assert_eq!(sl_height.square(), expected_sq);
            assert!(sl_height.sign() > 0);
        }
        let t = minus(1);
        let (_, ls, _) = haar_riesz_wavelets(t).unwrap();
        let ortho = haar_orthonormal_wavelets(t).unwrap();
        assert_eq!(ls.function, ortho[0].function);
    }

    #[test]
    fn riesz_orthogonality_depends_on_straddling() {
        let omega = minus(2);
        let seq = generate_beta_integers(omega, 48, false).unwrap();
        let (ll, _, _) = haar_riesz_wavelets(omega).unwrap();
        let (phi_l, phi_s) = haar_scaling(omega);
        let ib = inv_beta(omega);
        let (lo, hi) = seq.letter_range();
        let last = seq.node(hi + 1).clone();
        let mut straddle_seen = false;
        let mut interior_seen = false;
        for k in lo..hi {
            if seq.letter(k) != Letter::L || seq.letter(k + 1) != Letter::L {
                continue;
            }
            let mu = seq.node(k);
            let position = mu * &ib;
            let end = &position + &(&q(omega, 2, 0) * &ib);
            if (&end - &last).sign() > 0 {
                continue;
            }
            let realized = ll.function.translate(&position);
            let mut orthogonal = true;
            for j in lo..=hi {
                let phi = match seq.letter(j) {
                    Letter::L => &phi_l,
                    Letter::S => &phi_s,
                };
                if !realized
                    .inner_product(&phi.translate(seq.node(j)))
                    .unwrap()
                    .is_zero()
                {
                    orthogonal = false;
                    break;
                }
            }
            let next_fine_node = &(mu + &QuadRat::one(omega)) * &ib;
            let straddles = greedy_beta_digit_vec(&next_fine_node).is_ok();
            assert_eq!(orthogonal, !straddles, "mismatch at mu = {mu:?}");
            if straddles {
                straddle_seen = true;
            } else {
                interior_seen = true;
            }
            if mu == &q(omega, 0, 2) {
                assert!(straddles);
            }
        }
        assert!(straddle_seen && interior_seen);
        assert_eq!(seq.node(6), &q(omega, 0, 2));
        assert_eq!(seq.letter(6), Letter::L);
        assert_eq!(seq.letter(7), Letter::L);
    }

    #[test]
    fn wavelet_translates_follow_words() {
        let t = minus(1);
        let system = haar_system(t, HaarVariant::Riesz).unwrap();
        let two_sided = generate_beta_integers(t, 30, true).unwrap();
        let ll = system.wavelet_translates("psi_LL", &two_sided).unwrap();
        assert!(ll.is_empty());
        let ls = system.wavelet_translates("psi_LS", &two_sided).unwrap();
        let sl = system.wavelet_translates("psi_SL", &two_sided).unwrap();
        assert!(!ls.is_empty());
        assert!(!sl.is_empty());
        assert!(ls.iter().all(|x| x.sign() >= 0));
        assert!(sl.iter().all(|x| x.sign() < 0));
        let l_nodes = system.scaling_translates(&two_sided, Letter::L).unwrap();
        let positive_l: Vec<&QuadRat> = l_nodes.iter().filter(|x| x.sign() >= 0).collect();
        assert_eq!(ls.len(), positive_l.len());
        for (a, b) in ls.iter().zip(positive_l) {
            assert_eq!(a, b);
        }

        let omega = minus(2);
        let system = haar_system(omega, HaarVariant::Riesz).unwrap();
        let seq = generate_beta_integers(omega, 30, false).unwrap();
        let ll = system.wavelet_translates("psi_LL", &seq).unwrap();
        let l_nodes = system.scaling_translates(&seq, Letter::L).unwrap();
        assert_eq!(ll, l_nodes);
        let ls = system.wavelet_translates("psi_LS", &seq).unwrap();
        let expected: Vec<QuadRat> = l_nodes.iter().map(|x| x + &inv_beta(omega)).collect();
        assert_eq!(ls, expected);
        assert!(system.wavelet_translates("psi_XX", &seq).is_err());
    }

    #[test]
    fn v1_gram_identity_on_a_window() {
        for (field, tiles) in [(minus(1), 30usize), (plus(3), 20)] {
            let system = haar_system(field, HaarVariant::Orthonormal).unwrap();
            let seq = generate_beta_integers(field, tiles, false).unwrap();
            let basis = system.basis_over(&seq).unwrap();
            for i in 0..basis.len() {
                for j in i..basis.len() {
                    let (fi, fj) = (&basis[i], &basis[j]);
                    let (fi_lo, fi_hi) = fi.function.support();
                    let (fj_lo, fj_hi) = fj.function.support();
                    if (fj_lo - fi_hi).sign() >= 0 || (fi_lo - fj_hi).sign() >= 0 {
                        continue;
                    }
                    let g = fi.function.inner_product(&fj.function).unwrap();
                    if i == j {
                        assert_eq!(g, RootScaled::one(field));
                    } else {
                        assert!(
                            g.is_zero(),
                            "{} at {} against {} at {}",
                            fi.label,
                            fi.position.to_f64(),
                            fj.label,
                            fj.position.to_f64()
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn orthonormal_systems_reject_two_sided_windows() {
        let t = minus(1);
        let system = haar_system(t, HaarVariant::Orthonormal).unwrap();
        let two_sided = generate_beta_integers(t, 10, true).unwrap();
        assert!(matches!(
            system.basis_over(&two_sided),
            Err(Error::InvalidArgument(_))
        ));
        let translates = system.wavelet_translates("psi_L_1", &two_sided).unwrap();
        assert!(translates.iter().all(|x| x.sign() >= 0));
    }

    #[test]
    fn translation_sets_match_the_closed_forms() {
        let t = minus(1);
        let system = haar_system(t, HaarVariant::Riesz).unwrap();
        let seq = generate_beta_integers(t, 60, false).unwrap();
        let beta = t.beta();
        let beta_sq = &beta * &beta;
        let bound = q(t, 12, 0);
        let mut expected_l = Vec::new();
        let mut expected_s = Vec::new();
        let (lo, hi) = seq.letter_range();
        for k in lo..=hi {
            let x = seq.node(k);
            let scaled_l = x * &beta;
            if (&scaled_l - &bound).sign() < 0 {
                expected_l.push(scaled_l);
            }
            let scaled_s = &(x * &beta_sq) + &QuadRat::one(t);
            if (&scaled_s - &bound).sign() < 0 {
                expected_s.push(scaled_s);
            }
        }
        expected_l.sort_by(|a, b| a.total_cmp(b));
        expected_s.sort_by(|a, b| a.total_cmp(b));
        let l_nodes: Vec<QuadRat> = system
            .scaling_translates(&seq, Letter::L)
            .unwrap()
            .into_iter()
            .filter(|x| (x - &bound).sign() < 0)
            .collect();
        let s_nodes: Vec<QuadRat> = system
            .scaling_translates(&seq, Letter::S)
            .unwrap()
            .into_iter()
            .filter(|x| (x - &bound).sign() < 0)
            .collect();
        assert_eq!(l_nodes, expected_l);
        assert_eq!(s_nodes, expected_s);
    }

    #[test]
    fn combine_rejects_incompatible_radicands() {
        let t = minus(1);
        let (phi_l, _) = haar_scaling(t);
        let shifted = phi_l.translate(&q(t, 2, 0));
        let scaled = phi_l.mul_sqrt(&q(t, 2, 0)).unwrap();
        let err = HaarFunction::combine(&[
            (RootScaled::one(t), &shifted),
            (RootScaled::one(t), &scaled),
        ]);
        assert!(matches!(err, Err(Error::InvalidArgument(_))));
        let ok = HaarFunction::combine(&[
            (RootScaled::one(t), &shifted),
            (RootScaled::sqrt_of(q(t, 2, 0)), &scaled),
        ])
        .unwrap();
        assert_eq!(ok.eval(&q(t, 2, 0)), RootScaled::one(t));
        assert_eq!(ok.eval(&QuadRat::zero(t)), RootScaled::rational(q(t, 2, 0)));
    }
}
