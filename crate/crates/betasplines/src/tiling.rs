//! Self-similar discretizations of the real line and their word
//! combinatorics.
//!
//! `generate_beta_integers` builds the fixed point of a two-letter
//! substitution and reads node positions off the tile lengths;
//! `generate_fibonacci_chain` produces the golden-ratio cut-and-project set
//! from its closed node formula. Both yield a [`NodeSequence`], the shared
//! grid type consumed by the spline, wavelet, and transform modules. The
//! rest of the module deals in exact membership predicates (greedy digit
//! expansions, conjugate-window tests), classification of local words with
//! their acceptance windows, and the letter-counting laws of the chain.

use std::cmp::Ordering;
use std::fmt;

use num::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadfield::{Family, FieldSpec, QuadRat};

/// Tile alphabet: `L` is the long tile, `S` the short one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    L,
    S,
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::L => write!(f, "L"),
            Letter::S => write!(f, "S"),
        }
    }
}

/// Renders a word as a compact string like `LLSLS`.
pub fn word_string(word: &[Letter]) -> String {
    word.iter().map(Letter::to_string).collect()
}

/// Parses a word string of `L`s and `S`s (case-insensitive).
pub fn parse_word(s: &str) -> Result<Vec<Letter>> {
    s.chars()
        .map(|c| match c.to_ascii_uppercase() {
            'L' => Ok(Letter::L),
            'S' => Ok(Letter::S),
            other => Err(Error::InvalidArgument(format!(
                "invalid letter {other:?} in word {s:?}"
            ))),
        })
        .collect()
}

/// Lexicographic comparison with the convention `L > S`.
pub fn lex_cmp(a: &[Letter], b: &[Letter]) -> Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match (x, y) {
            (Letter::L, Letter::S) => return Ordering::Greater,
            (Letter::S, Letter::L) => return Ordering::Less,
            _ => {}
        }
    }
    a.len().cmp(&b.len())
}

/// A two-letter substitution together with tile geometry.
///
/// `scale` is the inflation factor: scaling a tile by it and substituting
/// its letter must tile the scaled interval exactly (stone inflation), which
/// [`SubstitutionRule::is_stone_inflation`] checks symbolically.
#[derive(Debug, Clone, PartialEq)]
pub struct SubstitutionRule {
    pub image_of_l: Vec<Letter>,
    pub image_of_s: Vec<Letter>,
    pub tile_len_l: QuadRat,
    pub tile_len_s: QuadRat,
    pub scale: QuadRat,
}

impl SubstitutionRule {
    /// The beta-integer substitution of the given field.
    ///
    /// Minus family: `L -> L^a S`, `S -> L` with tiles `1` and `1/beta`.
    /// Plus family: `L -> L^(a-1) S`, `S -> L^(a-2) S` with tiles `1` and
    /// `1 - 1/beta`. The inflation factor is `beta` in both cases.
    pub fn for_field(field: FieldSpec) -> SubstitutionRule {
        let a = field.a() as usize;
        let one = QuadRat::one(field);
        match field.family() {
            Family::Minus => {
                let mut image_of_l = vec![Letter::L; a];
                image_of_l.push(Letter::S);
                // 1/beta = beta - a
                let inv_beta = QuadRat::from_pq_int(field, -(a as i64), 1);
                SubstitutionRule {
                    image_of_l,
                    image_of_s: vec![Letter::L],
                    tile_len_l: one,
                    tile_len_s: inv_beta,
                    scale: field.beta(),
                }
            }
            Family::Plus => {
                let mut image_of_l = vec![Letter::L; a - 1];
                image_of_l.push(Letter::S);
                let mut image_of_s = vec![Letter::L; a - 2];
                image_of_s.push(Letter::S);
                // 1/beta = a - beta, so 1 - 1/beta = (1 - a) + beta
                let short = QuadRat::from_pq_int(field, 1 - a as i64, 1);
                SubstitutionRule {
                    image_of_l,
                    image_of_s,
                    tile_len_l: one,
                    tile_len_s: short,
                    scale: field.beta(),
                }
            }
        }
    }

    /// The Fibonacci-chain substitution `L -> LLS`, `S -> LS` on the
    /// golden field, with tiles `1` and `1/tau` and inflation `tau^2`.
    pub fn fibonacci_rescaled() -> SubstitutionRule {
        let field = FieldSpec::golden();
        SubstitutionRule {
            image_of_l: vec![Letter::L, Letter::L, Letter::S],
            image_of_s: vec![Letter::L, Letter::S],
            tile_len_l: QuadRat::one(field),
            // 1/tau = tau - 1
            tile_len_s: QuadRat::from_pq_int(field, -1, 1),
            // tau^2 = 1 + tau
            scale: QuadRat::from_pq_int(field, 1, 1),
        }
    }

    /// The substitution generating the minus-family model set with
    /// conjugate window `[0, 1)`: `L -> L (S^(a-1) L)^a S^a` and
    /// `S -> L (S^(a-1) L)^(a-1) S^a`, tiles `beta + 1` and `beta`,
    /// inflation `beta^2`.
    pub fn minus_model_set(field: FieldSpec) -> Result<SubstitutionRule> {
        if field.family() != Family::Minus {
            return Err(Error::InvalidArgument(
                "model-set substitution is defined for the minus family".into(),
            ));
        }
        let a = field.a() as usize;
        let block = |repeats: usize| {
            let mut w = vec![Letter::L];
            for _ in 0..repeats {
                w.extend(std::iter::repeat(Letter::S).take(a - 1));
                w.push(Letter::L);
            }
            w.extend(std::iter::repeat(Letter::S).take(a));
            w
        };
        let beta = field.beta();
        Ok(SubstitutionRule {
            image_of_l: block(a),
            image_of_s: block(a - 1),
            tile_len_l: &beta + &QuadRat::one(field),
            tile_len_s: beta.clone(),
            scale: &beta * &beta,
        })
    }

    pub fn image(&self, letter: Letter) -> &[Letter] {
        match letter {
            Letter::L => &self.image_of_l,
            Letter::S => &self.image_of_s,
        }
    }

    pub fn tile_len(&self, letter: Letter) -> &QuadRat {
        match letter {
            Letter::L => &self.tile_len_l,
            Letter::S => &self.tile_len_s,
        }
    }

    /// Applies the substitution letterwise.
    pub fn apply(&self, word: &[Letter]) -> Vec<Letter> {
        let mut out = Vec::with_capacity(word.len() * self.image_of_l.len());
        for &l in word {
            out.extend_from_slice(self.image(l));
        }
        out
    }

    /// Occurrence matrix `[[L in s(L), S in s(L)], [L in s(S), S in s(S)]]`.
    pub fn matrix(&self) -> [[u64; 2]; 2] {
        let count = |w: &[Letter]| {
            let l = w.iter().filter(|&&x| x == Letter::L).count() as u64;
            (l, w.len() as u64 - l)
        };
        let (ll, ls) = count(&self.image_of_l);
        let (sl, ss) = count(&self.image_of_s);
        [[ll, ls], [sl, ss]]
    }

    /// Exact stone-inflation check: for each letter, the tile lengths of its
    /// image must add up to `scale` times its own tile length.
    pub fn is_stone_inflation(&self) -> bool {
        [Letter::L, Letter::S].into_iter().all(|letter| {
            let mut sum = QuadRat::zero(self.scale.field());
            for &l in self.image(letter) {
                sum = &sum + self.tile_len(l);
            }
            sum == &self.scale * self.tile_len(letter)
        })
    }

    /// Exact check that `scale` is the leading (Perron) eigenvalue of the
    /// occurrence matrix: it must satisfy the characteristic equation and
    /// exceed 1.
    pub fn scale_is_perron(&self) -> bool {
        let m = self.matrix();
        let field = self.scale.field();
        let tr = QuadRat::from_int(field, (m[0][0] + m[1][1]) as i64);
        let det = QuadRat::from_int(
            field,
            (m[0][0] * m[1][1]) as i64 - (m[0][1] * m[1][0]) as i64,
        );
        let s = &self.scale;
        let char_poly = &(s * s) - &(&tr * s) + det;
        char_poly.is_zero() && (s - &QuadRat::one(field)).sign() > 0
    }

    /// One-sided fixed point: iterates the substitution on `seed` until at
    /// least `min_letters` letters are available. The image of `seed` must
    /// start with `seed` so that iterates extend each other.
    pub fn fixed_point(&self, seed: Letter, min_letters: usize) -> Result<Vec<Letter>> {
        if self.image(seed).first() != Some(&seed) {
            return Err(Error::InvalidArgument(format!(
                "substitution image of {seed} does not start with {seed}"
            )));
        }
        let mut word = vec![seed];
        while word.len() < min_letters {
            let next = self.apply(&word);
            if next.len() == word.len() {
                return Err(Error::InvalidArgument(
                    "substitution does not grow the seed word".into(),
                ));
            }
            word = next;
        }
        Ok(word)
    }

    /// Left-sided fixed point ending at the origin: iterates on `seed`
    /// (whose image must end with `seed`) and keeps the tail.
    pub fn fixed_point_left(&self, seed: Letter, min_letters: usize) -> Result<Vec<Letter>> {
        if self.image(seed).last() != Some(&seed) {
            return Err(Error::InvalidArgument(format!(
                "substitution image of {seed} does not end with {seed}"
            )));
        }
        let mut word = vec![seed];
        while word.len() < min_letters {
            let next = self.apply(&word);
            if next.len() == word.len() {
                return Err(Error::InvalidArgument(
                    "substitution does not grow the seed word".into(),
                ));
            }
            word = next;
        }
        Ok(word)
    }
}

/// Acceptance window on the internal (conjugate) line.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSetSpec {
    lo: QuadRat,
    hi: QuadRat,
    closed_lo: bool,
    open_hi: bool,
}

impl ModelSetSpec {
    pub fn new(lo: QuadRat, hi: QuadRat, closed_lo: bool, open_hi: bool) -> Result<ModelSetSpec> {
        if lo.field() != hi.field() {
            return Err(Error::FieldMismatch);
        }
        if (&hi - &lo).sign() <= 0 {
            return Err(Error::InvalidWindow(
                "window must have nonempty interior".into(),
            ));
        }
        Ok(ModelSetSpec {
            lo,
            hi,
            closed_lo,
            open_hi,
        })
    }

    /// The default Fibonacci-chain window `[0, tau^2)`.
    pub fn default_fibonacci() -> ModelSetSpec {
        let field = FieldSpec::golden();
        ModelSetSpec {
            lo: QuadRat::zero(field),
            hi: QuadRat::from_pq_int(field, 1, 1),
            closed_lo: true,
            open_hi: true,
        }
    }

    pub fn lo(&self) -> &QuadRat {
        &self.lo
    }

    pub fn hi(&self) -> &QuadRat {
        &self.hi
    }

    pub fn closed_lo(&self) -> bool {
        self.closed_lo
    }

    pub fn open_hi(&self) -> bool {
        self.open_hi
    }

    /// Exact containment test.
    pub fn contains(&self, x: &QuadRat) -> bool {
        let above = match (x - &self.lo).sign() {
            s if s > 0 => true,
            0 => self.closed_lo,
            _ => false,
        };
        if !above {
            return false;
        }
        match (x - &self.hi).sign() {
            s if s < 0 => true,
            0 => !self.open_hi,
            _ => false,
        }
    }

    /// Window of the scaled set `f * Lambda`, namely `f' * window`, with
    /// bounds and end conditions flipped when `f'` is negative.
    pub fn scaled(&self, factor_conj: &QuadRat) -> Result<ModelSetSpec> {
        match factor_conj.sign() {
            0 => Err(Error::InvalidArgument("zero scaling factor".into())),
            s if s > 0 => ModelSetSpec::new(
                factor_conj * &self.lo,
                factor_conj * &self.hi,
                self.closed_lo,
                self.open_hi,
            ),
            _ => ModelSetSpec::new(
                factor_conj * &self.hi,
                factor_conj * &self.lo,
                !self.open_hi,
                !self.closed_lo,
            ),
        }
    }
}

/// How a node sequence came to be; fixes which membership predicate applies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceSource {
    BetaIntegers,
    FibonacciChain,
    Rescaled,
}

impl fmt::Display for SequenceSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceSource::BetaIntegers => write!(f, "beta-integers"),
            SequenceSource::FibonacciChain => write!(f, "fibonacci-chain"),
            SequenceSource::Rescaled => write!(f, "rescaled"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum MembershipKind {
    /// Integer lattice coordinates plus a conjugate-window test.
    ConjugateWindow,
    /// Terminating greedy digit expansion (beta-integers).
    Greedy,
    /// Division followed by a search among the generated nodes.
    NodeSearch,
}

/// A finite window of a self-similar node set.
///
/// Nodes carry indices `i_min..=i_max` with the zero node anchored at the
/// origin whenever index 0 is in range; `letters[k - i_min]` labels the gap
/// `[node(k), node(k+1)]` and the gap length always equals the tile length
/// of its letter exactly.
#[derive(Debug, Clone)]
pub struct NodeSequence {
    field: FieldSpec,
    source: SequenceSource,
    i_min: i64,
    nodes: Vec<QuadRat>,
    letters: Vec<Letter>,
    tile_len_l: QuadRat,
    tile_len_s: QuadRat,
    window: Option<ModelSetSpec>,
    lattice_scale: QuadRat,
    membership: MembershipKind,
}

impl NodeSequence {
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn from_parts(
        field: FieldSpec,
        source: SequenceSource,
        i_min: i64,
        nodes: Vec<QuadRat>,
        letters: Vec<Letter>,
        tile_len_l: QuadRat,
        tile_len_s: QuadRat,
        window: Option<ModelSetSpec>,
        lattice_scale: QuadRat,
        membership: MembershipKind,
    ) -> Result<NodeSequence> {
        if nodes.len() < 2 || letters.len() + 1 != nodes.len() {
            return Err(Error::SequenceTooShort(format!(
                "{} nodes with {} letters",
                nodes.len(),
                letters.len()
            )));
        }
        let seq = NodeSequence {
            field,
            source,
            i_min,
            nodes,
            letters,
            tile_len_l,
            tile_len_s,
            window,
            lattice_scale,
            membership,
        };
        for k in 0..seq.letters.len() {
            let gap = &seq.nodes[k + 1] - &seq.nodes[k];
            if gap.sign() <= 0 {
                return Err(Error::InvalidArgument(format!(
                    "nodes not strictly increasing at position {k}"
                )));
            }
            let expected = seq.tile_len(seq.letters[k]);
            if &gap != expected {
                return Err(Error::InvalidArgument(format!(
                    "gap at position {k} does not match its letter length"
                )));
            }
        }
        let (lo, hi) = seq.index_range();
        if lo <= 0 && 0 <= hi && !seq.node(0).is_zero() {
            return Err(Error::InvalidArgument(
                "node with index 0 must sit at the origin".into(),
            ));
        }
        Ok(seq)
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn source(&self) -> SequenceSource {
        self.source
    }

    /// Inclusive node index range `(i_min, i_max)`.
    pub fn index_range(&self) -> (i64, i64) {
        (self.i_min, self.i_min + self.nodes.len() as i64 - 1)
    }

    /// Inclusive range of indices `k` for which `letter(k)` exists.
    pub fn letter_range(&self) -> (i64, i64) {
        (self.i_min, self.i_min + self.letters.len() as i64 - 1)
    }

    fn offset(&self, k: i64) -> usize {
        let (lo, hi) = self.index_range();
        assert!(
            (lo..=hi).contains(&k),
            "node index {k} outside generated range [{lo}, {hi}]"
        );
        (k - self.i_min) as usize
    }

    /// Node position by index.
    ///
    /// # Panics
    ///
    /// Panics when the index is out of range; see [`NodeSequence::try_node`].
    pub fn node(&self, k: i64) -> &QuadRat {
        &self.nodes[self.offset(k)]
    }

    pub fn try_node(&self, k: i64) -> Result<&QuadRat> {
        let (lo, hi) = self.index_range();
        if !(lo..=hi).contains(&k) {
            return Err(Error::IndexOutOfRange { index: k, lo, hi });
        }
        Ok(&self.nodes[(k - lo) as usize])
    }

    /// Letter of the gap starting at node `k`.
    ///
    /// # Panics
    ///
    /// Panics when no such gap was generated.
    pub fn letter(&self, k: i64) -> Letter {
        let (lo, hi) = self.letter_range();
        assert!(
            (lo..=hi).contains(&k),
            "letter index {k} outside generated range [{lo}, {hi}]"
        );
        self.letters[(k - lo) as usize]
    }

    pub fn try_letter(&self, k: i64) -> Result<Letter> {
        let (lo, hi) = self.letter_range();
        if !(lo..=hi).contains(&k) {
            return Err(Error::IndexOutOfRange { index: k, lo, hi });
        }
        Ok(self.letters[(k - lo) as usize])
    }

    /// Gap length `node(k+1) - node(k)`.
    pub fn gap(&self, k: i64) -> QuadRat {
        self.node(k + 1) - self.node(k)
    }

    pub fn tile_len(&self, letter: Letter) -> &QuadRat {
        match letter {
            Letter::L => &self.tile_len_l,
            Letter::S => &self.tile_len_s,
        }
    }

    pub fn window(&self) -> Option<&ModelSetSpec> {
        self.window.as_ref()
    }

    /// The `n`-letter word starting at node `start`.
    pub fn word(&self, start: i64, n: usize) -> Result<Vec<Letter>> {
        let (lo, hi) = self.letter_range();
        let end = start + n as i64 - 1;
        if n == 0 || start < lo || end > hi {
            return Err(Error::SequenceTooShort(format!(
                "word of length {n} at start {start} needs letters in [{lo}, {hi}]"
            )));
        }
        Ok((start..=end).map(|k| self.letter(k)).collect())
    }

    /// Iterates `(index, node)` pairs in increasing order.
    pub fn iter_nodes(&self) -> impl Iterator<Item = (i64, &QuadRat)> {
        self.nodes
            .iter()
            .enumerate()
            .map(move |(j, x)| (self.i_min + j as i64, x))
    }

    /// Exact binary search for a node value.
    pub fn find_node(&self, x: &QuadRat) -> Option<i64> {
        if x.field() != self.field {
            return None;
        }
        let mut lo = 0usize;
        let mut hi = self.nodes.len();
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.nodes[mid].total_cmp(x) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(self.i_min + mid as i64),
            }
        }
        None
    }

    /// Membership of an arbitrary point in the infinite set this window was
    /// cut from, decided exactly.
    ///
    /// Cut-and-project sequences test integrality of lattice coordinates and
    /// the conjugate against the acceptance window; beta-integers test the
    /// greedy expansion; ad-hoc sequences fall back to searching the
    /// generated nodes, and report an error when the point divided by the
    /// lattice scale falls outside the generated range.
    pub fn contains_in_infinite_set(&self, x: &QuadRat) -> Result<bool> {
        if x.field() != self.field {
            return Err(Error::FieldMismatch);
        }
        let y = x.checked_div(&self.lattice_scale)?;
        match self.membership {
            MembershipKind::ConjugateWindow => {
                if !y.p().is_integer() || !y.q().is_integer() {
                    return Ok(false);
                }
                let window = self
                    .window
                    .as_ref()
                    .expect("conjugate-window membership requires a window");
                Ok(window.contains(&y.conjugate()))
            }
            MembershipKind::Greedy => {
                if !y.p().is_integer() || !y.q().is_integer() {
                    return Ok(false);
                }
                let abs = if y.sign() < 0 { -&y } else { y };
                match greedy_beta_digit_vec(&abs) {
                    Ok(_) => Ok(true),
                    Err(Error::NotABetaInteger(_)) => Ok(false),
                    Err(e) => Err(e),
                }
            }
            MembershipKind::NodeSearch => {
                if (y.total_cmp(&self.nodes[0]) == Ordering::Less)
                    || (y.total_cmp(self.nodes.last().unwrap()) == Ordering::Greater)
                {
                    return Err(Error::OutOfWindow(
                        "membership undecidable beyond the generated range".into(),
                    ));
                }
                Ok(self.find_node(&y).is_some())
            }
        }
    }

    /// Exact membership of `x` in `theta * Lambda`, where `Lambda` is the
    /// infinite set behind this window.
    pub fn in_theta_lambda(&self, x: &QuadRat, theta: &QuadRat) -> Result<bool> {
        if theta.is_zero() {
            return Err(Error::DivisionByZero);
        }
        self.contains_in_infinite_set(&x.checked_div(theta)?)
    }

    /// Scales every node (and the tile geometry) by a positive factor.
    pub fn rescale(&self, factor: &QuadRat) -> Result<NodeSequence> {
        if factor.sign() <= 0 {
            return Err(Error::InvalidArgument(
                "rescale factor must be positive".into(),
            ));
        }
        NodeSequence::from_parts(
            self.field,
            SequenceSource::Rescaled,
            self.i_min,
            self.nodes.iter().map(|x| x * factor).collect(),
            self.letters.clone(),
            &self.tile_len_l * factor,
            &self.tile_len_s * factor,
            self.window.clone(),
            &self.lattice_scale * factor,
            self.membership,
        )
    }

    /// CSV rendering: one row per node with exact coordinates, a decimal
    /// shadow, the letter of the outgoing gap, and membership in
    /// `theta * Lambda`.
    pub fn to_csv(&self, theta: &QuadRat) -> Result<String> {
        let mut out = String::from("index,p,q,value,letter,in_theta_lambda\n");
        let (_, letter_hi) = self.letter_range();
        for (k, x) in self.iter_nodes() {
            let letter = if k <= letter_hi {
                self.letter(k).to_string()
            } else {
                String::new()
            };
            let flag = self.in_theta_lambda(x, theta)?;
            out.push_str(&format!(
                "{},{}/{},{}/{},{},{},{}\n",
                k,
                x.p().numer(),
                x.p().denom(),
                x.q().numer(),
                x.q().denom(),
                x.to_decimal_string(10)?,
                letter,
                flag
            ));
        }
        Ok(out)
    }
}

/// Builds the positive beta-integers of a field as the substitution fixed
/// point seeded by `L`, with at least `word_length` letters; mirrors them
/// through the origin when `include_negative` is set.
pub fn generate_beta_integers(
    field: FieldSpec,
    word_length: usize,
    include_negative: bool,
) -> Result<NodeSequence> {
    if word_length == 0 {
        return Err(Error::ParameterOutOfRange(
            "word_length must be at least 1".into(),
        ));
    }
    let rule = SubstitutionRule::for_field(field);
    let mut letters = rule.fixed_point(Letter::L, word_length)?;
    letters.truncate(word_length);
    let mut nodes = Vec::with_capacity(word_length + 1);
    nodes.push(QuadRat::zero(field));
    for &l in &letters {
        let next = nodes.last().unwrap() + rule.tile_len(l);
        nodes.push(next);
    }
    let (i_min, nodes, letters) = if include_negative {
        let mut full_nodes: Vec<QuadRat> =
            nodes.iter().skip(1).map(|x| -x).rev().collect();
        full_nodes.extend(nodes);
        let mut full_letters: Vec<Letter> = letters.iter().copied().rev().collect();
        full_letters.extend(letters);
        (-(word_length as i64), full_nodes, full_letters)
    } else {
        (0, nodes, letters)
    };
    NodeSequence::from_parts(
        field,
        SequenceSource::BetaIntegers,
        i_min,
        nodes,
        letters,
        rule.tile_len_l,
        rule.tile_len_s,
        None,
        QuadRat::one(field),
        MembershipKind::Greedy,
    )
}

/// Greedy digit expansion of a nonnegative element of `Z[beta]`; digits are
/// most significant first. Errors when the expansion does not terminate at
/// the unit power, i.e. when `x` is not a beta-integer.
pub fn greedy_beta_digit_vec(x: &QuadRat) -> Result<Vec<u32>> {
    if x.sign() < 0 {
        return Err(Error::InvalidArgument(
            "greedy expansion is defined for nonnegative values".into(),
        ));
    }
    if !x.p().is_integer() || !x.q().is_integer() {
        return Err(Error::NotABetaInteger(format!(
            "{x} has non-integer lattice coordinates"
        )));
    }
    let field = x.field();
    if x.is_zero() {
        return Ok(vec![0]);
    }
    let beta = field.beta();
    // Largest power with beta^j <= x.
    let mut powers = vec![QuadRat::one(field)];
    while (&(powers.last().unwrap() * &beta) - x).sign() <= 0 {
        let next = powers.last().unwrap() * &beta;
        powers.push(next);
    }
    let cap = u64::from(field.floor_beta());
    let mut digits = Vec::with_capacity(powers.len());
    let mut rem = x.clone();
    for p in powers.iter().rev() {
        let d = rem.checked_div(p)?.floor();
        let d = d.to_u64().filter(|&d| d <= cap).ok_or_else(|| {
            Error::NotABetaInteger(format!("digit overflow in expansion of {x}"))
        })?;
        rem = &rem - &(&QuadRat::from_int(field, d as i64) * p);
        digits.push(d as u32);
    }
    if !rem.is_zero() {
        return Err(Error::NotABetaInteger(format!(
            "greedy expansion of {x} leaves remainder {rem}"
        )));
    }
    Ok(digits)
}

/// Greedy expansion rendered as a digit string, bracketing digits above 9.
pub fn greedy_beta_digits(x: &QuadRat) -> Result<String> {
    let digits = greedy_beta_digit_vec(x)?;
    Ok(render_digits(&digits))
}

fn render_digits(digits: &[u32]) -> String {
    digits
        .iter()
        .map(|&d| {
            if d <= 9 {
                d.to_string()
            } else {
                format!("[{d}]")
            }
        })
        .collect()
}

/// Closed node formula of the Fibonacci chain on the golden field:
/// `lambda_k = (ceil(k/tau) + k*tau) / tau^2`, valid for every integer `k`.
pub fn fibonacci_node(k: i64) -> QuadRat {
    let field = FieldSpec::golden();
    // k/tau = k(tau - 1)
    let k_over_tau = QuadRat::from_pq_int(field, -k, k);
    let c = k_over_tau.ceil().to_i64().expect("ceil fits i64");
    // (c + k*tau) / tau^2 = (2c - k) + (k - c) * tau
    QuadRat::from_pq_int(field, 2 * c - k, k - c)
}

/// Generates the Fibonacci chain over its default window `[0, tau^2)` for
/// node indices `k_min..=k_max` (which must straddle 0).
pub fn generate_fibonacci_chain(
    window: &ModelSetSpec,
    k_min: i64,
    k_max: i64,
) -> Result<NodeSequence> {
    if *window != ModelSetSpec::default_fibonacci() {
        return Err(Error::InvalidWindow(
            "only the default window [0, tau^2) has a generator".into(),
        ));
    }
    if !(k_min <= 0 && 0 <= k_max && k_min < k_max) {
        return Err(Error::InvalidArgument(format!(
            "index range [{k_min}, {k_max}] must straddle the origin"
        )));
    }
    let field = FieldSpec::golden();
    let nodes: Vec<QuadRat> = (k_min..=k_max).map(fibonacci_node).collect();
    let one = QuadRat::one(field);
    let inv_tau = QuadRat::from_pq_int(field, -1, 1);
    let mut letters = Vec::with_capacity(nodes.len() - 1);
    for pair in nodes.windows(2) {
        let gap = &pair[1] - &pair[0];
        if gap == one {
            letters.push(Letter::L);
        } else if gap == inv_tau {
            letters.push(Letter::S);
        } else {
            return Err(Error::InvalidArgument(format!(
                "gap {gap} is neither tile length"
            )));
        }
    }
    for x in &nodes {
        assert!(
            window.contains(&x.conjugate()),
            "conjugate of generated node {x} escapes the window"
        );
    }
    NodeSequence::from_parts(
        field,
        SequenceSource::FibonacciChain,
        k_min,
        nodes,
        letters,
        one,
        inv_tau,
        Some(window.clone()),
        QuadRat::one(field),
        MembershipKind::ConjugateWindow,
    )
}

/// Integer lattice helper used to sanity check constructions against the
/// classical dyadic setting: nodes `k_min..=k_max` at unit spacing, all gaps
/// labeled `L`.
pub fn integer_lattice(field: FieldSpec, k_min: i64, k_max: i64) -> Result<NodeSequence> {
    if !(k_min <= 0 && 0 <= k_max && k_min < k_max) {
        return Err(Error::InvalidArgument(format!(
            "index range [{k_min}, {k_max}] must straddle the origin"
        )));
    }
    let nodes: Vec<QuadRat> = (k_min..=k_max)
        .map(|k| QuadRat::from_int(field, k))
        .collect();
    let letters = vec![Letter::L; (k_max - k_min) as usize];
    NodeSequence::from_parts(
        field,
        SequenceSource::Rescaled,
        k_min,
        nodes,
        letters,
        QuadRat::one(field),
        QuadRat::one(field),
        None,
        QuadRat::one(field),
        MembershipKind::NodeSearch,
    )
}

/// Which neighbor of a window point to step to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Right,
    Left,
}

/// The exchange map driving the Fibonacci chain on its window: given the
/// conjugate `x'` of a chain point, returns the conjugate of its right (or
/// left) neighbor on the chain.
pub fn neighbor_map(x_conj: &QuadRat, direction: Direction) -> Result<QuadRat> {
    let field = FieldSpec::golden();
    if x_conj.field() != field {
        return Err(Error::FieldMismatch);
    }
    let window = ModelSetSpec::default_fibonacci();
    if !window.contains(x_conj) {
        return Err(Error::OutOfWindow(format!(
            "{x_conj} is not in [0, tau^2)"
        )));
    }
    let tau = field.beta();
    let one = QuadRat::one(field);
    match direction {
        Direction::Right => {
            // +1 on [0, tau), -tau on [tau, tau^2)
            if (x_conj - &tau).sign() < 0 {
                Ok(x_conj + &one)
            } else {
                Ok(x_conj - &tau)
            }
        }
        Direction::Left => {
            // +tau on [0, 1), -1 on [1, tau^2)
            if (x_conj - &one).sign() < 0 {
                Ok(x_conj + &tau)
            } else {
                Ok(x_conj - &one)
            }
        }
    }
}

/// A class of equal `n`-letter words with its members and acceptance window.
#[derive(Debug, Clone)]
pub struct WordClass {
    pub word: Vec<Letter>,
    /// The representative start index in `[-n, 0]`.
    pub representative: i64,
    /// All start indices in the generated range whose word equals `word`.
    pub members: Vec<i64>,
    /// Conjugates of left ends of this word fill exactly this window.
    pub window: ModelSetSpec,
}

/// Classifies all `n`-letter words of the chain.
///
/// Returns exactly `n + 1` classes ordered lexicographically from largest
/// (`L > S`), whose windows partition the chain's window from left to right
/// in the same order. Requires a cut-and-project sequence covering start
/// indices `-n..=0`.
pub fn classify_words(seq: &NodeSequence, n: usize) -> Result<Vec<WordClass>> {
    if n == 0 {
        return Err(Error::ParameterOutOfRange("word length must be >= 1".into()));
    }
    let window = seq.window().cloned().ok_or_else(|| {
        Error::InvalidArgument("word classification needs a cut-and-project sequence".into())
    })?;
    let (letter_lo, letter_hi) = seq.letter_range();
    if letter_lo > -(n as i64) || letter_hi < n as i64 - 1 {
        return Err(Error::SequenceTooShort(format!(
            "classification of {n}-letter words needs letters at indices -{n}..={}",
            n as i64 - 1
        )));
    }
    // Representatives: left ends lambda_{-n}..lambda_0; their conjugates
    // split the window into the class windows.
    let mut reps: Vec<(i64, QuadRat)> = (-(n as i64)..=0)
        .map(|j| (j, seq.node(j).conjugate()))
        .collect();
    reps.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut classes = Vec::with_capacity(n + 1);
    for (pos, (j, conj)) in reps.iter().enumerate() {
        let hi = if pos + 1 < reps.len() {
            reps[pos + 1].1.clone()
        } else {
            window.hi().clone()
        };
        let class_window = ModelSetSpec::new(conj.clone(), hi, true, true)?;
        classes.push(WordClass {
            word: seq.word(*j, n)?,
            representative: *j,
            members: Vec::new(),
            window: class_window,
        });
    }
    // Windows ascend; the words must then descend lexicographically.
    for pair in classes.windows(2) {
        assert_eq!(
            lex_cmp(&pair[0].word, &pair[1].word),
            Ordering::Greater,
            "window order must match descending lexicographic order"
        );
    }
    let distinct: std::collections::HashSet<Vec<Letter>> =
        classes.iter().map(|c| c.word.clone()).collect();
    assert_eq!(distinct.len(), n + 1, "representatives must be pairwise distinct");
    // Assign every available start index to its class, checking the window
    // prediction exactly.
    for start in letter_lo..=(letter_hi - n as i64 + 1) {
        let word = seq.word(start, n)?;
        let conj = seq.node(start).conjugate();
        let class = classes
            .iter_mut()
            .find(|c| c.word == word)
            .expect("every word matches a representative class");
        assert!(
            class.window.contains(&conj),
            "conjugate of member {start} escapes its class window"
        );
        class.members.push(start);
    }
    Ok(classes)
}

/// Left ends of all `n`-letter words: the paper-thin wrapper returning the
/// representative indices `-n..=0` after validating they realize `n + 1`
/// distinct words.
pub fn left_ends_of_all_words(seq: &NodeSequence, n: usize) -> Result<Vec<i64>> {
    let classes = classify_words(seq, n)?;
    let mut reps: Vec<i64> = classes.iter().map(|c| c.representative).collect();
    reps.sort_unstable();
    Ok(reps)
}

/// Counts letters in the `n`-letter word starting at `start`, checking the
/// chain's counting laws when they apply.
///
/// For the Fibonacci chain the L count must equal
/// `tau^2 (lambda_{start+n} - lambda_start - n/tau)` exactly, and the pair
/// must be one of `(ceil(n/tau), floor(n/tau^2))`, `(floor(n/tau),
/// ceil(n/tau^2))`.
pub fn word_letter_counts(seq: &NodeSequence, start: i64, n: usize) -> Result<(usize, usize)> {
    let word = seq.word(start, n)?;
    let count_l = word.iter().filter(|&&l| l == Letter::L).count();
    let count_s = n - count_l;
    if seq.source() == SequenceSource::FibonacciChain {
        let field = seq.field();
        // tau^2 (lambda_{k+n} - lambda_k - n/tau)
        let tau_sq = QuadRat::from_pq_int(field, 1, 1);
        let n_over_tau = QuadRat::from_pq_int(field, -(n as i64), n as i64);
        let span = seq.node(start + n as i64) - seq.node(start);
        let formula = &tau_sq * &(&span - &n_over_tau);
        assert!(
            formula.is_integer(),
            "letter-count formula must be an integer"
        );
        assert_eq!(
            formula.p().to_integer().to_i64(),
            Some(count_l as i64),
            "letter-count formula disagrees with the direct count"
        );
        let n_over_tau_sq = QuadRat::from_pq_int(field, 2 * n as i64, -(n as i64));
        let ceil_l = n_over_tau_floorceil(&n_over_tau, true);
        let floor_l = n_over_tau_floorceil(&n_over_tau, false);
        let floor_s = n_over_tau_floorceil(&n_over_tau_sq, false);
        let ceil_s = n_over_tau_floorceil(&n_over_tau_sq, true);
        let admissible = (count_l == ceil_l && count_s == floor_s)
            || (count_l == floor_l && count_s == ceil_s);
        assert!(
            admissible,
            "counts ({count_l}, {count_s}) violate the admissible-pair law for n = {n}"
        );
    }
    Ok((count_l, count_s))
}

fn n_over_tau_floorceil(x: &QuadRat, ceil: bool) -> usize {
    let v = if ceil { x.ceil() } else { x.floor() };
    v.to_usize().expect("count fits usize")
}

/// Minus-family model set by the substitution route: bidirectional fixed
/// point seeded `S | L` with tiles `beta + 1` and `beta`. Returns nodes in
/// increasing order, gap letters, and the position of the origin node.
pub fn minus_model_set_substitution(
    field: FieldSpec,
    min_letters_each_side: usize,
) -> Result<(Vec<QuadRat>, Vec<Letter>, usize)> {
    let rule = SubstitutionRule::minus_model_set(field)?;
    let right = rule.fixed_point(Letter::L, min_letters_each_side)?;
    let left = rule.fixed_point_left(Letter::S, min_letters_each_side)?;
    let mut nodes = Vec::with_capacity(left.len() + right.len() + 1);
    let mut letters = Vec::with_capacity(left.len() + right.len());
    // Walk leftward from the origin, then reverse.
    let mut x = QuadRat::zero(field);
    let mut left_nodes = Vec::with_capacity(left.len());
    for &l in left.iter().rev() {
        x = &x - rule.tile_len(l);
        left_nodes.push(x.clone());
    }
    nodes.extend(left_nodes.into_iter().rev());
    letters.extend(left.iter().copied());
    let zero_pos = nodes.len();
    nodes.push(QuadRat::zero(field));
    let mut y = QuadRat::zero(field);
    for &l in &right {
        y = &y + rule.tile_len(l);
        nodes.push(y.clone());
        letters.push(l);
    }
    Ok((nodes, letters, zero_pos))
}

/// Minus-family model set by the sieving route: beta-integers whose Galois
/// conjugates fall in `[0, 1)`, restricted to `[-radius, radius]`.
pub fn minus_model_set_sieve(field: FieldSpec, radius: &QuadRat) -> Result<Vec<QuadRat>> {
    if field.family() != Family::Minus {
        return Err(Error::InvalidArgument(
            "sieving route is defined for the minus family".into(),
        ));
    }
    if radius.sign() <= 0 {
        return Err(Error::InvalidArgument("radius must be positive".into()));
    }
    // Generate positive beta-integers out to the radius. Tiles are at most
    // length 1, so radius/1 + slack letters suffice; grow adaptively.
    let mut word_length = 64usize;
    let seq = loop {
        let seq = generate_beta_integers(field, word_length, true)?;
        let (_, hi) = seq.index_range();
        if (seq.node(hi) - radius).sign() >= 0 {
            break seq;
        }
        word_length *= 2;
    };
    let window = ModelSetSpec::new(
        QuadRat::zero(field),
        QuadRat::one(field),
        true,
        true,
    )?;
    let mut out = Vec::new();
    for (_, x) in seq.iter_nodes() {
        if (x + radius).sign() < 0 || (x - radius).sign() > 0 {
            continue;
        }
        if window.contains(&x.conjugate()) {
            out.push(x.clone());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::Family;

    fn tau_field() -> FieldSpec {
        FieldSpec::golden()
    }

    fn fib(k_min: i64, k_max: i64) -> NodeSequence {
        generate_fibonacci_chain(&ModelSetSpec::default_fibonacci(), k_min, k_max).unwrap()
    }

    #[test]
    fn substitution_rules_are_stone_inflations_with_perron_scales() {
        let mut rules = vec![SubstitutionRule::fibonacci_rescaled()];
        for a in [1u32, 2, 3] {
            let f = FieldSpec::new(Family::Minus, a).unwrap();
            rules.push(SubstitutionRule::for_field(f));
            rules.push(SubstitutionRule::minus_model_set(f).unwrap());
        }
        for a in [3u32, 4] {
            rules.push(SubstitutionRule::for_field(
                FieldSpec::new(Family::Plus, a).unwrap(),
            ));
        }
        for rule in rules {
            assert!(rule.is_stone_inflation(), "stone inflation: {rule:?}");
            assert!(rule.scale_is_perron(), "perron scale: {rule:?}");
        }
    }

    #[test]
    fn fixed_point_extends_itself() {
        let rule = SubstitutionRule::for_field(tau_field());
        let word = rule.fixed_point(Letter::L, 100).unwrap();
        let image = rule.apply(&word);
        assert_eq!(&image[..word.len()], &word[..]);
        assert_eq!(
            word_string(&word[..10]),
            "LSLLSLSLLS",
            "golden fixed point prefix"
        );
    }

    #[test]
    fn beta_integer_generation_minimal_case() {
        let seq = generate_beta_integers(tau_field(), 1, false).unwrap();
        assert_eq!(seq.index_range(), (0, 1));
        assert_eq!(seq.node(0), &QuadRat::zero(tau_field()));
        assert_eq!(seq.node(1), &QuadRat::one(tau_field()));
        assert_eq!(seq.letter(0), Letter::L);
    }

    #[test]
    fn beta_integers_match_golden_listing() {
        // Positive tau-integers: 0, 1, tau, tau^2, tau^2 + 1, ...
        let seq = generate_beta_integers(tau_field(), 5, true).unwrap();
        let t = tau_field();
        assert_eq!(seq.node(0), &QuadRat::zero(t));
        assert_eq!(seq.node(1), &QuadRat::one(t));
        assert_eq!(seq.node(2), &QuadRat::from_pq_int(t, 0, 1));
        assert_eq!(seq.node(3), &QuadRat::from_pq_int(t, 1, 1));
        assert_eq!(seq.node(4), &QuadRat::from_pq_int(t, 2, 1));
        // Mirror side.
        assert_eq!(seq.node(-1), &QuadRat::from_pq_int(t, -1, 0));
        assert_eq!(seq.node(-2), &QuadRat::from_pq_int(t, 0, -1));
        assert_eq!(seq.letter(0), Letter::L);
        assert_eq!(seq.letter(1), Letter::S);
        assert_eq!(seq.letter(-1), Letter::L);
        assert_eq!(seq.letter(-2), Letter::S);
    }

    #[test]
    fn plus_family_beta_integers_match_golden_listing() {
        // For beta = tau^2: nodes 0, 1, 2, beta, beta+1, beta+2, 2beta,
        // 2beta+1, beta^2 with letters L L S L L S L S.
        let f = FieldSpec::new(Family::Plus, 3).unwrap();
        let seq = generate_beta_integers(f, 8, false).unwrap();
        let expect = [
            QuadRat::from_pq_int(f, 0, 0),
            QuadRat::from_pq_int(f, 1, 0),
            QuadRat::from_pq_int(f, 2, 0),
            QuadRat::from_pq_int(f, 0, 1),
            QuadRat::from_pq_int(f, 1, 1),
            QuadRat::from_pq_int(f, 2, 1),
            QuadRat::from_pq_int(f, 0, 2),
            QuadRat::from_pq_int(f, 1, 2),
            // beta^2 = 3 beta - 1
            QuadRat::from_pq_int(f, -1, 3),
        ];
        for (k, want) in expect.iter().enumerate() {
            assert_eq!(seq.node(k as i64), want, "node {k}");
        }
        let letters: String = word_string(&seq.word(0, 8).unwrap());
        assert_eq!(letters, "LLSLLSLS");
    }

    #[test]
    fn greedy_digits_frozen_cases() {
        let t = tau_field();
        // tau^2 + 1 -> 101
        let x = QuadRat::from_pq_int(t, 2, 1);
        assert_eq!(greedy_beta_digits(&x).unwrap(), "101");
        assert_eq!(greedy_beta_digits(&QuadRat::zero(t)).unwrap(), "0");
        assert_eq!(greedy_beta_digits(&QuadRat::one(t)).unwrap(), "1");
        // Plus family, beta = tau^2: 2*beta + 1 -> 21
        let f = FieldSpec::new(Family::Plus, 3).unwrap();
        assert_eq!(
            greedy_beta_digits(&QuadRat::from_pq_int(f, 1, 2)).unwrap(),
            "21"
        );
        // beta^2 -> 100
        assert_eq!(
            greedy_beta_digits(&QuadRat::from_pq_int(f, -1, 3)).unwrap(),
            "100"
        );
        // tau + 1/tau is not a beta-integer (non-integer coordinates).
        let bad = QuadRat::from_ratio(t, 1, 2, 1, 1);
        assert!(matches!(
            greedy_beta_digits(&bad),
            Err(Error::NotABetaInteger(_))
        ));
        // 2 - tau is in Z[tau] but not a tau-integer: its expansion would
        // need fractional powers.
        let frac = QuadRat::from_pq_int(t, 2, -1);
        assert!(matches!(
            greedy_beta_digits(&frac),
            Err(Error::NotABetaInteger(_))
        ));
    }

    #[test]
    fn greedy_digits_respect_forbidden_patterns_and_reevaluate() {
        // Golden field: no "11" substring; digits re-evaluate to the node.
        let t = tau_field();
        let seq = generate_beta_integers(t, 200, false).unwrap();
        for (_, x) in seq.iter_nodes() {
            let digits = greedy_beta_digit_vec(x).unwrap();
            for pair in digits.windows(2) {
                assert!(
                    !(pair[0] == 1 && pair[1] == 1),
                    "golden expansions never contain 11"
                );
            }
            let mut acc = QuadRat::zero(t);
            for &d in &digits {
                acc = &(&acc * &t.beta()) + &QuadRat::from_int(t, i64::from(d));
            }
            assert_eq!(&acc, x);
        }
        // Plus family: no 2 1^n 2 pattern.
        let f = FieldSpec::new(Family::Plus, 3).unwrap();
        let seq = generate_beta_integers(f, 200, false).unwrap();
        for (_, x) in seq.iter_nodes() {
            let digits = greedy_beta_digit_vec(x).unwrap();
            let mut last_two: Option<usize> = None;
            for (i, &d) in digits.iter().enumerate() {
                if d == 2 {
                    if let Some(j) = last_two {
                        assert!(
                            digits[j + 1..i].iter().any(|&m| m != 1),
                            "forbidden 2 1^n 2 pattern in expansion of {x}"
                        );
                    }
                    last_two = Some(i);
                } else if d != 1 {
                    last_two = None;
                }
            }
        }
    }

    #[test]
    fn fibonacci_chain_matches_golden_table() {
        let seq = fib(-5, 5);
        let t = tau_field();
        let expect_pq: [(i64, i64); 11] = [
            (-1, -2),
            (0, -2),
            (1, -2),
            (0, -1),
            (1, -1),
            (0, 0),
            (1, 0),
            (2, 0),
            (1, 1),
            (2, 1),
            (3, 1),
        ];
        let expect_letters = "LLSLSLLSLLS";
        let expect_flags = [
            true, false, false, true, false, true, false, false, true, false, false,
        ];
        let theta = QuadRat::from_pq_int(t, 1, 1);
        for (j, k) in (-5i64..=5).enumerate() {
            let (p, q) = expect_pq[j];
            assert_eq!(seq.node(k), &QuadRat::from_pq_int(t, p, q), "node {k}");
            assert_eq!(
                seq.in_theta_lambda(seq.node(k), &theta).unwrap(),
                expect_flags[j],
                "membership flag at {k}"
            );
        }
        let word = seq.word(-5, 11 - 1).unwrap();
        assert_eq!(word_string(&word), &expect_letters[..10]);
        // The closed formula extends beyond the generated range.
        assert_eq!(fibonacci_node(8), QuadRat::from_pq_int(t, 2, 3));
    }

    #[test]
    fn fibonacci_chain_is_self_similar() {
        let seq = fib(-40, 40);
        let theta = QuadRat::from_pq_int(tau_field(), 1, 1);
        let (lo, hi) = seq.index_range();
        for (k, x) in seq.iter_nodes() {
            let scaled = x * &theta;
            if (scaled.total_cmp(seq.node(lo)) != Ordering::Less)
                && (scaled.total_cmp(seq.node(hi)) != Ordering::Greater)
            {
                // tau^2 Lambda is a subset of Lambda.
                assert!(
                    seq.find_node(&scaled).is_some(),
                    "tau^2 * lambda_{k} missing from the chain"
                );
                assert!(seq.in_theta_lambda(&scaled, &theta).unwrap());
            }
        }
    }

    #[test]
    fn membership_flag_equals_letter_structure() {
        // lambda_{n+1} in tau^2 Lambda exactly when the gap at n is labeled
        // by the second tile of an inflated L, i.e. the E set below equals
        // the L-labeled positions. Checked here in the raw membership form.
        let seq = fib(-30, 30);
        let theta = QuadRat::from_pq_int(tau_field(), 1, 1);
        let (llo, lhi) = seq.letter_range();
        for k in llo..=lhi {
            let is_l = seq.letter(k) == Letter::L;
            let next_in = seq.in_theta_lambda(seq.node(k + 1), &theta).unwrap();
            assert_eq!(is_l, !next_in, "letter/membership duality at {k}");
        }
    }

    #[test]
    fn rescaling_preserves_membership_bookkeeping() {
        let seq = fib(-10, 10);
        let t = tau_field();
        let theta = QuadRat::from_pq_int(t, 1, 1);
        let scaled = seq.rescale(&theta).unwrap();
        assert_eq!(scaled.source(), SequenceSource::Rescaled);
        assert_eq!(scaled.node(3), &(seq.node(3) * &theta));
        // Membership in theta * (tau^2 Lambda) still works after rescaling.
        for k in [-5i64, -2, 0, 3] {
            let inner = seq.in_theta_lambda(seq.node(k), &theta).unwrap();
            let outer = scaled
                .in_theta_lambda(&(seq.node(k) * &theta), &theta)
                .unwrap();
            assert_eq!(inner, outer, "membership must commute with rescaling");
        }
    }

    #[test]
    fn neighbor_map_walks_the_chain() {
        let seq = fib(-20, 20);
        let (lo, hi) = seq.index_range();
        for k in lo..hi {
            let here = seq.node(k).conjugate();
            let right = neighbor_map(&here, Direction::Right).unwrap();
            assert_eq!(
                right,
                seq.node(k + 1).conjugate(),
                "right neighbor of index {k}"
            );
            let back = neighbor_map(&right, Direction::Left).unwrap();
            assert_eq!(back, here, "left inverts right at index {k}");
        }
        let outside = QuadRat::from_pq_int(tau_field(), 3, 0);
        assert!(matches!(
            neighbor_map(&outside, Direction::Right),
            Err(Error::OutOfWindow(_))
        ));
    }

    #[test]
    fn word_classification_small_orders() {
        let seq = fib(-30, 30);
        let classes = classify_words(&seq, 1).unwrap();
        assert_eq!(classes.len(), 2);
        assert_eq!(word_string(&classes[0].word), "L");
        assert_eq!(word_string(&classes[1].word), "S");
        let t = tau_field();
        // L window [0, tau), S window [tau, tau^2).
        assert_eq!(classes[0].window.lo(), &QuadRat::zero(t));
        assert_eq!(classes[0].window.hi(), &QuadRat::from_pq_int(t, 0, 1));
        assert_eq!(classes[1].window.hi(), &QuadRat::from_pq_int(t, 1, 1));

        let classes = classify_words(&seq, 2).unwrap();
        assert_eq!(classes.len(), 3);
        let words: Vec<String> = classes.iter().map(|c| word_string(&c.word)).collect();
        assert_eq!(words, ["LL", "LS", "SL"]);
        // LL window is [0, 1/tau).
        assert_eq!(classes[0].window.hi(), &QuadRat::from_pq_int(t, -1, 1));
        for class in &classes {
            assert!(!class.members.is_empty());
        }
    }

    #[test]
    fn left_ends_realize_every_word() {
        let seq = fib(-60, 60);
        for n in 1..=8usize {
            let reps = left_ends_of_all_words(&seq, n).unwrap();
            assert_eq!(reps, (-(n as i64)..=0).collect::<Vec<_>>());
        }
        assert!(matches!(
            classify_words(&fib(-2, 5), 4),
            Err(Error::SequenceTooShort(_))
        ));
    }

    #[test]
    fn letter_counts_follow_the_chain_laws() {
        let seq = fib(-80, 80);
        let (llo, lhi) = seq.letter_range();
        for n in [1usize, 2, 3, 5, 8, 13, 20] {
            for start in llo..=(lhi - n as i64 + 1) {
                // The assertions inside cover the formula and the pair law.
                let (l, s) = word_letter_counts(&seq, start, n).unwrap();
                assert_eq!(l + s, n);
            }
        }
        // Frozen case: the 5-letter word at the origin is LLSLL -> (4, 1).
        assert_eq!(word_letter_counts(&seq, 0, 5).unwrap(), (4, 1));
    }

    #[test]
    fn model_set_routes_agree() {
        for a in [1u32, 2, 3] {
            let field = FieldSpec::new(Family::Minus, a).unwrap();
            let (nodes, letters, zero_pos) =
                minus_model_set_substitution(field, 40).unwrap();
            assert!(nodes[zero_pos].is_zero());
            // Compare against sieving on a conservative shared radius.
            let radius = QuadRat::from_int(field, 25);
            let sieved = minus_model_set_sieve(field, &radius).unwrap();
            let subs_in_radius: Vec<&QuadRat> = nodes
                .iter()
                .filter(|x| (*x + &radius).sign() >= 0 && (*x - &radius).sign() <= 0)
                .collect();
            // The substitution window must cover the radius on both sides.
            assert!((nodes.first().unwrap() + &radius).sign() < 0);
            assert!((nodes.last().unwrap() - &radius).sign() > 0);
            assert_eq!(subs_in_radius.len(), sieved.len(), "a = {a}");
            for (x, y) in subs_in_radius.iter().zip(sieved.iter()) {
                assert_eq!(*x, y, "node mismatch for a = {a}");
            }
            // Letters are forced by the gaps; check the letter labels match
            // the gap lengths of the sieved route.
            let rule = SubstitutionRule::minus_model_set(field).unwrap();
            for (i, pair) in nodes.windows(2).enumerate() {
                let gap = &pair[1] - &pair[0];
                assert_eq!(&gap, rule.tile_len(letters[i]), "gap letter {i}");
            }
        }
    }

    #[test]
    fn csv_export_has_exact_and_float_columns() {
        let seq = fib(-2, 2);
        let theta = QuadRat::from_pq_int(tau_field(), 1, 1);
        let csv = seq.to_csv(&theta).unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "index,p,q,value,letter,in_theta_lambda");
        let first = lines.next().unwrap();
        assert_eq!(first, "-2,0/1,-1/1,-1.6180339887,L,true");
        assert_eq!(csv.lines().count(), 6);
        let last = csv.lines().last().unwrap();
        assert!(last.starts_with("2,2/1,0/1,2.0000000000,"));
        assert!(last.ends_with(",false"), "no letter on the last node: {last}");
    }

    #[test]
    fn integer_lattice_membership_uses_node_search() {
        let seq = integer_lattice(tau_field(), -8, 8).unwrap();
        let two = QuadRat::from_int(tau_field(), 2);
        assert!(seq.in_theta_lambda(&QuadRat::from_int(tau_field(), 4), &two).unwrap());
        assert!(!seq
            .in_theta_lambda(&QuadRat::from_int(tau_field(), 3), &two)
            .unwrap());
        // Beyond the generated range the question is undecidable.
        assert!(matches!(
            seq.in_theta_lambda(&QuadRat::from_int(tau_field(), 40), &two),
            Err(Error::OutOfWindow(_))
        ));
    }
}
