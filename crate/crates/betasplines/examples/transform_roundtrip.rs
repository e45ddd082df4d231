//! Finite-window multiresolution transform: project a function onto the
//! scaling basis, split it into a coarse part plus wavelet details, and
//! put it back together without losing a single coefficient.

use betasplines::{
    decompose, generate_fibonacci_chain, project, reconstruct, scaling_classes, word_string,
    BasisKind, Coefficient, CoefficientEntry, CoefficientVector, FieldSpec, ModelSetSpec,
    NumericMode, PiecewisePoly, QuadRat, Result,
};

fn main() -> Result<()> {
    let seq = generate_fibonacci_chain(&ModelSetSpec::default_fibonacci(), -25, 25)?;
    let field = FieldSpec::golden();
    let theta = QuadRat::from_pq_int(field, 1, 1);
    let s = 2;
    let window = (-10i64, 10i64);

    // Assemble an element of the scaling space by hand: a hat comb with
    // exact rational weights.
    let weights: Vec<(i64, QuadRat)> = (-8i64..=6)
        .map(|k| (k, QuadRat::from_ratio(field, k.rem_euclid(5) + 1, 3, k.rem_euclid(3) - 1, 2)))
        .collect();
    let entries: Vec<CoefficientEntry> = weights
        .iter()
        .map(|(k, w)| CoefficientEntry {
            word: seq.word(*k, s).unwrap(),
            index: *k,
            position: seq.node(*k).clone(),
            value: Coefficient::Exact(w.clone()),
            trusted: true,
        })
        .collect();
    let input = CoefficientVector::new(0, s, BasisKind::Scaling, window, NumericMode::Exact, entries)?;
    println!("input: {} hat coefficients on window {:?}", input.len(), window);

    // One analysis step: coarse coefficients live on the inflated chain,
    // details on the wavelet translates inside the window.
    let (coarse, detail) = decompose(&input, &seq, &theta)?;
    println!(
        "decomposed into {} coarse + {} detail coefficients",
        coarse.len(),
        detail.len()
    );
    for entry in detail.entries.iter().take(4) {
        println!(
            "    detail at node {:>3} (word {}): {}",
            entry.index,
            word_string(&entry.word),
            match &entry.value {
                Coefficient::Exact(v) => v.canonical_string(),
                Coefficient::Float(v) => v.to_string(),
            }
        );
    }

    // One synthesis step restores every input coefficient exactly.
    let restored = reconstruct(&coarse, &detail, &seq, &theta)?;
    for (k, w) in &weights {
        let value = restored.value_at(*k).expect("index restored");
        match value {
            Coefficient::Exact(v) => assert_eq!(v, w, "coefficient at {k}"),
            Coefficient::Float(_) => unreachable!("exact mode stays exact"),
        }
    }
    println!("round trip exact: all {} coefficients match", weights.len());

    // The same machinery recovers coefficients from a raw function via the
    // windowed normal equations.
    let classes = scaling_classes(&seq, s)?;
    let shape = |k: i64| -> Result<PiecewisePoly> {
        let class = classes
            .iter()
            .find(|c| c.word == seq.word(k, s).unwrap())
            .expect("class exists");
        Ok(class.spline.translate(&(seq.node(k) - seq.node(class.representative))))
    };
    let mut terms = Vec::new();
    let mut shapes = Vec::new();
    for (k, w) in &weights {
        shapes.push((w.clone(), shape(*k)?));
    }
    for (w, f) in &shapes {
        terms.push((w.clone(), f));
    }
    let f = PiecewisePoly::linear_combination(&terms)?;
    let (projected, report) = project(&f, &seq, &theta, s, 0, window, NumericMode::Exact)?;
    println!(
        "projection over {} basis functions (condition ~ {:.1}) recovers the weights: {}",
        report.basis_size,
        report.condition,
        weights
            .iter()
            .all(|(k, w)| matches!(projected.value_at(*k), Some(Coefficient::Exact(v)) if v == w))
    );
    Ok(())
}
