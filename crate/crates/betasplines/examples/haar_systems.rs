//! Haar-type systems on the two tile lengths: scaling functions, wavelets,
//! refinement rules, and exact orthonormality.

use betasplines::{
    generate_beta_integers, haar_system, word_string, Family, FieldSpec, HaarVariant, Result,
};

fn main() -> Result<()> {
    // The golden field carries the classic pair: one scaling function per
    // tile letter and one wavelet per two-letter word.
    let field = FieldSpec::golden();
    let system = haar_system(field, HaarVariant::Orthonormal)?;

    println!("orthonormal system over {} tile letters:", 2);
    for wavelet in &system.wavelets {
        let (lo, hi) = wavelet.function.support();
        println!(
            "  {} on word {}: support [{}, {}]",
            wavelet.label,
            word_string(&wavelet.word),
            lo.canonical_string(),
            hi.canonical_string()
        );
    }

    // Refinement: every system function at the coarse scale is a finite
    // combination of fine-scale pieces. The rules are exact.
    println!("\nrefinement rules:");
    for rule in &system.refinement {
        println!("  {} expands into {} terms", rule.label, rule.terms.len());
    }

    // Pairwise inner products stay in the field extended by a single
    // square root, so orthonormality is a symbolic statement.
    let seq = generate_beta_integers(field, 20, false)?;
    for wavelet in &system.wavelets {
        let self_product = wavelet.function.inner_product(&wavelet.function)?;
        println!("  <{label}, {label}> = {self_product}", label = wavelet.label);
    }
    let translates = system.wavelet_translates(&system.wavelets[0].label, &seq)?;
    println!(
        "\n{} admissible translates of {} inside the generated range",
        translates.len(),
        system.wavelets[0].label
    );

    // The Riesz variant trades orthonormality for simpler profiles.
    let riesz = haar_system(field, HaarVariant::Riesz)?;
    println!("riesz variant carries {} wavelets", riesz.wavelets.len());

    // Plus-family fields (x^2 = ax - 1) have their own systems.
    let plus = FieldSpec::new(Family::Plus, 3)?;
    let plus_system = haar_system(plus, HaarVariant::Orthonormal)?;
    println!(
        "plus family a = 3: {} wavelets over tile lengths 1 and beta - 1",
        plus_system.wavelets.len()
    );
    Ok(())
}
