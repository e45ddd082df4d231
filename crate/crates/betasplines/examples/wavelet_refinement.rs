//! Wavelet two-scale equations: every profile expands exactly in the hat
//! functions of its own chain, and rescaling divides norms by the
//! inflation factor.

use betasplines::{
    generate_fibonacci_chain, wavelet_equations_at_seeds, wavelet_scaling_equations,
    word_string, FieldSpec, ModelSetSpec, QuadRat, Result,
};

fn main() -> Result<()> {
    let seq = generate_fibonacci_chain(&ModelSetSpec::default_fibonacci(), -40, 40)?;
    let field = FieldSpec::golden();
    let theta = QuadRat::from_pq_int(field, 1, 1);
    let s = 2;

    // The library form: one equation per mother wavelet, derived where
    // each support word was first found.
    for equation in wavelet_scaling_equations(&seq, &theta, s)? {
        let word = word_string(&equation.wavelet.plan.word);
        println!(
            "zeta_{word} = sum of {} hat terms, |zeta|^2 = {}",
            equation.table.terms.len(),
            equation.wavelet.norm_sq.canonical_string()
        );
    }

    // The export form relocates each equation to a seed near the origin
    // and resolves hat positions to node indices.
    println!("\nseeded equations with explicit nodes:");
    for equation in wavelet_equations_at_seeds(&seq, &theta, s, None)? {
        println!(
            "zeta_{} seeded at node {} ({}):",
            equation.word, equation.seed_index, equation.seed_node
        );
        for term in &equation.terms {
            println!(
                "    phi_{} at node {:>3}: {}",
                term.phi, term.node_index, term.coefficient
            );
        }
        println!(
            "    rescaled norm |zeta(theta .)| = {:.4} (exact square {})",
            equation.norm_scaled, equation.norm_sq_scaled
        );
    }

    // Rescaling x -> theta*x contracts supports and divides the squared
    // norm by theta exactly.
    for equation in wavelet_scaling_equations(&seq, &theta, s)? {
        let scaled_back = &equation.wavelet.norm_sq_scaled * &theta;
        assert_eq!(scaled_back, equation.wavelet.norm_sq);
    }
    println!("\n|zeta(theta .)|^2 * theta = |zeta|^2 holds exactly for all four profiles");
    Ok(())
}
