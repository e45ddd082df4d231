//! Finite-section Riesz bound estimates: extreme eigenvalues of the
//! normalized Gram matrices of scaling, wavelet, and Haar families as the
//! analysis window grows.

use betasplines::{
    frame_bounds, generate_fibonacci_chain, FieldSpec, FrameBasis, ModelSetSpec, QuadRat,
    Result,
};

fn main() -> Result<()> {
    let seq = generate_fibonacci_chain(&ModelSetSpec::default_fibonacci(), -60, 60)?;
    let field = FieldSpec::golden();
    let theta = QuadRat::from_pq_int(field, 1, 1);

    // The orthonormal Haar family is the calibration case: both bounds
    // must sit at exactly 1 whatever the window.
    let haar = frame_bounds(&seq, &theta, &FrameBasis::HaarOrthonormal, &[8, 16, 32])?;
    println!("orthonormal Haar family:");
    for estimate in &haar.estimates {
        println!(
            "    {:>3} functions on window {:?}: bounds [{:.9}, {:.9}]",
            estimate.basis_size, estimate.window, estimate.lower, estimate.upper
        );
        assert!((estimate.lower - 1.0).abs() < 1e-9);
        assert!((estimate.upper - 1.0).abs() < 1e-9);
    }

    // Hat functions overlap, so their Gram matrix has genuine spread; the
    // lower estimate decreases and the upper increases as sections grow,
    // squeezing toward the true Riesz bounds.
    let hats = frame_bounds(&seq, &theta, &FrameBasis::Scaling { s: 2 }, &[8, 16, 32, 48])?;
    println!("\norder-2 scaling family:");
    for estimate in &hats.estimates {
        println!(
            "    {:>3} functions on window {:?}: bounds [{:.6}, {:.6}]",
            estimate.basis_size, estimate.window, estimate.lower, estimate.upper
        );
    }
    assert!(hats.lower_nonincreasing && hats.upper_nondecreasing);

    // The wavelet family keeps a healthy lower bound: no near-degenerate
    // directions show up as the window widens.
    let wavelets = frame_bounds(&seq, &theta, &FrameBasis::Wavelets { s: 2 }, &[16, 28, 40])?;
    println!("\norder-2 wavelet family:");
    for estimate in &wavelets.estimates {
        println!(
            "    {:>3} wavelets on window {:?}: bounds [{:.6}, {:.6}]",
            estimate.basis_size, estimate.window, estimate.lower, estimate.upper
        );
        assert!(estimate.lower > 1e-3);
    }
    let first = wavelets.estimates.first().unwrap();
    let last = wavelets.estimates.last().unwrap();
    println!(
        "\nlower bound drift across windows: {:.2}%",
        100.0 * (first.lower - last.lower).abs() / first.lower
    );
    Ok(())
}
