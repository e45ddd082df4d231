//! Non-uniform B-splines on the chain, built by two independent routes
//! that must agree: a convolution-style recurrence and antidifferentiated
//! Vandermonde weights.

use betasplines::{
    bspline, bspline_by_recurrence, bspline_by_vandermonde, generate_fibonacci_chain,
    scaling_classes, word_string, FieldSpec, ModelSetSpec, QuadRat, Result,
};

fn main() -> Result<()> {
    let seq = generate_fibonacci_chain(&ModelSetSpec::default_fibonacci(), -20, 20)?;
    let field = FieldSpec::golden();

    for s in [2usize, 3, 4] {
        let b = bspline(&seq, -1, s)?;
        let (lo, hi) = b.support();
        println!(
            "order {s}: support [{}, {}] over {} tiles, integral {}",
            lo.canonical_string(),
            hi.canonical_string(),
            b.num_pieces(),
            b.moment(0)
        );

        // The defining properties: s + 1 nodes of support and a fixed
        // integral (support length) / s.
        assert_eq!(b.num_pieces(), s);
        let length = hi - lo;
        let expected = length.checked_div(&QuadRat::from_pq_int(field, s as i64, 0))?;
        assert_eq!(b.moment(0), expected);

        // Both construction routes give the same piecewise polynomial,
        // after the truncated-power route is scaled to the recurrence
        // normalization.
        let by_recurrence = bspline_by_recurrence(&seq, -1, s)?;
        let (by_vandermonde, weights, constant) = bspline_by_vandermonde(&seq, -1, s)?;
        assert_eq!(by_recurrence, by_vandermonde, "routes disagree for order {s}");
        println!(
            "         routes agree exactly ({} weights, scale {})",
            weights.len(),
            constant
        );
    }

    // Evaluation is exact at exact points: the order-2 hat at its peak.
    let hat = bspline(&seq, -1, 2)?;
    let peak = seq.node(0);
    println!("\nhat value at its peak node: {}", hat.eval(peak));

    // There are exactly s + 1 translation classes of order-s splines, one
    // per s-letter word of the chain.
    for s in [2usize, 3] {
        let classes = scaling_classes(&seq, s)?;
        let words: Vec<String> = classes.iter().map(|c| word_string(&c.word)).collect();
        println!("order {s} classes: {}", words.join(" "));
        assert_eq!(classes.len(), s + 1);
    }
    Ok(())
}
