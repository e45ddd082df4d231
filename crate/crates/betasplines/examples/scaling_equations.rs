//! Two-scale equations for the scaling functions: each order-s spline on
//! the inflated chain expands exactly in the splines of the original chain.

use betasplines::{
    bspline, generate_fibonacci_chain, scaling_classes, scaling_equation_at,
    scaling_equation_tables, word_string, FieldSpec, ModelSetSpec, PiecewisePoly, QuadRat,
    Result,
};

fn main() -> Result<()> {
    let seq = generate_fibonacci_chain(&ModelSetSpec::default_fibonacci(), -30, 30)?;
    let field = FieldSpec::golden();
    let theta = QuadRat::from_pq_int(field, 1, 1);
    let s = 2;

    // One table per translation class. Every coefficient is exact.
    for table in scaling_equation_tables(&seq, &theta, s)? {
        println!("{}({}x - .) =", table.target, theta);
        for term in &table.terms {
            println!(
                "    {:>24}  * {}(x - {})",
                term.coefficient.canonical_string(),
                format_args!("phi_{}", word_string(&term.word)),
                term.translate.canonical_string()
            );
        }
    }

    // The builders verify the identity before returning, but it is cheap
    // to re-check one case end to end: realize the right-hand side as a
    // single piecewise polynomial and compare it against the dilated
    // spline on the left.
    let classes = scaling_classes(&seq, s)?;
    let table = scaling_equation_at(&seq, &theta, s, -1)?;
    let rhs = table.realize(&classes)?;
    let lhs = bspline(&seq, -1, s)?
        .precompose_scale_shift(&theta.inv()?, &QuadRat::zero(field))?;
    let one = QuadRat::one(field);
    let diff = PiecewisePoly::linear_combination(&[(one.clone(), &lhs), (-&one, &rhs)])?;
    assert!(diff.is_zero());
    println!("\nrealized the right-hand side for the spline at node -1: exact match");
    Ok(())
}
