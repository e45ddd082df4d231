//! Exact arithmetic in the quadratic fields Q(beta): construction,
//! conjugation, sign tests, floors, and canonical strings.

use betasplines::{Family, FieldSpec, QuadRat, Result};

fn main() -> Result<()> {
    // The golden ratio solves x^2 = x + 1, the simplest Minus-family unit.
    let golden = FieldSpec::golden();
    let tau = golden.beta();
    println!("golden field: beta = {} ~ {:.12}", tau, golden.beta_f64());

    // Elements are pairs of exact rationals p + q*beta; products reduce
    // through the defining relation, so tau^2 comes out as 1 + 1*tau.
    let tau_sq = &tau * &tau;
    println!("tau^2        = {}", tau_sq);
    assert_eq!(tau_sq, QuadRat::from_pq_int(golden, 1, 1));

    let tau_5 = &(&tau_sq * &tau_sq) * &tau;
    println!("tau^5        = {} ~ {:.6}", tau_5, tau_5.to_f64());
    println!("floor(tau^5) = {}", tau_5.floor());
    println!("tau^5 digits: {}", tau_5.to_decimal_string(12)?);

    // Galois conjugation swaps the roots; for a unit the conjugate is the
    // negated inverse, so x * x' is the rational norm.
    let x = QuadRat::from_ratio(golden, -1, 2, 3, 7);
    let norm = &x * &x.conjugate();
    println!("x = {}, x' = {}, x*x' = {}", x, x.conjugate(), norm);
    assert_eq!(norm, QuadRat::from_ratio(golden, -29, 196, 0, 1));

    // Comparisons are decided by integer case analysis, never by floats.
    let close = QuadRat::from_ratio(golden, 987, 610, 0, 1);
    println!(
        "987/610 vs tau: {:?} (difference {})",
        close.total_cmp(&tau),
        (&close - &tau).to_decimal_string(10)?
    );
    assert!((&close - &tau).sign() < 0);

    // Division is exact whenever the divisor is nonzero.
    let quotient = tau_5.checked_div(&x)?;
    assert_eq!(&quotient * &x, tau_5);
    println!("tau^5 / x    = {}", quotient);

    // The Plus family solves x^2 = a*x - 1 and needs a >= 3.
    let plus = FieldSpec::new(Family::Plus, 3)?;
    let beta = plus.beta();
    println!("\nplus field (a = 3): beta = {} ~ {:.12}", beta, plus.beta_f64());
    let check = &(&beta * &beta) - &(&QuadRat::from_pq_int(plus, 0, 3) - &QuadRat::one(plus));
    println!("beta^2 - (3*beta - 1) = {}", check);
    assert!(check.is_zero());

    // Canonical strings round-trip through the parser.
    let text = x.canonical_string();
    let back = betasplines::parse_canonical(golden, &text)?;
    println!("\ncanonical form {:?} parses back to {}", text, back);
    assert_eq!(back, x);

    Ok(())
}
