//! Minimal-support spline wavelets: the admissible support words, the
//! interpolating construction, vanishing moments, and exact coefficients.

use betasplines::{
    build_psi_spline, compute_e, enumerate_mother_words, generate_fibonacci_chain,
    mother_wavelets, word_string, FieldSpec, ModelSetSpec, QuadRat, Result,
};

fn main() -> Result<()> {
    let seq = generate_fibonacci_chain(&ModelSetSpec::default_fibonacci(), -40, 40)?;
    let field = FieldSpec::golden();
    let theta = QuadRat::from_pq_int(field, 1, 1);

    // Wavelet supports start at the nodes that do not land in the inflated
    // set and whose successor does not either.
    let starts = compute_e(&seq, &theta)?;
    let near_origin: Vec<i64> = starts.iter().copied().filter(|k| k.abs() <= 8).collect();
    println!("admissible support starts near the origin: {near_origin:?}");

    // For s vanishing moments there are exactly 2s distinct support words.
    for s in [2usize, 3, 4] {
        let words = enumerate_mother_words(&seq, &theta, s)?;
        let rendered: Vec<String> = words.iter().map(|w| word_string(w)).collect();
        println!("s = {s}: {} mother wavelets: {}", words.len(), rendered.join(" "));
        assert_eq!(words.len(), 2 * s);
    }

    // Each wavelet is the 2s-th derivative of a spline of order 2s that
    // interpolates zero at every interior inflated node. Build one by hand
    // with interpolation value 1 and inspect it.
    let s = 2;
    let mothers = mother_wavelets(&seq, &theta, s)?;
    for mother in &mothers {
        let word = word_string(&mother.plan.word);
        println!(
            "\nzeta_{word}: support {} tiles starting at node {}, |zeta|^2 = {}",
            mother.plan.big_n,
            mother.plan.n,
            mother.norm_sq.canonical_string()
        );

        // s vanishing moments, checked exactly.
        for k in 0..s {
            let moment = mother.zeta.moment(k);
            assert!(moment.is_zero(), "moment {k} of zeta_{word} is {moment}");
        }
        println!("    moments 0..{} vanish exactly", s - 1);

        // The interpolating spline vanishes at every interior inflated
        // node and takes the value 1 at the first interior node, which is
        // never an inflated one.
        let psi = build_psi_spline(&seq, &mother.plan, &QuadRat::one(field))?;
        for &k in &mother.plan.theta_points_inside {
            assert!(psi.eval(seq.node(k)).is_zero());
        }
        assert_eq!(psi.eval(seq.node(mother.plan.n + 1)), QuadRat::one(field));
        println!(
            "    interpolation conditions hold at {:?}",
            mother.plan.theta_points_inside
        );
    }

    // The first piece of each profile, in exact coordinates.
    println!("\nleading piece of each profile (local variable t):");
    for mother in &mothers {
        let piece = mother.zeta.piece(0);
        println!(
            "    zeta_{}: {} + {} t",
            word_string(&mother.plan.word),
            piece[0].canonical_string(),
            piece[1].canonical_string()
        );
    }
    Ok(())
}
