//! The Fibonacci chain as a cut-and-project set: nodes, conjugates inside
//! the acceptance window, membership in the inflated copy, and the
//! neighbor exchange map on the window.

use betasplines::{
    fibonacci_node, generate_fibonacci_chain, neighbor_map, Direction, FieldSpec,
    ModelSetSpec, QuadRat, Result,
};

fn main() -> Result<()> {
    let window = ModelSetSpec::default_fibonacci();
    let seq = generate_fibonacci_chain(&window, -8, 8)?;
    let field = FieldSpec::golden();
    let theta = QuadRat::from_pq_int(field, 1, 1); // tau^2, the inflation factor

    println!(
        "{:>5}  {:<14} {:>12}  {:<14} {:>6}  {}",
        "index", "node", "value", "conjugate", "letter", "in theta*Lambda"
    );
    for (k, node) in seq.iter_nodes() {
        let letter = seq.try_letter(k).map(|l| l.to_string()).unwrap_or_default();
        println!(
            "{k:>5}  {:<14} {:>12.6}  {:<14} {:>6}  {}",
            node.canonical_string(),
            node.to_f64(),
            node.conjugate().canonical_string(),
            letter,
            seq.in_theta_lambda(node, &theta)?
        );
    }

    // Every node is produced by a closed formula in the index alone, so a
    // freshly generated chain can be spot-checked pointwise.
    for k in -8..=8 {
        assert_eq!(seq.node(k), &fibonacci_node(k));
    }
    println!("\nclosed-form node check passed for all indices");

    // Conjugates fill the window [0, tau^2) and the successor of a node is
    // an interval exchange on those conjugates.
    let start = seq.node(0).conjugate();
    let mut walk = start.clone();
    print!("conjugate walk from the origin:");
    for _ in 0..6 {
        print!(" {}", walk.to_decimal_string(4)?);
        walk = neighbor_map(&walk, Direction::Right)?;
    }
    println!();
    assert_eq!(neighbor_map(&start, Direction::Right)?, seq.node(1).conjugate());
    assert_eq!(
        neighbor_map(&seq.node(1).conjugate(), Direction::Left)?,
        start
    );

    // Inflating the chain keeps it inside itself: theta * node is again a
    // node whenever the conjugate of the product stays in the window.
    let inflated: Vec<i64> = seq
        .iter_nodes()
        .filter(|(_, x)| seq.in_theta_lambda(x, &theta).unwrap_or(false))
        .map(|(k, _)| k)
        .collect();
    println!("indices landing in theta*Lambda: {inflated:?}");
    Ok(())
}
