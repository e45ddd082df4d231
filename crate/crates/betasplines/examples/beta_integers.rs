//! Beta-integers of a quadratic Pisot unit: the fixed-point substitution
//! word, node coordinates, and greedy digit expansions.

use betasplines::{
    generate_beta_integers, greedy_beta_digits, word_string, Family, FieldSpec, Result,
};

fn main() -> Result<()> {
    let field = FieldSpec::golden();
    let seq = generate_beta_integers(field, 12, false)?;

    // The gaps between consecutive beta-integers follow the fixed point of
    // the substitution L -> LS, S -> L, read from the origin outwards.
    let (lo, hi) = seq.letter_range();
    println!("substitution word: {}", word_string(&seq.word(lo, (hi - lo + 1) as usize)?));

    println!("\n{:>5}  {:<14} {:<20} {}", "index", "node", "value", "digits");
    for (k, node) in seq.iter_nodes() {
        println!(
            "{k:>5}  {:<14} {:<20} {}",
            node.canonical_string(),
            node.to_f64(),
            greedy_beta_digits(node)?
        );
    }

    // Greedy digit strings never contain the factor "11": a digit 1 is
    // always followed by 0 because tau^k = tau^(k-1) + tau^(k-2) would
    // otherwise carry.
    for (_, node) in seq.iter_nodes() {
        assert!(!greedy_beta_digits(node)?.contains("11"));
    }

    // Mirrored generation covers the negative axis as well.
    let mirrored = generate_beta_integers(field, 5, true)?;
    let (a, b) = mirrored.index_range();
    println!("\nmirrored range {a}..={b}:");
    for (k, node) in mirrored.iter_nodes() {
        println!("{k:>4}: {}", node.canonical_string());
    }

    // The Plus family (x^2 = ax - 1) produces its own tiling with two tile
    // lengths 1 and beta - 1.
    let plus = FieldSpec::new(Family::Plus, 3)?;
    let plus_seq = generate_beta_integers(plus, 8, false)?;
    let word: String = word_string(&plus_seq.word(0, 8)?);
    println!("\nplus family a = 3, first letters: {word}");
    println!(
        "tile lengths: L = {}, S = {}",
        plus_seq.tile_len(betasplines::Letter::L),
        plus_seq.tile_len(betasplines::Letter::S)
    );
    Ok(())
}
