//! Word combinatorics of the chain: the n + 1 distinct n-letter words,
//! their acceptance windows, and the letter-count law for long factors.

use betasplines::{
    classify_words, generate_fibonacci_chain, word_letter_counts, word_string,
    ModelSetSpec, Result,
};

fn main() -> Result<()> {
    let seq = generate_fibonacci_chain(&ModelSetSpec::default_fibonacci(), -80, 80)?;

    // A Sturmian sequence has exactly n + 1 distinct subwords of length n.
    for n in 1..=6 {
        let classes = classify_words(&seq, n)?;
        let words: Vec<String> = classes.iter().map(|c| word_string(&c.word)).collect();
        println!("n = {n}: {} words: {}", classes.len(), words.join(" "));
        assert_eq!(classes.len(), n + 1);
    }

    // Each word owns an interval of conjugates; the intervals tile the
    // acceptance window in the listed order.
    println!("\nwindows of the 3-letter words:");
    for class in classify_words(&seq, 3)? {
        println!(
            "  {}  [{}, {})  representative start {}",
            word_string(&class.word),
            class.window.lo().to_decimal_string(6)?,
            class.window.hi().to_decimal_string(6)?,
            class.representative,
        );
    }

    // Long factors have rigid letter statistics: the number of L letters
    // in any n-letter factor takes one of two consecutive values, tied to
    // the count of S letters through the total length.
    println!("\nletter counts of 30-letter factors:");
    for start in [-40, -20, 0, 20] {
        let (l, s) = word_letter_counts(&seq, start, 30)?;
        println!("  start {start:>3}: {l} L, {s} S");
        assert_eq!(l + s, 30);
    }

    let tau = 1.618033988749895f64;
    let n = 30.0f64;
    println!(
        "expected L count near n/tau = {:.3}, S count near n/tau^2 = {:.3}",
        n / tau,
        n / (tau * tau)
    );
    Ok(())
}
