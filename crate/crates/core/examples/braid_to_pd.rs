//! Prints the PD code of a braid closure.
//!
//! cargo run --example braid_to_pd -- 3 1 -2 1 -2

use khovanov::diagram::{braid_closure, emit_pd};

fn main() -> khovanov::Result<()> {
    let args: Vec<i64> = std::env::args()
        .skip(1)
        .map(|a| a.parse().expect("integer arguments"))
        .collect();
    let Some((&strands, word)) = args.split_first() else {
        eprintln!("usage: braid_to_pd STRANDS GENERATOR...");
        std::process::exit(2);
    };
    let word: Vec<i32> = word.iter().map(|&g| g as i32).collect();
    let d = braid_closure(strands as usize, &word)?;
    print!("{}", emit_pd(&d));
    Ok(())
}
