//! Runs the acceptance suite and prints one line per criterion.

use std::time::Instant;

use levylab::verify::{run, CRITERIA};

fn main() {
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let start = Instant::now();
        let check = run(id).expect("known criterion");
        println!("{} ({:.1} s)", check.line(), start.elapsed().as_secs_f64());
        if !check.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", CRITERIA.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
