//! Prints the exact values of f_{p+1}(n, e) around the Turán threshold.

use satedge_core::constructions::turan_number;
use satedge_core::search::{min_saturating, min_saturating_constrained, SearchOptions};

fn main() {
    for p in [3usize, 4] {
        for n in 4..=9usize {
            let ex = turan_number(n as u64, p as u64) as usize;
            let max = turan_number(n as u64, p as u64 + 1) as usize;
            let row: Vec<String> = (ex..=max.min(ex + 3))
                .map(|e| {
                    let r = min_saturating(n, e, p + 1, SearchOptions::default()).unwrap();
                    format!("e={e}:{}({})", r.minimum.unwrap(), r.witnesses.len())
                })
                .collect();
            let c = min_saturating_constrained(n, p, SearchOptions::default()).unwrap();
            println!("p={p} n={n} ex={ex} {} | non-Turan at ex: {:?}", row.join(" "), c.minimum);
        }
    }
}
