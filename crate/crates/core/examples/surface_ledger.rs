//! Consistency report for a weighted hypersurface ledger.

use lctforge::wps::{ledger_consistency, parse_ledger};

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/ledgers/p11_21_29_37.ledger").to_string());
    let text = std::fs::read_to_string(&path).expect("readable ledger");
    let ledger = parse_ledger(&text).expect("valid ledger");
    println!("K^2 = {}", ledger.surface.k_squared());
    println!("{}", ledger_consistency(&ledger).expect("complete ledger"));
}
