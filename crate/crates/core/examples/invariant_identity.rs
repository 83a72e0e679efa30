//! Checks the degree-30 relation among the icosahedral invariants.

use lctforge::certs::check_poly_file;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/polys/");
    for name in ["a5_invariants.poly", "a5_invariants_printed.poly"] {
        let text = std::fs::read_to_string(format!("{dir}{name}")).expect("shipped file");
        for r in check_poly_file(&text).expect("parses") {
            println!("{name} line {}: {:?}", r.line, r.result);
        }
    }
}
