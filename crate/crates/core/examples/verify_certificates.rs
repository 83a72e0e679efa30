//! Runs every shipped certificate and prints the reports.

use lctforge::certs::verify_file;

fn main() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/certs");
    let mut paths: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    paths.sort();
    let mut all = true;
    for p in paths.iter().filter(|p| p.extension().is_some_and(|e| e == "cert")) {
        let report = verify_file(p).unwrap_or_else(|e| panic!("{}: {e}", p.display()));
        all &= report.overall;
        println!("{report}\n");
    }
    println!("{} certificates, all pass: {all}", paths.len());
}
