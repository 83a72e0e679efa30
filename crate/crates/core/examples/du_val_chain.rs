//! Coefficient bounds over A_n chains and the blow-up tower.

use lctforge::exact::{Constraint, Relation};
use lctforge::resolution::{an_chain, du_val_coefficient_bounds, tower_coefficients, TowerInput};
use lctforge::{q, Rational};

fn main() {
    for n in 2..=5 {
        let chain = an_chain(n).unwrap();
        let mut ends = vec![Rational::zero(); n];
        ends[0] = Rational::one();
        ends[n - 1] = Rational::one();
        let bounds = du_val_coefficient_bounds(&chain, &[Constraint::new(ends, Relation::Le, Rational::one())]).unwrap();
        let b: Vec<String> = bounds.iter().map(ToString::to_string).collect();
        println!("A{n}: minors {:?}, bounds ({})", chain.leading_minors().iter().map(ToString::to_string).collect::<Vec<_>>(), b.join(", "));
    }
    let t = TowerInput { a1: q(1, 2), a2: q(1, 3), m: vec![q(1, 2), q(1, 4), q(1, 8)] };
    for (i, e) in tower_coefficients(&t, 3).unwrap().iter().enumerate() {
        println!("tower E{}: {} (in [0,1]: {})", i + 1, e.coefficient, e.in_unit_interval);
    }
}
