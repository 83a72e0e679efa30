//! Maximise over the A3 chain cone cut by `a1 + a3 <= 1`.

use lctforge::exact::{lp_optimize, LinearProgram, LpOutcome, Relation};
use lctforge::Rational;

fn main() {
    let r = Rational::from;
    let lp = LinearProgram::maximize(vec![r(1), r(1), r(1)])
        .constrain(vec![r(2), r(-1), r(0)], Relation::Ge, r(0))
        .constrain(vec![r(-1), r(2), r(-1)], Relation::Ge, r(0))
        .constrain(vec![r(0), r(-1), r(2)], Relation::Ge, r(0))
        .constrain(vec![r(1), r(0), r(1)], Relation::Le, r(1))
        .nonnegative();
    match lp_optimize(&lp).expect("well-formed program") {
        LpOutcome::Optimal { value, witness } => {
            let w: Vec<String> = witness.iter().map(ToString::to_string).collect();
            println!("max a1 + a2 + a3 = {value} at ({})", w.join(", "));
        }
        other => println!("{other:?}"),
    }
}
