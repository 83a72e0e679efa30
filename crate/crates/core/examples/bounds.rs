//! Closed-form local bounds and monomial thresholds.

use lctforge::local_ineq::{corti_bound, lct_monomial, mobile_bound_thmII, MonomialForm};
use lctforge::q;

fn main() {
    let eps = q(1, 2);
    for (a1, a2) in [(q(0, 1), q(1, 3)), (q(-1, 2), q(-1, 4))] {
        println!("corti({a1}, {a2}; eps={eps}) = {}", corti_bound(&a1, &a2, &eps).unwrap());
    }
    for a1 in [q(0, 1), q(-1, 2), q(-2, 1)] {
        let (b, profiles) = mobile_bound_thmII(&a1, &eps).unwrap();
        println!("thm II at a1={a1}: {b}, equality profiles {profiles:?}");
    }
    println!("lct(x^2 + y^3) = {}", lct_monomial(&[2, 3], MonomialForm::Diagonal).unwrap());
    println!("lct(x^2 y^3) = {}", lct_monomial(&[2, 3], MonomialForm::Product).unwrap());
}
