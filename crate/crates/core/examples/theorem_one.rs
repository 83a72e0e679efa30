//! Hypotheses, vertex and implied inequalities for one parameter tuple.

use lctforge::local_ineq::{check_theorem_I_hypotheses, implied_inequalities_lemma20, vertex_alpha_beta, ThmIParams, VertexOutcome};
use lctforge::q;

fn main() {
    let (a, b, m, n) = (q(45, 11), q(52, 21), q(3, 11), q(2, 7));
    let VertexOutcome::Vertex { alpha, beta } = vertex_alpha_beta(&a, &b, &m, &n).unwrap() else {
        panic!("no vertex");
    };
    println!("vertex: alpha = {alpha}, beta = {beta}");
    let p = ThmIParams::new(a, b, m, n, alpha, beta).unwrap();
    println!("{}", check_theorem_I_hypotheses(&p));
    println!("{}", implied_inequalities_lemma20(&p).unwrap());
}
