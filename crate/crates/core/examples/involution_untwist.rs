//! Lattice involution on the six-point blow-up and the untwisting map.

use lctforge::pic_lattice::{apply_involution, pukhlikov_bound, untwist, PicClass, PukhlikovForm};
use lctforge::{q, Rational};

fn main() {
    for c in [PicClass::hyperplane(6), PicClass::canonical(6), PicClass::symmetric(Rational::zero(), Rational::one(), 6)] {
        let img = apply_involution(&c).unwrap();
        println!("{c} -> {img}  (square {} -> {})", c.square(), img.square());
    }
    let mu = Rational::one();
    for mult in [q(1, 1), q(7, 6), q(6, 5)] {
        let (mu2, mult2) = untwist(&mu, &mult).unwrap();
        println!("untwist(mu={mu}, mult={mult}) = ({mu2}, {mult2})");
    }
    let v = pukhlikov_bound(&Rational::one(), &Rational::one(), &q(-1, 1), PukhlikovForm::WithoutSigma0).unwrap();
    println!("pukhlikov(1, 1, -1) = {v} vs budget {}", q(17, 4));
}
