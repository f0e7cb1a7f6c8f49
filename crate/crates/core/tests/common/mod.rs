#![allow(dead_code)]

use nilscalars::eqlang::{EquationSystem, Sort, Term};
use rand::rngs::StdRng;
use rand::Rng;

const NAMES: [&str; 3] = ["x", "y", "z"];

fn atom(rng: &mut StdRng, nvars: usize) -> Term {
    if rng.gen_bool(0.7) {
        Term::var(NAMES[rng.gen_range(0..nvars)])
    } else {
        Term::int(rng.gen_range(-4..=6))
    }
}

fn term(rng: &mut StdRng, nvars: usize, depth: u32, mults: &mut u32) -> Term {
    if depth == 0 || rng.gen_bool(0.35) {
        return atom(rng, nvars);
    }
    let a = term(rng, nvars, depth - 1, mults);
    let b = term(rng, nvars, depth - 1, mults);
    match rng.gen_range(0..3) {
        0 if *mults > 0 => {
            *mults -= 1;
            Term::mul(a, b)
        }
        1 => Term::Sub(Box::new(a), Box::new(b)),
        _ => Term::add(a, b),
    }
}

/// A ring system with at most three variables, at most two multiplications
/// and terms at most two operations deep.
pub fn random_ring_system(rng: &mut StdRng, index: usize) -> EquationSystem {
    let nvars = rng.gen_range(1..=3);
    let mut mults = 2;
    let mut s = EquationSystem::new(&format!("random{index}"), Sort::RingZ);
    s.vars = NAMES[..nvars].iter().map(|v| v.to_string()).collect();
    for _ in 0..rng.gen_range(1..=2) {
        let lhs = term(rng, nvars, 2, &mut mults);
        let rhs = term(rng, nvars, 1, &mut mults);
        s = s.equation(lhs, rhs);
    }
    s
}
