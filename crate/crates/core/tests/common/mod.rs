#![allow(dead_code)]

use charcalc::asymptotics::weight_from_fundamental;
use charcalc::characters::{weyl_dim, weyl_polynomial};
use charcalc::epinvariants::IntMatrix;
use charcalc::rational::q;
use charcalc::{Family, RootDatum, TorusElement, Weight, Q};
use num_traits::ToPrimitive;
use rand::seq::IndexedRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_angle(rng: &mut ChaCha8Rng, max_den: i64) -> Q {
    let d = rng.random_range(1..=max_den);
    q(rng.random_range(0..2 * d), d)
}

pub fn random_torus(rng: &mut ChaCha8Rng, dim: usize, max_den: i64) -> TorusElement {
    TorusElement::new((0..dim).map(|_| random_angle(rng, max_den)).collect())
}

/// A torus element forced onto at least one root hyperplane.
pub fn random_singular(rng: &mut ChaCha8Rng, datum: &RootDatum, max_den: i64) -> TorusElement {
    let dim = datum.dim();
    loop {
        let mut t = random_torus(rng, dim, max_den).angles;
        let constraints = rng.random_range(1..=2);
        for _ in 0..constraints {
            let i = rng.random_range(0..dim);
            let j = (i + rng.random_range(1..dim.max(2))) % dim;
            let shift = Q::from_integer(rng.random_range(-1..=1));
            match (datum.family(), rng.random_range(0..3)) {
                (Family::A, _) | (_, 0) if i != j => t[j] = t[i] + shift,
                (Family::B | Family::C | Family::D, 1) if i != j => t[j] = -t[i] + shift,
                (Family::B, _) => t[i] = shift,
                (Family::C, _) => t[i] = q(rng.random_range(0..2), 2),
                _ => {}
            }
        }
        let gamma = TorusElement::new(t);
        if datum.positive_roots().iter().any(|a| gamma.kills(a)) {
            return gamma;
        }
    }
}

pub fn dim_f64(datum: &RootDatum, lambda: &Weight) -> f64 {
    weyl_dim(datum, lambda).unwrap().to_f64().unwrap()
}

/// Dominant admissible weights with `dim ≤ max_dim`, enumerated in
/// fundamental-weight coordinates. Type A weights have last coordinate 0.
pub fn dominant_weights_up_to_dim(datum: &RootDatum, max_dim: u64) -> Vec<Weight> {
    let rank = datum.rank();
    let dim_of = |a: &[i64]| {
        let w = weight_from_fundamental(datum.family(), a, 0);
        (weyl_polynomial(datum.positive_roots(), datum.rho(), &w).to_integer(), w)
    };
    let mut out = Vec::new();
    let mut stack: Vec<Vec<i64>> = vec![vec![0; rank]];
    let mut seen = std::collections::HashSet::new();
    // Adding a fundamental weight never lowers the dimension, so the search
    // can stop at the first coordinate increase that overshoots.
    while let Some(a) = stack.pop() {
        if !seen.insert(a.clone()) {
            continue;
        }
        let (d, w) = dim_of(&a);
        if d > max_dim.into() {
            continue;
        }
        if datum.is_admissible(&w) {
            out.push(w);
        }
        for i in 0..rank {
            let mut b = a.clone();
            b[i] += 1;
            stack.push(b);
        }
    }
    out.sort();
    out
}

fn elementary(size: usize, i: usize, j: usize, s: i64) -> IntMatrix {
    let mut m = identity(size);
    m[i][j] = s;
    m
}

pub fn identity(size: usize) -> IntMatrix {
    (0..size)
        .map(|i| (0..size).map(|j| i64::from(i == j)).collect())
        .collect()
}

pub fn mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

/// A finite-order element of `GL(size, Z)`: a block matrix of small
/// finite-order blocks, conjugated by a random unimodular matrix.
pub fn random_finite_order(rng: &mut ChaCha8Rng, size: usize) -> IntMatrix {
    let blocks: [IntMatrix; 5] = [
        vec![vec![1]],
        vec![vec![-1]],
        vec![vec![0, -1], vec![1, 0]],
        vec![vec![0, -1], vec![1, -1]],
        vec![vec![0, 1], vec![1, 0]],
    ];
    let mut m = vec![vec![0i64; size]; size];
    let mut at = 0;
    while at < size {
        let b = loop {
            let b = &blocks[rng.random_range(0..blocks.len())];
            if at + b.len() <= size {
                break b;
            }
        };
        for (i, row) in b.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[at + i][at + j] = x;
            }
        }
        at += b.len();
    }
    if size < 2 {
        return m;
    }
    let mut u = identity(size);
    let mut u_inv = identity(size);
    for _ in 0..rng.random_range(1..=3) {
        let i = rng.random_range(0..size);
        let mut j = rng.random_range(0..size);
        if i == j {
            j = (j + 1) % size;
        }
        let s = *[-1i64, 1].choose(rng).unwrap();
        u = mul(&u, &elementary(size, i, j, s));
        u_inv = mul(&elementary(size, i, j, -s), &u_inv);
    }
    mul(&mul(&u, &m), &u_inv)
}
