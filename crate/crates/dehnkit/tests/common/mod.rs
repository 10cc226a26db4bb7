//! Shared helpers for the integration suites: seeded randomness and
//! generators for exact values.
#![allow(dead_code)]

use dehnkit::exactnum::{Rat, QuadNum};
use dehnkit::linalg::{Mat2Q, Mat4};
use num::BigInt;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn rand_rat(rng: &mut ChaCha8Rng) -> Rat {
    let n = rng.gen_range(-9i64..=9);
    let d = rng.gen_range(1i64..=9);
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rand_quad(rng: &mut ChaCha8Rng, d: i64) -> QuadNum {
    QuadNum::new(rand_rat(rng), rand_rat(rng), d)
}

pub fn rand_mat2(rng: &mut ChaCha8Rng) -> Mat2Q {
    Mat2Q::new(rand_rat(rng), rand_rat(rng), rand_rat(rng), rand_rat(rng))
}

pub fn rand_invertible_mat2(rng: &mut ChaCha8Rng) -> Mat2Q {
    loop {
        let m = rand_mat2(rng);
        if !num::Zero::is_zero(&m.det()) {
            return m;
        }
    }
}

pub fn rand_mat4(rng: &mut ChaCha8Rng) -> Mat4 {
    let mut m = Mat4::identity();
    for i in 0..4 {
        for j in 0..4 {
            m.e[i][j] = rand_rat(rng);
        }
    }
    m
}

pub fn rand_invertible_mat4(rng: &mut ChaCha8Rng) -> Mat4 {
    loop {
        let m = rand_mat4(rng);
        if !num::Zero::is_zero(&m.det()) {
            return m;
        }
    }
}
