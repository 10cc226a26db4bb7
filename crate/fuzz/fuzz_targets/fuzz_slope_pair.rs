//! Slope pair strings ("p1/q1,p2/q2") must never panic; accepted slopes
//! are canonical (coprime, sign-normalized).
#![no_main]

use libfuzzer_sys::fuzz_target;
use num::{Integer, One, Signed, Zero};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 4096 {
        return;
    }
    if let Ok((a, b)) = dehnkit::fillings::parse_pair(s) {
        for slope in [a, b] {
            assert!(slope.p.gcd(&slope.q).is_one());
            assert!(slope.q.is_positive() || (slope.q.is_zero() && slope.p.is_positive()));
        }
    }
});
