//! The built-in worked matrices for the SnapPy census manifold v2788,
//! whose cusp shapes lie in Q(sqrt(-2)).

use crate::exactnum::{rat, rat_int, QuadNum, Rat};
use crate::linalg::Mat4;
use num::Zero;

/// The order-4 coupling automorphism of v2788 (minimal polynomial x^2 + 1).
pub fn v2788_a() -> Mat4 {
    let h = || rat(1, 2);
    Mat4::from_rows([
        [rat_int(0), h(), rat_int(0), h()],
        [rat_int(-1), rat_int(0), rat_int(-1), rat_int(0)],
        [rat_int(0), h(), rat_int(0), -h()],
        [rat_int(-1), rat_int(0), rat_int(1), rat_int(0)],
    ])
}

/// The order-6 coupling automorphism of v2788 (minimal polynomial x^2 - x + 1).
pub fn v2788_b() -> Mat4 {
    let h = || rat(1, 2);
    Mat4::from_rows([
        [h(), h(), -h(), rat_int(0)],
        [rat_int(-1), h(), rat_int(0), -h()],
        [h(), rat_int(0), h(), -h()],
        [rat_int(0), h(), rat_int(1), h()],
    ])
}

/// The cusp shape of v2788: sqrt(-2).
pub fn v2788_tau() -> QuadNum {
    QuadNum::new(Rat::zero(), num::One::one(), -2)
}
