//! Block view of a 4x4 rational matrix and the Type I/II/III trichotomy.
//!
//! Type I is block diagonal with unit block determinants, Type II block
//! anti-diagonal with unit block determinants, Type III the fully coupled
//! class with det A1 = det A4, det A2 = det A3, det A1 + det A3 = 1 and
//! (det A1) A1^-1 A2 = -(det A3) A3^-1 A4.

use crate::exactnum::Rat;
use crate::linalg::{Mat2Q, Mat4};
use num::{One, Signed, Zero};
use serde::Serialize;

/// A Mat4 viewed as 2x2 blocks A1..A4.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMat {
    pub a1: Mat2Q,
    pub a2: Mat2Q,
    pub a3: Mat2Q,
    pub a4: Mat2Q,
    pub whole: Mat4,
}

impl BlockMat {
    pub fn from_mat4(m: &Mat4) -> Self {
        let [a1, a2, a3, a4] = m.blocks();
        Self { a1, a2, a3, a4, whole: m.clone() }
    }

    pub fn from_blocks(a1: Mat2Q, a2: Mat2Q, a3: Mat2Q, a4: Mat2Q) -> Self {
        let whole = Mat4::from_blocks(&a1, &a2, &a3, &a4);
        Self { a1, a2, a3, a4, whole }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum TypeTag {
    TypeI,
    TypeII,
    TypeIII,
    Untyped,
}

impl TypeTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            TypeTag::TypeI => "I",
            TypeTag::TypeII => "II",
            TypeTag::TypeIII => "III",
            TypeTag::Untyped => "untyped",
        }
    }
}

impl std::fmt::Display for TypeTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

pub fn classify_type(m: &BlockMat) -> TypeTag {
    let d1 = m.a1.det();
    let d2 = m.a2.det();
    let d3 = m.a3.det();
    let d4 = m.a4.det();
    if m.a2.is_zero() && m.a3.is_zero() && d1.is_one() && d4.is_one() {
        return TypeTag::TypeI;
    }
    if m.a1.is_zero() && m.a4.is_zero() && d2.is_one() && d3.is_one() {
        return TypeTag::TypeII;
    }
    if !d1.is_zero() && !d2.is_zero() && !d3.is_zero() && !d4.is_zero() {
        let sums = &d1 + &d3 == Rat::one();
        if d1 == d4 && d2 == d3 && sums {
            let lhs = m.a1.inverse().unwrap().mul_mat(&m.a2).scale(&d1);
            let rhs = m.a3.inverse().unwrap().mul_mat(&m.a4).scale(&d3).neg();
            if lhs == rhs {
                return TypeTag::TypeIII;
            }
        }
    }
    TypeTag::Untyped
}

/// Predicted type of a product N*M from the factor types. Type III times
/// Type III is not determined and reports Untyped ("unknown").
pub fn type_compose(n: TypeTag, m: TypeTag) -> TypeTag {
    use TypeTag::*;
    match (n, m) {
        (TypeI, TypeI) | (TypeII, TypeII) => TypeI,
        (TypeI, TypeII) | (TypeII, TypeI) => TypeII,
        (TypeIII, TypeI) | (TypeIII, TypeII) | (TypeI, TypeIII) | (TypeII, TypeIII) => TypeIII,
        _ => Untyped,
    }
}

/// The positivity trichotomy: A1 = A4 = 0, or A2 = A3 = 0, or all four block
/// determinants strictly positive.
pub fn positivity_check(m: &BlockMat) -> bool {
    if m.a1.is_zero() && m.a4.is_zero() {
        return true;
    }
    if m.a2.is_zero() && m.a3.is_zero() {
        return true;
    }
    [&m.a1, &m.a2, &m.a3, &m.a4]
        .iter()
        .all(|b| b.det().is_positive())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::exactnum::rat;
    use crate::linalg::Mat2Q;

    #[test]
    fn classify_examples() {
        let iota = BlockMat::from_mat4(&Mat4::iota());
        assert_eq!(classify_type(&iota), TypeTag::TypeI);
        let swap = BlockMat::from_mat4(&Mat4::anti_sum(&Mat2Q::identity(), &Mat2Q::identity()));
        assert_eq!(classify_type(&swap), TypeTag::TypeII);
        let a = BlockMat::from_mat4(&corpus::v2788_a());
        assert_eq!(classify_type(&a), TypeTag::TypeIII);
        for b in [&a.a1, &a.a2, &a.a3, &a.a4] {
            assert_eq!(b.det(), rat(1, 2));
        }
        let b = BlockMat::from_mat4(&corpus::v2788_b());
        assert_eq!(classify_type(&b), TypeTag::TypeIII);
    }

    #[test]
    fn compose_table() {
        use TypeTag::*;
        assert_eq!(type_compose(TypeII, TypeIII), TypeIII);
        assert_eq!(type_compose(TypeI, TypeI), TypeI);
        assert_eq!(type_compose(TypeIII, TypeIII), Untyped);
        assert_eq!(type_compose(TypeII, TypeII), TypeI);
        assert_eq!(type_compose(TypeI, TypeII), TypeII);
    }

    #[test]
    fn positivity_examples() {
        let b = BlockMat::from_mat4(&corpus::v2788_b());
        assert_eq!(b.a1.det(), rat(3, 4));
        assert_eq!(b.a2.det(), rat(1, 4));
        assert!(positivity_check(&b));
        assert!(positivity_check(&BlockMat::from_mat4(&Mat4::iota())));
        let bad = BlockMat::from_blocks(
            Mat2Q::identity(),
            Mat2Q::identity(),
            Mat2Q::zero(),
            Mat2Q::identity(),
        );
        assert!(!positivity_check(&bad));
        assert_eq!(classify_type(&bad), TypeTag::Untyped);
    }
}
