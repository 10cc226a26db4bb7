//! The classification catalog: for each admissible minimal polynomial and
//! block type, the parametric normal form an automorphism of that kind must
//! take, plus exact matching and synthesis.
//!
//! Template identities are verified by exact matrix identities. Entry ids are
//! `<minimal polynomial>.<type>.<form>` slugs, ordered as the forms appear in
//! the classification (`x2+1.III.2` is the second x^2+1 coupling form, the
//! one over Q(sqrt(-2))).

use crate::blocktype::{classify_type, BlockMat, TypeTag};
use crate::exactnum::{rat, rat_int, squarefree_part, Rat};
use crate::linalg::{Mat2Q, Poly};
use num::{One, Signed, Zero};
use std::sync::OnceLock;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CatalogError {
    #[error("unknown template {0:?}")]
    UnknownTemplate(String),
    #[error("constraint violated for {template}: {constraint}")]
    ConstraintViolation { template: String, constraint: String },
}

/// How the third block is built from (A1, A2): c * A2^-1 * A1^power.
#[derive(Debug, Clone)]
pub struct ThirdBlockRule {
    pub coeff: Rat,
    pub a1_power: u32,
}

/// How the fourth block is built: c * A2^-1 * A1^(+-1) * A2.
#[derive(Debug, Clone)]
pub struct FourthBlockRule {
    pub coeff: Rat,
    pub inverse: bool,
}

#[derive(Debug, Clone)]
pub enum TemplateShape {
    /// epsilon * I (the two central elements).
    Scalar { sign: i64 },
    /// epsilon * (I ⊕ -I), the parity involutions.
    Iota { sign: i64 },
    /// A1 ⊕ A4 with both minimal polynomials equal to `block_poly`.
    DiagBoth { block_poly: Poly },
    /// A1 ⊕ (fixed * I).
    DiagLeft { block_poly: Poly, fixed: i64 },
    /// (fixed * I) ⊕ A4.
    DiagRight { block_poly: Poly, fixed: i64 },
    /// A1 ⊕ A4 with {m(A1), m(A4)} = {p, q}, p != q.
    DiagMixed { p: Poly, q: Poly },
    /// A2 ⊕~ (sign * A2^-1), det A2 = 1.
    AntiInverse { sign: i64 },
    /// A2 ⊕~ A3 with det A2 = det A3 = 1 and m(A2 A3) = `prod_poly`.
    AntiProduct { prod_poly: Poly },
    /// [[A1, A2], [c3 A2^-1 A1^k, c4 A2^-1 A1^(+-1) A2]] with m(A1) and
    /// det A2 pinned.
    Coupled {
        a1_poly: Poly,
        a3: ThirdBlockRule,
        a4: FourthBlockRule,
        det_a2: Rat,
    },
    /// [[e1 I/2, A2], [c3 A2^-1, e4 I/2]] with det A2 = 3/4 (A1 parallel to I).
    CoupledScalar { eps1: i64, c3: Rat, eps4: i64 },
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub tag: TypeTag,
    pub min_poly: Poly,
    /// The cusp field forced by the entry; None when unconstrained.
    pub field_d: Option<i64>,
    pub shape: TemplateShape,
}

#[derive(Debug, Clone)]
pub struct CatalogMatch {
    pub template: String,
    pub tag: TypeTag,
    pub min_poly: Poly,
    pub field_d: Option<i64>,
    pub a1: Mat2Q,
    pub a2: Mat2Q,
    /// Other templates that also matched (resolved lexicographically).
    pub ambiguous_with: Vec<String>,
}

fn p2(c0: Rat, c1: Rat) -> Poly {
    Poly::new(vec![c0, c1, Rat::one()])
}

fn half() -> Rat {
    rat(1, 2)
}

/// The admissible minimal polynomials of finite-order block-structured
/// automorphisms: all degree <= 4 products of distinct cyclotomics, minus the
/// two quartics with quintic factors.
pub fn admissible_min_polys() -> Vec<Poly> {
    vec![
        Poly::from_i64(&[-1, 1]),          // x - 1
        Poly::from_i64(&[1, 1]),           // x + 1
        Poly::from_i64(&[-1, 0, 1]),       // x^2 - 1
        Poly::from_i64(&[1, 0, 1]),        // x^2 + 1
        Poly::from_i64(&[1, -1, 1]),       // x^2 - x + 1
        Poly::from_i64(&[1, 1, 1]),        // x^2 + x + 1
        Poly::from_i64(&[-1, 0, 0, 1]),    // x^3 - 1
        Poly::from_i64(&[1, 0, 0, 1]),     // x^3 + 1
        Poly::from_i64(&[-1, 1, -1, 1]),   // x^3 - x^2 + x - 1
        Poly::from_i64(&[1, 1, 1, 1]),     // x^3 + x^2 + x + 1
        Poly::from_i64(&[-1, 2, -2, 1]),   // x^3 - 2x^2 + 2x - 1
        Poly::from_i64(&[1, 2, 2, 1]),     // x^3 + 2x^2 + 2x + 1
        Poly::from_i64(&[-1, 0, 0, 0, 1]), // x^4 - 1
        Poly::from_i64(&[1, 0, 0, 0, 1]),  // x^4 + 1
        Poly::from_i64(&[1, 0, -1, 0, 1]), // x^4 - x^2 + 1
        Poly::from_i64(&[1, 0, 1, 0, 1]),  // x^4 + x^2 + 1
    ]
}

fn coupled(
    id: &'static str,
    min_poly: &[i64],
    field_d: i64,
    a1_c0: Rat,
    a1_c1: Rat,
    c3: Rat,
    a1_power: u32,
    c4: Rat,
    inverse: bool,
    det_a2: Rat,
) -> CatalogEntry {
    CatalogEntry {
        id,
        tag: TypeTag::TypeIII,
        min_poly: Poly::from_i64(min_poly),
        field_d: Some(field_d),
        shape: TemplateShape::Coupled {
            a1_poly: p2(a1_c0, a1_c1),
            a3: ThirdBlockRule { coeff: c3, a1_power },
            a4: FourthBlockRule { coeff: c4, inverse },
            det_a2,
        },
    }
}

fn build_entries() -> Vec<CatalogEntry> {
    use TypeTag::*;
    let phi3 = Poly::from_i64(&[1, 1, 1]);
    let phi4 = Poly::from_i64(&[1, 0, 1]);
    let phi6 = Poly::from_i64(&[1, -1, 1]);
    let one = Rat::one;
    let mut v = vec![
        CatalogEntry {
            id: "x-1.I",
            tag: TypeI,
            min_poly: Poly::from_i64(&[-1, 1]),
            field_d: None,
            shape: TemplateShape::Scalar { sign: 1 },
        },
        CatalogEntry {
            id: "x+1.I",
            tag: TypeI,
            min_poly: Poly::from_i64(&[1, 1]),
            field_d: None,
            shape: TemplateShape::Scalar { sign: -1 },
        },
        CatalogEntry {
            id: "x2-1.I.1",
            tag: TypeI,
            min_poly: Poly::from_i64(&[-1, 0, 1]),
            field_d: None,
            shape: TemplateShape::Iota { sign: 1 },
        },
        CatalogEntry {
            id: "x2-1.I.2",
            tag: TypeI,
            min_poly: Poly::from_i64(&[-1, 0, 1]),
            field_d: None,
            shape: TemplateShape::Iota { sign: -1 },
        },
        CatalogEntry {
            id: "x2-1.II",
            tag: TypeII,
            min_poly: Poly::from_i64(&[-1, 0, 1]),
            field_d: None,
            shape: TemplateShape::AntiInverse { sign: 1 },
        },
        CatalogEntry {
            id: "x2+1.I",
            tag: TypeI,
            min_poly: phi4.clone(),
            field_d: Some(-1),
            shape: TemplateShape::DiagBoth { block_poly: phi4.clone() },
        },
        CatalogEntry {
            id: "x2+1.II",
            tag: TypeII,
            min_poly: phi4.clone(),
            field_d: None,
            shape: TemplateShape::AntiInverse { sign: -1 },
        },
        CatalogEntry {
            id: "x2-x+1.I",
            tag: TypeI,
            min_poly: phi6.clone(),
            field_d: Some(-3),
            shape: TemplateShape::DiagBoth { block_poly: phi6.clone() },
        },
        CatalogEntry {
            id: "x2+x+1.I",
            tag: TypeI,
            min_poly: phi3.clone(),
            field_d: Some(-3),
            shape: TemplateShape::DiagBoth { block_poly: phi3.clone() },
        },
        // x^3 -+ 1 = (x -+ 1)(x^2 +- x + 1)
        CatalogEntry {
            id: "x3-1.I.1",
            tag: TypeI,
            min_poly: Poly::from_i64(&[-1, 0, 0, 1]),
            field_d: Some(-3),
            shape: TemplateShape::DiagLeft { block_poly: phi3.clone(), fixed: 1 },
        },
        CatalogEntry {
            id: "x3-1.I.2",
            tag: TypeI,
            min_poly: Poly::from_i64(&[-1, 0, 0, 1]),
            field_d: Some(-3),
            shape: TemplateShape::DiagRight { block_poly: phi3.clone(), fixed: 1 },
        },
        CatalogEntry {
            id: "x3+1.I.1",
            tag: TypeI,
            min_poly: Poly::from_i64(&[1, 0, 0, 1]),
            field_d: Some(-3),
            shape: TemplateShape::DiagLeft { block_poly: phi6.clone(), fixed: -1 },
        },
        CatalogEntry {
            id: "x3+1.I.2",
            tag: TypeI,
            min_poly: Poly::from_i64(&[1, 0, 0, 1]),
            field_d: Some(-3),
            shape: TemplateShape::DiagRight { block_poly: phi6.clone(), fixed: -1 },
        },
        // x^3 -+ x^2 + x -+ 1 = (x -+ 1)(x^2 + 1)
        CatalogEntry {
            id: "x3-x2+x-1.I.1",
            tag: TypeI,
            min_poly: Poly::from_i64(&[-1, 1, -1, 1]),
            field_d: Some(-1),
            shape: TemplateShape::DiagLeft { block_poly: phi4.clone(), fixed: 1 },
        },
        CatalogEntry {
            id: "x3-x2+x-1.I.2",
            tag: TypeI,
            min_poly: Poly::from_i64(&[-1, 1, -1, 1]),
            field_d: Some(-1),
            shape: TemplateShape::DiagRight { block_poly: phi4.clone(), fixed: 1 },
        },
        CatalogEntry {
            id: "x3+x2+x+1.I.1",
            tag: TypeI,
            min_poly: Poly::from_i64(&[1, 1, 1, 1]),
            field_d: Some(-1),
            shape: TemplateShape::DiagLeft { block_poly: phi4.clone(), fixed: -1 },
        },
        CatalogEntry {
            id: "x3+x2+x+1.I.2",
            tag: TypeI,
            min_poly: Poly::from_i64(&[1, 1, 1, 1]),
            field_d: Some(-1),
            shape: TemplateShape::DiagRight { block_poly: phi4.clone(), fixed: -1 },
        },
        // x^3 -+ 2x^2 + 2x -+ 1 = (x -+ 1)(x^2 -+ x + 1)
        CatalogEntry {
            id: "x3-2x2+2x-1.I.1",
            tag: TypeI,
            min_poly: Poly::from_i64(&[-1, 2, -2, 1]),
            field_d: Some(-3),
            shape: TemplateShape::DiagLeft { block_poly: phi6.clone(), fixed: 1 },
        },
        CatalogEntry {
            id: "x3-2x2+2x-1.I.2",
            tag: TypeI,
            min_poly: Poly::from_i64(&[-1, 2, -2, 1]),
            field_d: Some(-3),
            shape: TemplateShape::DiagRight { block_poly: phi6.clone(), fixed: 1 },
        },
        CatalogEntry {
            id: "x3+2x2+2x+1.I.1",
            tag: TypeI,
            min_poly: Poly::from_i64(&[1, 2, 2, 1]),
            field_d: Some(-3),
            shape: TemplateShape::DiagLeft { block_poly: phi3.clone(), fixed: -1 },
        },
        CatalogEntry {
            id: "x3+2x2+2x+1.I.2",
            tag: TypeI,
            min_poly: Poly::from_i64(&[1, 2, 2, 1]),
            field_d: Some(-3),
            shape: TemplateShape::DiagRight { block_poly: phi3.clone(), fixed: -1 },
        },
        // x^4 + x^2 + 1 = (x^2+x+1)(x^2-x+1)
        CatalogEntry {
            id: "x4+x2+1.I",
            tag: TypeI,
            min_poly: Poly::from_i64(&[1, 0, 1, 0, 1]),
            field_d: Some(-3),
            shape: TemplateShape::DiagMixed { p: phi3.clone(), q: phi6.clone() },
        },
        CatalogEntry {
            id: "x4+1.II",
            tag: TypeII,
            min_poly: Poly::from_i64(&[1, 0, 0, 0, 1]),
            field_d: Some(-1),
            shape: TemplateShape::AntiProduct { prod_poly: phi4.clone() },
        },
        CatalogEntry {
            id: "x4+x2+1.II",
            tag: TypeII,
            min_poly: Poly::from_i64(&[1, 0, 1, 0, 1]),
            field_d: Some(-3),
            shape: TemplateShape::AntiProduct { prod_poly: phi3.clone() },
        },
        CatalogEntry {
            id: "x4-x2+1.II",
            tag: TypeII,
            min_poly: Poly::from_i64(&[1, 0, -1, 0, 1]),
            field_d: Some(-3),
            shape: TemplateShape::AntiProduct { prod_poly: phi6.clone() },
        },
        // Type III with A1 parallel to I: det A2 = 3/4 throughout.
        CatalogEntry {
            id: "x2-1.III.1",
            tag: TypeIII,
            min_poly: Poly::from_i64(&[-1, 0, 1]),
            field_d: None,
            shape: TemplateShape::CoupledScalar { eps1: 1, c3: rat(3, 4), eps4: -1 },
        },
        CatalogEntry {
            id: "x2-1.III.2",
            tag: TypeIII,
            min_poly: Poly::from_i64(&[-1, 0, 1]),
            field_d: None,
            shape: TemplateShape::CoupledScalar { eps1: -1, c3: rat(3, 4), eps4: 1 },
        },
        CatalogEntry {
            id: "x2-x+1.III.1",
            tag: TypeIII,
            min_poly: phi6.clone(),
            field_d: None,
            shape: TemplateShape::CoupledScalar { eps1: 1, c3: rat(-3, 4), eps4: 1 },
        },
        CatalogEntry {
            id: "x2+x+1.III.1",
            tag: TypeIII,
            min_poly: phi3.clone(),
            field_d: None,
            shape: TemplateShape::CoupledScalar { eps1: -1, c3: rat(-3, 4), eps4: -1 },
        },
    ];
    // Coupled Type III forms, in catalog order: the three x^2+1 forms over
    // Q(sqrt(-1)), Q(sqrt(-2)), Q(sqrt(-3)), then the remaining families.
    v.push(coupled(
        "x2+1.III.1", &[1, 0, 1], -1,
        rat(1, 4), Rat::zero(), rat(-3, 4), 0, -one(), false, rat(3, 4),
    ));
    v.push(coupled(
        "x2+1.III.2", &[1, 0, 1], -2,
        half(), Rat::zero(), rat(-1, 2), 0, -one(), false, half(),
    ));
    v.push(coupled(
        "x2+1.III.3", &[1, 0, 1], -3,
        rat(3, 4), Rat::zero(), rat(-1, 4), 0, -one(), false, rat(1, 4),
    ));
    // x^2 -+ x + 1 coupled forms (Q(sqrt(-1)) then Q(sqrt(-2)) flavors)
    v.push(coupled(
        "x2-x+1.III.2", &[1, -1, 1], -1,
        half(), -one(), rat(-1, 2), 0, half(), true, half(),
    ));
    v.push(coupled(
        "x2-x+1.III.3", &[1, -1, 1], -2,
        rat(3, 4), -one(), rat(-1, 4), 0, rat(3, 4), true, rat(1, 4),
    ));
    v.push(coupled(
        "x2+x+1.III.2", &[1, 1, 1], -1,
        half(), one(), rat(-1, 2), 0, half(), true, half(),
    ));
    v.push(coupled(
        "x2+x+1.III.3", &[1, 1, 1], -2,
        rat(3, 4), one(), rat(-1, 4), 0, rat(3, 4), true, rat(1, 4),
    ));
    // x^3 -+ 1
    v.push(coupled(
        "x3-1.III", &[-1, 0, 0, 1], -3,
        rat(1, 4), rat(-1, 2), rat_int(-3), 2, one(), false, rat(3, 4),
    ));
    v.push(coupled(
        "x3+1.III", &[1, 0, 0, 1], -3,
        rat(1, 4), half(), rat_int(-3), 2, one(), false, rat(3, 4),
    ));
    // x^3 -+ x^2 + x -+ 1
    v.push(coupled(
        "x3-x2+x-1.III", &[-1, 1, -1, 1], -1,
        half(), -one(), -one(), 2, one(), false, half(),
    ));
    v.push(coupled(
        "x3+x2+x+1.III", &[1, 1, 1, 1], -1,
        half(), one(), -one(), 2, one(), false, half(),
    ));
    // x^3 -+ 2x^2 + 2x -+ 1
    v.push(coupled(
        "x3-2x2+2x-1.III", &[-1, 2, -2, 1], -3,
        rat(3, 4), rat(-3, 2), rat(-1, 3), 2, one(), false, rat(1, 4),
    ));
    v.push(coupled(
        "x3+2x2+2x+1.III", &[1, 2, 2, 1], -3,
        rat(3, 4), rat(3, 2), rat(-1, 3), 2, one(), false, rat(1, 4),
    ));
    // x^4 + 1 (parity partners of the Q(sqrt(-2)) and Q(sqrt(-1)) families)
    v.push(coupled(
        "x4+1.III.1", &[1, 0, 0, 0, 1], -2,
        half(), Rat::zero(), half(), 0, one(), false, half(),
    ));
    v.push(coupled(
        "x4+1.III.2", &[1, 0, 0, 0, 1], -2,
        rat(3, 4), -one(), rat(1, 4), 0, rat(-3, 4), true, rat(1, 4),
    ));
    v.push(coupled(
        "x4+1.III.3", &[1, 0, 0, 0, 1], -2,
        rat(3, 4), one(), rat(1, 4), 0, rat(-3, 4), true, rat(1, 4),
    ));
    v.push(coupled(
        "x4+1.III.4", &[1, 0, 0, 0, 1], -1,
        half(), -one(), one(), 2, -one(), false, half(),
    ));
    v.push(coupled(
        "x4+1.III.5", &[1, 0, 0, 0, 1], -1,
        half(), one(), one(), 2, -one(), false, half(),
    ));
    // x^4 + x^2 + 1 (parity partners over Q(sqrt(-3)))
    v.push(coupled(
        "x4+x2+1.III.1", &[1, 0, 1, 0, 1], -3,
        rat(3, 4), Rat::zero(), rat(1, 4), 0, one(), false, rat(1, 4),
    ));
    v.push(coupled(
        "x4+x2+1.III.2", &[1, 0, 1, 0, 1], -3,
        rat(1, 4), rat(-1, 2), rat_int(3), 2, -one(), false, rat(3, 4),
    ));
    v.push(coupled(
        "x4+x2+1.III.3", &[1, 0, 1, 0, 1], -3,
        rat(1, 4), half(), rat_int(3), 2, -one(), false, rat(3, 4),
    ));
    // x^4 - x^2 + 1
    v.push(coupled(
        "x4-x2+1.III.1", &[1, 0, -1, 0, 1], -3,
        rat(3, 4), rat(-3, 2), rat(1, 3), 2, -one(), false, rat(1, 4),
    ));
    v.push(coupled(
        "x4-x2+1.III.2", &[1, 0, -1, 0, 1], -3,
        rat(3, 4), rat(3, 2), rat(1, 3), 2, -one(), false, rat(1, 4),
    ));
    v.push(coupled(
        "x4-x2+1.III.3", &[1, 0, -1, 0, 1], -1,
        rat(1, 4), Rat::zero(), rat(3, 4), 0, one(), false, rat(3, 4),
    ));
    v.push(coupled(
        "x4-x2+1.III.4", &[1, 0, -1, 0, 1], -1,
        half(), -one(), half(), 0, rat(-1, 2), true, half(),
    ));
    v.push(coupled(
        "x4-x2+1.III.5", &[1, 0, -1, 0, 1], -1,
        half(), one(), half(), 0, rat(-1, 2), true, half(),
    ));
    v
}

pub fn entries() -> &'static [CatalogEntry] {
    static ENTRIES: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    ENTRIES.get_or_init(build_entries)
}

pub fn entry(id: &str) -> Option<&'static CatalogEntry> {
    entries().iter().find(|e| e.id == id)
}

fn scalar2(c: Rat) -> Mat2Q {
    Mat2Q::new(c.clone(), Rat::zero(), Rat::zero(), c)
}

/// Builds the 2x2 blocks of a template instance from its parameters.
/// Errors name the violated constraint.
fn build_blocks(
    e: &CatalogEntry,
    p1: &Mat2Q,
    p2: &Mat2Q,
) -> Result<(Mat2Q, Mat2Q, Mat2Q, Mat2Q), String> {
    let z = Mat2Q::zero;
    match &e.shape {
        TemplateShape::Scalar { sign } => {
            let s = scalar2(rat_int(*sign));
            if *p1 != s || *p2 != s {
                return Err(format!("blocks must both be {}I", sign));
            }
            Ok((s.clone(), z(), z(), s))
        }
        TemplateShape::Iota { sign } => {
            let a = scalar2(rat_int(*sign));
            let d = scalar2(rat_int(-sign));
            if *p1 != a || *p2 != d {
                return Err("blocks must be (I, -I) up to the sign".into());
            }
            Ok((a, z(), z(), d))
        }
        TemplateShape::DiagBoth { block_poly } => {
            if p1.min_poly() != *block_poly {
                return Err(format!("m(A1) must be {}", block_poly));
            }
            if p2.min_poly() != *block_poly {
                return Err(format!("m(A4) must be {}", block_poly));
            }
            Ok((p1.clone(), z(), z(), p2.clone()))
        }
        TemplateShape::DiagLeft { block_poly, fixed } => {
            if p1.min_poly() != *block_poly {
                return Err(format!("m(A1) must be {}", block_poly));
            }
            let f = scalar2(rat_int(*fixed));
            if *p2 != f {
                return Err(format!("A4 must be {}I", fixed));
            }
            Ok((p1.clone(), z(), z(), f))
        }
        TemplateShape::DiagRight { block_poly, fixed } => {
            let f = scalar2(rat_int(*fixed));
            if *p1 != f {
                return Err(format!("A1 must be {}I", fixed));
            }
            if p2.min_poly() != *block_poly {
                return Err(format!("m(A4) must be {}", block_poly));
            }
            Ok((f, z(), z(), p2.clone()))
        }
        TemplateShape::DiagMixed { p, q } => {
            let m1 = p1.min_poly();
            let m4 = p2.min_poly();
            let ok = (m1 == *p && m4 == *q) || (m1 == *q && m4 == *p);
            if !ok {
                return Err(format!("block polynomials must be {{{}, {}}}", p, q));
            }
            Ok((p1.clone(), z(), z(), p2.clone()))
        }
        TemplateShape::AntiInverse { sign } => {
            if !p1.det().is_one() {
                return Err("det A2 must be 1".into());
            }
            let inv = p1.inverse().map_err(|_| "A2 must be invertible".to_string())?;
            let expect = inv.scale(&rat_int(*sign));
            if *p2 != expect {
                return Err(format!("A3 must be {}A2^-1", sign));
            }
            Ok((z(), p1.clone(), expect, z()))
        }
        TemplateShape::AntiProduct { prod_poly } => {
            if !p1.det().is_one() || !p2.det().is_one() {
                return Err("block determinants must be 1".into());
            }
            if p1.mul_mat(p2).min_poly() != *prod_poly {
                return Err(format!("m(A2 A3) must be {}", prod_poly));
            }
            Ok((z(), p1.clone(), p2.clone(), z()))
        }
        TemplateShape::Coupled { a1_poly, a3, a4, det_a2 } => {
            if p1.min_poly() != *a1_poly {
                return Err(format!("m(A1) must be {}", a1_poly));
            }
            if p2.det() != *det_a2 {
                return Err(format!(
                    "det A2 must be {}",
                    crate::exactnum::fmt_rat(det_a2)
                ));
            }
            let a2_inv = p2.inverse().map_err(|_| "A2 must be invertible".to_string())?;
            let b3 = a2_inv.mul_mat(&p1.pow(a3.a1_power)).scale(&a3.coeff);
            let mid = if a4.inverse {
                p1.inverse().map_err(|_| "A1 must be invertible".to_string())?
            } else {
                p1.clone()
            };
            let b4 = a2_inv.mul_mat(&mid).mul_mat(p2).scale(&a4.coeff);
            Ok((p1.clone(), p2.clone(), b3, b4))
        }
        TemplateShape::CoupledScalar { eps1, c3, eps4 } => {
            let a = scalar2(rat_int(*eps1) * half());
            if *p1 != a {
                return Err(format!("A1 must be {}I/2", eps1));
            }
            if p2.det() != rat(3, 4) {
                return Err("det A2 must be 3/4".into());
            }
            let a2_inv = p2.inverse().map_err(|_| "A2 must be invertible".to_string())?;
            let b3 = a2_inv.scale(c3);
            let b4 = scalar2(rat_int(*eps4) * half());
            Ok((a, p2.clone(), b3, b4))
        }
    }
}

/// Builds the matrix of a template from its free parameters, verifying every
/// constraint exactly.
pub fn synthesize(template: &str, p1: &Mat2Q, p2: &Mat2Q) -> Result<BlockMat, CatalogError> {
    let e = entry(template).ok_or_else(|| CatalogError::UnknownTemplate(template.into()))?;
    let (a1, a2, a3, a4) =
        build_blocks(e, p1, p2).map_err(|constraint| CatalogError::ConstraintViolation {
            template: template.into(),
            constraint,
        })?;
    Ok(BlockMat::from_blocks(a1, a2, a3, a4))
}

/// The free parameters of a matched entry, in (A1-slot, A2-slot) order:
/// the two diagonal blocks for Type I, the two anti-diagonal blocks for
/// Type II, (A1, A2) for Type III.
fn extract_params(e: &CatalogEntry, m: &BlockMat) -> (Mat2Q, Mat2Q) {
    match e.tag {
        TypeTag::TypeI => (m.a1.clone(), m.a4.clone()),
        TypeTag::TypeII => (m.a2.clone(), m.a3.clone()),
        _ => (m.a1.clone(), m.a2.clone()),
    }
}

fn infer_field(e: &CatalogEntry, m: &BlockMat) -> Option<i64> {
    // prefer the discriminant of a non-scalar A1 (or A4 / A2 A3 for the
    // anti-diagonal forms); fall back to the entry's stated field
    let candidates = match e.tag {
        TypeTag::TypeII => vec![m.a2.mul_mat(&m.a3)],
        _ => vec![m.a1.clone(), m.a4.clone()],
    };
    for c in candidates {
        if !c.is_scalar() {
            let disc = c.disc2();
            if disc.is_negative() {
                return i64::try_from(&squarefree_part(&disc)).ok();
            }
        }
    }
    e.field_d
}

/// Matches a block matrix against the catalog. Every template identity is
/// verified exactly; ambiguities resolve to the lexicographically smallest
/// template id and are recorded.
pub fn match_catalog(m: &BlockMat) -> Option<CatalogMatch> {
    let tag = classify_type(m);
    if tag == TypeTag::Untyped {
        return None;
    }
    let mp = m.whole.min_poly();
    let mut hits: Vec<(&CatalogEntry, Mat2Q, Mat2Q)> = Vec::new();
    for e in entries() {
        if e.tag != tag || e.min_poly != mp {
            continue;
        }
        let (p1, p2) = extract_params(e, m);
        if let Ok(rebuilt) = synthesize(e.id, &p1, &p2) {
            if rebuilt.whole == m.whole {
                hits.push((e, p1, p2));
            }
        }
    }
    hits.sort_by_key(|(e, _, _)| e.id);
    let (e, a1, a2) = hits.first()?.clone();
    Some(CatalogMatch {
        template: e.id.to_string(),
        tag,
        min_poly: mp,
        field_d: infer_field(e, m),
        a1,
        a2,
        ambiguous_with: hits.iter().skip(1).map(|(e, _, _)| e.id.to_string()).collect(),
    })
}

/// Deterministic sample parameters satisfying each entry's constraints,
/// exposed for tests and the example corpus. `seed` varies the instance.
pub mod sample {
    use super::*;

    /// A small invertible rational 2x2 matrix driven by a seed.
    pub fn invertible(seed: u64) -> Mat2Q {
        let pick = |k: u64| rat((k % 7) as i64 - 3, 1 + (k % 3) as i64);
        for shift in 0..64u64 {
            let s = seed.wrapping_add(shift.wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let m = Mat2Q::new(
                pick(s),
                pick(s >> 8),
                pick(s >> 16),
                pick(s >> 24),
            );
            if !m.det().is_zero() {
                return m;
            }
        }
        Mat2Q::identity()
    }

    /// A conjugated companion matrix with the given (monic quadratic)
    /// minimal polynomial.
    pub fn with_min_poly(p: &Poly, seed: u64) -> Mat2Q {
        assert_eq!(p.degree(), 2);
        let c = Mat2Q::companion2(&p.coeffs()[1], &p.coeffs()[0]);
        let s = invertible(seed);
        s.mul_mat(&c).mul_mat(&s.inverse().unwrap())
    }

    /// A random-ish invertible matrix with the given determinant.
    pub fn with_det(det: &Rat, seed: u64) -> Mat2Q {
        let base = invertible(seed);
        // scale one row to fix the determinant
        let f = det / base.det();
        Mat2Q::new(
            &base.e[0][0] * &f,
            &base.e[0][1] * &f,
            base.e[1][0].clone(),
            base.e[1][1].clone(),
        )
    }

    /// Sample parameters for an entry, suitable for `synthesize`.
    pub fn params_for(e: &CatalogEntry, seed: u64) -> (Mat2Q, Mat2Q) {
        match &e.shape {
            TemplateShape::Scalar { sign } => {
                let s = scalar2(rat_int(*sign));
                (s.clone(), s)
            }
            TemplateShape::Iota { sign } => {
                (scalar2(rat_int(*sign)), scalar2(rat_int(-sign)))
            }
            TemplateShape::DiagBoth { block_poly } => (
                with_min_poly(block_poly, seed),
                with_min_poly(block_poly, seed.wrapping_add(1)),
            ),
            TemplateShape::DiagLeft { block_poly, fixed } => {
                (with_min_poly(block_poly, seed), scalar2(rat_int(*fixed)))
            }
            TemplateShape::DiagRight { block_poly, fixed } => {
                (scalar2(rat_int(*fixed)), with_min_poly(block_poly, seed))
            }
            TemplateShape::DiagMixed { p, q } => {
                (with_min_poly(p, seed), with_min_poly(q, seed.wrapping_add(1)))
            }
            TemplateShape::AntiInverse { sign } => {
                let a2 = with_det(&Rat::one(), seed);
                let a3 = a2.inverse().unwrap().scale(&rat_int(*sign));
                (a2, a3)
            }
            TemplateShape::AntiProduct { prod_poly } => {
                let a2 = with_det(&Rat::one(), seed);
                let a3 = a2
                    .inverse()
                    .unwrap()
                    .mul_mat(&with_min_poly(prod_poly, seed.wrapping_add(1)));
                (a2, a3)
            }
            TemplateShape::Coupled { a1_poly, det_a2, .. } => (
                with_min_poly(a1_poly, seed),
                with_det(det_a2, seed.wrapping_add(1)),
            ),
            TemplateShape::CoupledScalar { eps1, .. } => (
                scalar2(rat_int(*eps1) * half()),
                with_det(&rat(3, 4), seed.wrapping_add(1)),
            ),
        }
    }

    /// A combination aI + bA1 with the requested determinant, found on a
    /// small rational grid. Such blocks share A1's fixed cusp shape.
    pub fn commuting_with_det(a1: &Mat2Q, det: &Rat, seed: u64) -> Option<Mat2Q> {
        let t = a1.trace();
        let d = a1.det();
        let mut hits = Vec::new();
        for an in -6i64..=6 {
            for ad in 1i64..=4 {
                for bn in -6i64..=6 {
                    for bd in 1i64..=4 {
                        let alpha = rat(an, ad);
                        let beta = rat(bn, bd);
                        // det(alpha I + beta A1) = alpha^2 + t alpha beta + d beta^2
                        let val = &alpha * &alpha + &t * &alpha * &beta + &d * &beta * &beta;
                        if val == *det {
                            hits.push(Mat2Q::identity().scale(&alpha).add_mat(&a1.scale(&beta)));
                        }
                    }
                }
            }
        }
        if hits.is_empty() {
            None
        } else {
            Some(hits[(seed as usize) % hits.len()].clone())
        }
    }

    /// Instance parameters whose blocks all satisfy the cusp relation for a
    /// shared cusp shape (None when no such instance exists, which happens
    /// for one coupled family). Used by the primary-matrix property tests.
    pub fn compatible_params(e: &CatalogEntry, seed: u64) -> Option<(Mat2Q, Mat2Q)> {
        let companion = |p: &Poly| Mat2Q::companion2(&p.coeffs()[1], &p.coeffs()[0]);
        match &e.shape {
            TemplateShape::Scalar { .. }
            | TemplateShape::Iota { .. }
            | TemplateShape::DiagBoth { .. }
            | TemplateShape::DiagLeft { .. }
            | TemplateShape::DiagRight { .. }
            | TemplateShape::DiagMixed { .. } => {
                // diagonal blocks carry independent cusp shapes; companion
                // forms make both shapes well defined
                let (p1, p2) = params_for(e, seed);
                let fix = |m: Mat2Q, p: Option<&Poly>| match p {
                    Some(poly) => companion(poly),
                    None => m,
                };
                match &e.shape {
                    TemplateShape::DiagBoth { block_poly } => {
                        Some((companion(block_poly), companion(block_poly)))
                    }
                    TemplateShape::DiagLeft { block_poly, .. } => {
                        Some((companion(block_poly), p2))
                    }
                    TemplateShape::DiagRight { block_poly, .. } => {
                        Some((p1, companion(block_poly)))
                    }
                    TemplateShape::DiagMixed { p, q } => Some((companion(p), companion(q))),
                    _ => Some((fix(p1, None), fix(p2, None))),
                }
            }
            TemplateShape::AntiInverse { sign } => {
                // det-1 block with complex eigenvalues: C(x^2 - x + 1)
                let a2 = companion(&p2(Rat::one(), -Rat::one()));
                let a3 = a2.inverse().unwrap().scale(&rat_int(*sign));
                Some((a2, a3))
            }
            TemplateShape::AntiProduct { prod_poly } => {
                let c = companion(prod_poly);
                let a2 = commuting_with_det(&c, &Rat::one(), seed)?;
                let a3 = a2.inverse().unwrap().mul_mat(&c);
                Some((a2, a3))
            }
            TemplateShape::Coupled { a1_poly, det_a2, .. } => {
                let a1 = companion(a1_poly);
                let a2 = commuting_with_det(&a1, det_a2, seed)?;
                Some((a1, a2))
            }
            TemplateShape::CoupledScalar { eps1, .. } => {
                // any det-3/4 block with complex eigenvalues works
                let a2 = companion(&p2(rat(3, 4), -Rat::one()));
                Some((scalar2(rat_int(*eps1) * half()), a2))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::linalg::Mat4;

    #[test]
    fn admissible_list() {
        let polys = admissible_min_polys();
        assert_eq!(polys.len(), 16);
        assert!(polys.contains(&Poly::from_i64(&[1, -1, 1])));
        // the two quartics with quintic cyclotomic factors are excluded
        assert!(!polys.contains(&Poly::from_i64(&[1, 1, 1, 1, 1])));
        assert!(!polys.contains(&Poly::from_i64(&[1, -1, 1, -1, 1])));
        // every catalog entry's minimal polynomial is admissible, and
        // x^4 - 1 has no realization of any type
        for e in entries() {
            assert!(polys.contains(&e.min_poly), "{} not admissible", e.id);
            assert_ne!(e.min_poly, Poly::from_i64(&[-1, 0, 0, 0, 1]));
        }
    }

    #[test]
    fn worked_matrix_matches() {
        let a = BlockMat::from_mat4(&corpus::v2788_a());
        let m = match_catalog(&a).unwrap();
        assert_eq!(m.template, "x2+1.III.2");
        assert_eq!(m.tag, TypeTag::TypeIII);
        assert_eq!(m.min_poly, Poly::from_i64(&[1, 0, 1]));
        assert_eq!(m.field_d, Some(-2));
        assert_eq!(m.a2, m.a1); // A2 = A1 for this instance

        let b = BlockMat::from_mat4(&corpus::v2788_b());
        let m = match_catalog(&b).unwrap();
        assert_eq!(m.template, "x2-x+1.III.3");
        assert_eq!(m.min_poly, Poly::from_i64(&[1, -1, 1]));
        assert_eq!(m.field_d, Some(-2));
    }

    #[test]
    fn synthesize_worked_matrices() {
        // the order-6 matrix comes from its (A1, A2) parameters
        let b = BlockMat::from_mat4(&corpus::v2788_b());
        let rebuilt = synthesize("x2-x+1.III.3", &b.a1, &b.a2).unwrap();
        assert_eq!(rebuilt.whole, corpus::v2788_b());
        // the order-4 matrix from A1 = A2
        let a = BlockMat::from_mat4(&corpus::v2788_a());
        let rebuilt = synthesize("x2+1.III.2", &a.a1, &a.a1).unwrap();
        assert_eq!(rebuilt.whole, corpus::v2788_a());
        // a Type II instance
        let shear = Mat2Q::from_i64(1, 1, 0, 1);
        let m = synthesize("x2-1.II", &shear, &shear.inverse().unwrap()).unwrap();
        assert_eq!(m.a2, shear);
        assert_eq!(m.a3, shear.inverse().unwrap());
        assert!(m.a1.is_zero() && m.a4.is_zero());
        // violated constraint is reported
        let err = synthesize("x2+1.III.2", &Mat2Q::identity(), &a.a1).unwrap_err();
        assert!(matches!(err, CatalogError::ConstraintViolation { .. }));
    }

    #[test]
    fn companion_diag_example() {
        // C(x^2-x+1) (+) I has minimal polynomial (x-1)(x^2-x+1)
        let c = Mat2Q::from_i64(0, -1, 1, 1);
        let m = BlockMat::from_mat4(&Mat4::direct_sum(&c, &Mat2Q::identity()));
        assert_eq!(m.whole.min_poly(), Poly::from_i64(&[-1, 2, -2, 1]));
        let hit = match_catalog(&m).unwrap();
        assert_eq!(hit.template, "x3-2x2+2x-1.I.1");
        assert_eq!(hit.field_d, Some(-3));
    }

    #[test]
    fn specials_match() {
        let id = BlockMat::from_mat4(&Mat4::identity());
        assert_eq!(match_catalog(&id).unwrap().template, "x-1.I");
        let neg = BlockMat::from_mat4(&Mat4::identity().neg());
        assert_eq!(match_catalog(&neg).unwrap().template, "x+1.I");
        let iota = BlockMat::from_mat4(&Mat4::iota());
        assert_eq!(match_catalog(&iota).unwrap().template, "x2-1.I.1");
        let niota = BlockMat::from_mat4(&Mat4::iota().neg());
        assert_eq!(match_catalog(&niota).unwrap().template, "x2-1.I.2");
    }
}
