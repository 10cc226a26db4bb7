//! The primary matrix of an automorphism candidate, its eigendata over
//! Q(sqrt(D)), and exact root-of-unity membership for quadratic eigenvalue
//! pairs.
//!
//! For a block matrix whose blocks satisfy the cusp relation
//! tau (a + b tau) = c + d tau, the primary matrix collects the block
//! eigenvalues omega_j = a_j + b_j tau; its conjugate is the entrywise field
//! conjugate. Necessary conditions for membership in the automorphism group
//! are decided against these data.

use crate::blocktype::BlockMat;
use crate::exactnum::{rat_sqrt, squarefree_part, unity_order, QuadNum, Rat};
use crate::linalg::{cyclotomics, Mat2K, Mat2Q, Poly};
use num::{Signed, Zero};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpectralError {
    #[error("cusp relation violated for block {0}")]
    RelationViolation(usize),
    #[error("cusp shapes lie in different quadratic fields")]
    FieldMismatch,
    #[error("blocks do not commute with A1")]
    PreconditionFailed,
}

/// The matrix of block eigenvalues omega_j = a_j + b_j tau, with its field
/// conjugate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimaryMat {
    pub p: Mat2K,
    pub pbar: Mat2K,
    pub d: i64,
}

impl PrimaryMat {
    pub fn from_mat(p: Mat2K, d: i64) -> Self {
        let pbar = p.conj();
        Self { p, pbar, d }
    }
}

/// Exact eigendata of a 2x2 matrix over Q(sqrt(D)). The split is present
/// exactly when the discriminant has a square root in the field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenData {
    pub trace: QuadNum,
    pub det: QuadNum,
    pub discriminant: QuadNum,
    pub split: Option<(QuadNum, QuadNum)>,
}

/// True iff tau (a + b tau) = c + d tau for A = `[[a,b],[c,d]]`.
pub fn cusp_relation_check(a: &Mat2Q, tau: &QuadNum) -> bool {
    let aa = QuadNum::from_rat(a.e[0][0].clone());
    let ab = QuadNum::from_rat(a.e[0][1].clone());
    let ac = QuadNum::from_rat(a.e[1][0].clone());
    let ad = QuadNum::from_rat(a.e[1][1].clone());
    let lhs = tau * &(&aa + &(&ab * tau));
    let rhs = &ac + &(&ad * tau);
    lhs == rhs
}

/// The cusp shape determined by a single block: the root of
/// b x^2 + (a - d) x - c with positive imaginary part, when the block has
/// complex eigenvalues. Scalar blocks determine nothing (returns None).
pub fn cusp_shape_for_block(a: &Mat2Q) -> Option<QuadNum> {
    let b = &a.e[0][1];
    if b.is_zero() {
        return None;
    }
    let t = &a.e[0][0] - &a.e[1][1];
    let disc = &t * &t + crate::exactnum::rat_int(4) * b * &a.e[1][0];
    if !disc.is_negative() {
        return None;
    }
    let d_big = squarefree_part(&disc);
    let d = i64::try_from(&d_big).ok()?;
    let m = rat_sqrt(&(&disc / Rat::from_integer(d_big)))?;
    let two_b = crate::exactnum::rat_int(2) * b;
    let re = (&a.e[1][1] - &a.e[0][0]) / &two_b;
    let im = (m / two_b).abs();
    Some(QuadNum::new(re, im, d))
}

/// Builds the primary matrix of M for cusp shapes tau1, tau2 (same field,
/// positive imaginary part). omega_j = a_j + b_j tau with tau = tau1 for
/// blocks A1, A2 and tau2 for A3, A4.
pub fn primary_matrix(
    m: &BlockMat,
    tau1: &QuadNum,
    tau2: &QuadNum,
) -> Result<PrimaryMat, SpectralError> {
    for tau in [tau1, tau2] {
        if !tau.b.is_positive() {
            return Err(SpectralError::RelationViolation(0));
        }
    }
    if tau1.d != tau2.d {
        return Err(SpectralError::FieldMismatch);
    }
    let blocks = [&m.a1, &m.a2, &m.a3, &m.a4];
    let taus = [tau1, tau1, tau2, tau2];
    let mut omega = Vec::with_capacity(4);
    for (j, (block, tau)) in blocks.iter().zip(taus.iter()).enumerate() {
        if !cusp_relation_check(block, tau) {
            return Err(SpectralError::RelationViolation(j + 1));
        }
        let w = &QuadNum::from_rat(block.e[0][0].clone())
            + &(&QuadNum::from_rat(block.e[0][1].clone()) * *tau);
        omega.push(w);
    }
    let p = Mat2K::new(
        omega[0].clone(),
        omega[1].clone(),
        omega[2].clone(),
        omega[3].clone(),
    );
    Ok(PrimaryMat::from_mat(p, tau1.d))
}

/// Trace, determinant and (when the discriminant is a field square) the
/// eigenvalue pair of a 2x2 matrix over Q(sqrt(D)).
pub fn eigen2(p: &Mat2K, field_d: i64) -> EigenData {
    let trace = p.trace();
    let det = p.det();
    let disc = &(&trace * &trace) - &(&QuadNum::from_int(4) * &det);
    let split = disc.sqrt_in_field(field_d).map(|s| {
        let two = QuadNum::from_int(2);
        let l1 = &(&trace + &s) / &two;
        let l2 = &(&trace - &s) / &two;
        (l1, l2)
    });
    EigenData { trace, det, discriminant: disc, split }
}

/// Remainder test: does x^2 - t x + d divide f over Q(sqrt(D))?
fn quadratic_divides(t: &QuadNum, d: &QuadNum, f: &Poly) -> bool {
    // x^k = r1 x + r0 modulo x^2 - t x + d, accumulated over f's coefficients
    let mut r1 = QuadNum::from_int(0);
    let mut r0 = QuadNum::from_int(0);
    let mut p1 = QuadNum::from_int(0); // x^k coefficient of x
    let mut p0 = QuadNum::from_int(1); // x^k coefficient of 1
    for (k, c) in f.coeffs().iter().enumerate() {
        if k > 0 {
            // x^{k} = (p1 x + p0) x = p1 (t x - d) + p0 x
            let n1 = &(&p1 * t) + &p0;
            let n0 = -&(&p1 * d);
            p1 = n1;
            p0 = n0;
        }
        let cq = QuadNum::from_rat(c.clone());
        r1 = &r1 + &(&p1 * &cq);
        r0 = &r0 + &(&p0 * &cq);
    }
    r1.is_zero() && r0.is_zero()
}

/// Decides whether both roots of x^2 - trace x + det are roots of unity, by
/// finite enumeration over the candidate orders {1..6, 8, 10, 12}. Returns
/// the pair of orders.
///
/// When the quadratic splits over the field, each root is checked against
/// the field's root-of-unity table; when it is irreducible, the two roots
/// are conjugate (hence of equal order) and the quadratic must divide one
/// cyclotomic polynomial from the table.
pub fn quad_roots_of_unity(
    trace: &QuadNum,
    det: &QuadNum,
    field_d: i64,
) -> Option<(u32, u32)> {
    let disc = &(trace * trace) - &(&QuadNum::from_int(4) * det);
    if let Some(s) = disc.sqrt_in_field(field_d) {
        let two = QuadNum::from_int(2);
        let l1 = &(trace + &s) / &two;
        let l2 = &(trace - &s) / &two;
        let o1 = unity_order(&l1, field_d)?;
        let o2 = unity_order(&l2, field_d)?;
        Some((o1, o2))
    } else {
        for (order, phi) in cyclotomics() {
            if phi.degree() < 2 {
                continue;
            }
            if quadratic_divides(trace, det, &phi) {
                return Some((order, order));
            }
        }
        None
    }
}

/// Order of the eigenvalue ratio lambda1/lambda2 of x^2 - t x + d as a root
/// of unity, if it is one. Works without splitting the quadratic: the ratio
/// r satisfies r^2 - s r + 1 = 0 with s = (t^2 - 2d)/d.
pub fn eigen_ratio_unity_order(t: &QuadNum, d: &QuadNum, field_d: i64) -> Option<u32> {
    if d.is_zero() {
        return None;
    }
    let s = &(&(t * t) - &(&QuadNum::from_int(2) * d)) / d;
    quad_roots_of_unity(&s, &QuadNum::from_int(1), field_d).map(|(o1, o2)| o1.max(o2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AutVerdict {
    TraceIotaZero,
    RootsOfUnity,
    Violation,
    NotApplicable,
}

impl AutVerdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            AutVerdict::TraceIotaZero => "trace_iota_zero",
            AutVerdict::RootsOfUnity => "roots_of_unity",
            AutVerdict::Violation => "violation",
            AutVerdict::NotApplicable => "not_applicable",
        }
    }
}

/// The necessary condition for membership in Aut X: a primary matrix with
/// nonzero (1,2)-entry and distinct nonzero eigenvalues must either have
/// tr(P iota) = 0 or both eigenvalues roots of unity.
pub fn aut_necessary_check(p: &PrimaryMat) -> AutVerdict {
    let data = eigen2(&p.p, p.d);
    let omega2 = &p.p.e[0][1];
    if omega2.is_zero() || data.det.is_zero() || data.discriminant.is_zero() {
        return AutVerdict::NotApplicable;
    }
    let tr_p_iota = &p.p.e[0][0] - &p.p.e[1][1];
    if tr_p_iota.is_zero() {
        return AutVerdict::TraceIotaZero;
    }
    if quad_roots_of_unity(&data.trace, &data.det, p.d).is_some() {
        return AutVerdict::RootsOfUnity;
    }
    AutVerdict::Violation
}

/// For block matrices whose off blocks are polynomial in A1 (checked by
/// commutation), the primary matrix of M^n equals the n-th power of the
/// primary matrix of M.
pub fn primary_power_property(
    m: &BlockMat,
    tau1: &QuadNum,
    tau2: &QuadNum,
    n: u32,
) -> Result<bool, SpectralError> {
    for other in [&m.a2, &m.a3, &m.a4] {
        if other.mul_mat(&m.a1) != m.a1.mul_mat(other) {
            return Err(SpectralError::PreconditionFailed);
        }
    }
    let p = primary_matrix(m, tau1, tau2)?;
    let mn = BlockMat::from_mat4(&m.whole.pow(n));
    let pn = primary_matrix(&mn, tau1, tau2)?;
    Ok(pn.p == p.p.pow(n))
}
