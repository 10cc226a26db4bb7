//! Exact solver for the homogeneous constraint Theta(P U) = Pbar Theta(U)
//! on pairs of degree-n homogeneous polynomials over Q(sqrt(D)): kernel
//! computation, the eigenbasis transform, structural classification of
//! solutions, and the parity/gradient symmetry filter.

use crate::exactnum::{unity_order, QuadNum};
use crate::linalg::Mat2K;
use crate::spectral::{eigen2, eigen_ratio_unity_order, PrimaryMat};
use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunceqError {
    #[error("the (1,2) entry of the primary matrix is zero")]
    ZeroOmega2,
    #[error("the eigenvalues coincide")]
    DegenerateEigen,
    #[error("the characteristic polynomial is irreducible over the field")]
    Irreducible,
    #[error("solution violates the structural dichotomy: {0}")]
    StructureViolation(String),
}

/// A homogeneous polynomial of degree n in (u1, u2): `coeffs[k]` multiplies
/// u1^k u2^(n-k).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomPoly {
    pub degree: usize,
    pub coeffs: Vec<QuadNum>,
}

impl HomPoly {
    pub fn zero(degree: usize) -> Self {
        Self { degree, coeffs: vec![QuadNum::from_int(0); degree + 1] }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(QuadNum::is_zero)
    }

    pub fn monomial(degree: usize, u1_exp: usize, c: QuadNum) -> Self {
        let mut p = Self::zero(degree);
        p.coeffs[u1_exp] = c;
        p
    }

    pub fn scale(&self, c: &QuadNum) -> Self {
        Self {
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.degree, rhs.degree);
        Self {
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// d/du1: degree drops by one.
    pub fn d_u1(&self) -> Self {
        let n = self.degree;
        if n == 0 {
            return Self::zero(0);
        }
        let coeffs = (0..n)
            .map(|j| &self.coeffs[j + 1] * &QuadNum::from_int((j + 1) as i64))
            .collect();
        Self { degree: n - 1, coeffs }
    }

    /// d/du2.
    pub fn d_u2(&self) -> Self {
        let n = self.degree;
        if n == 0 {
            return Self::zero(0);
        }
        let coeffs = (0..n)
            .map(|j| &self.coeffs[j] * &QuadNum::from_int((n - j) as i64))
            .collect();
        Self { degree: n - 1, coeffs }
    }

    /// Substitutes (u1, u2) <- (m00 u1 + m01 u2, m10 u1 + m11 u2).
    pub fn compose(&self, m: &Mat2K) -> Self {
        let n = self.degree;
        let row1 = linear_power_table(&m.e[0][0], &m.e[0][1], n);
        let row2 = linear_power_table(&m.e[1][0], &m.e[1][1], n);
        let mut out = Self::zero(n);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = convolve(&row1[k], &row2[n - k]);
            for (j, t) in term.iter().enumerate() {
                out.coeffs[j] = &out.coeffs[j] + &(t * c);
            }
        }
        out
    }
}

/// (a u1 + b u2)^e for e = 0..=n, as coefficient vectors by u1-exponent.
fn linear_power_table(a: &QuadNum, b: &QuadNum, n: usize) -> Vec<Vec<QuadNum>> {
    let mut table = Vec::with_capacity(n + 1);
    table.push(vec![QuadNum::from_int(1)]);
    for e in 1..=n {
        let prev = &table[e - 1];
        let mut cur = vec![QuadNum::from_int(0); e + 1];
        for (i, c) in prev.iter().enumerate() {
            // multiply u1^i u2^{e-1-i} by (a u1 + b u2)
            cur[i + 1] = &cur[i + 1] + &(c * a);
            cur[i] = &cur[i] + &(c * b);
        }
        table.push(cur);
    }
    table
}

fn convolve(a: &[QuadNum], b: &[QuadNum]) -> Vec<QuadNum> {
    let mut out = vec![QuadNum::from_int(0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + &(x * y);
        }
    }
    out
}

/// A pair (Theta1, Theta2) of homogeneous polynomials of one degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThetaPair {
    pub theta1: HomPoly,
    pub theta2: HomPoly,
}

impl ThetaPair {
    pub fn degree(&self) -> usize {
        self.theta1.degree
    }

    pub fn is_zero(&self) -> bool {
        self.theta1.is_zero() && self.theta2.is_zero()
    }

    fn from_vector(v: &[QuadNum], n: usize) -> Self {
        ThetaPair {
            theta1: HomPoly { degree: n, coeffs: v[..n + 1].to_vec() },
            theta2: HomPoly { degree: n, coeffs: v[n + 1..].to_vec() },
        }
    }

    fn to_vector(&self) -> Vec<QuadNum> {
        let mut v = self.theta1.coeffs.clone();
        v.extend(self.theta2.coeffs.iter().cloned());
        v
    }
}

/// Reduced row echelon form over Q(sqrt(D)); returns pivot columns.
fn rref(a: &mut Vec<Vec<QuadNum>>) -> Vec<usize> {
    let rows = a.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = a[0].len();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        let pv = a[rank][col].clone();
        for x in a[rank].iter_mut() {
            *x = &*x / &pv;
        }
        for r in 0..rows {
            if r != rank && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..cols {
                    let v = &a[rank][j] * &f;
                    a[r][j] = &a[r][j] - &v;
                }
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows {
            break;
        }
    }
    pivots
}

/// Kernel basis of the matrix, echelonized deterministically (one basis
/// vector per free column, in column order).
fn kernel_basis(matrix: Vec<Vec<QuadNum>>) -> Vec<Vec<QuadNum>> {
    let cols = if matrix.is_empty() { 0 } else { matrix[0].len() };
    let mut a = matrix;
    let pivots = rref(&mut a);
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivots.contains(&free) {
            continue;
        }
        let mut v = vec![QuadNum::from_int(0); cols];
        v[free] = QuadNum::from_int(1);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -&a[r][free];
        }
        basis.push(v);
    }
    basis
}

/// Exact kernel of (Theta1, Theta2) -> Theta(P U) - Pbar Theta(U) on the
/// 2(n+1)-dimensional coefficient space, as a deterministic echelonized
/// basis. Works whether or not the eigenvalues lie in the field.
pub fn constraint_kernel(p: &PrimaryMat, n: usize) -> Vec<ThetaPair> {
    let dim = 2 * (n + 1);
    let mut columns: Vec<Vec<QuadNum>> = Vec::with_capacity(dim);
    for which in 0..2 {
        for k in 0..=n {
            let mono = HomPoly::monomial(n, k, QuadNum::from_int(1));
            let (t1, t2) = if which == 0 {
                (mono, HomPoly::zero(n))
            } else {
                (HomPoly::zero(n), mono)
            };
            // image under the operator
            let comp1 = t1.compose(&p.p);
            let comp2 = t2.compose(&p.p);
            let lin1 = t1.scale(&p.pbar.e[0][0]).add(&t2.scale(&p.pbar.e[0][1]));
            let lin2 = t1.scale(&p.pbar.e[1][0]).add(&t2.scale(&p.pbar.e[1][1]));
            let out = ThetaPair {
                theta1: comp1.add(&lin1.scale(&QuadNum::from_int(-1))),
                theta2: comp2.add(&lin2.scale(&QuadNum::from_int(-1))),
            };
            columns.push(out.to_vector());
        }
    }
    // rows index output coordinates, columns index input coordinates
    let matrix: Vec<Vec<QuadNum>> = (0..dim)
        .map(|r| (0..dim).map(|c| columns[c][r].clone()).collect())
        .collect();
    kernel_basis(matrix)
        .into_iter()
        .map(|v| ThetaPair::from_vector(&v, n))
        .collect()
}

/// Independent re-check of the defining identity by direct monomial
/// expansion (repeated convolution, no shared operator assembly).
pub fn verify_constraint(p: &PrimaryMat, pair: &ThetaPair) -> bool {
    let n = pair.degree();
    let row1 = [p.p.e[0][0].clone(), p.p.e[0][1].clone()];
    let row2 = [p.p.e[1][0].clone(), p.p.e[1][1].clone()];
    let expand = |theta: &HomPoly| -> Vec<QuadNum> {
        let mut acc = vec![QuadNum::from_int(0); n + 1];
        for (k, c) in theta.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = vec![QuadNum::from_int(1)];
            for _ in 0..k {
                term = convolve(&term, &[row1[1].clone(), row1[0].clone()]);
            }
            for _ in 0..n - k {
                term = convolve(&term, &[row2[1].clone(), row2[0].clone()]);
            }
            // term is now by ascending u1-exponent
            for (j, t) in term.iter().enumerate() {
                acc[j] = &acc[j] + &(t * c);
            }
        }
        acc
    };
    let lhs1 = expand(&pair.theta1);
    let lhs2 = expand(&pair.theta2);
    for j in 0..=n {
        let rhs1 = &(&p.pbar.e[0][0] * &pair.theta1.coeffs[j])
            + &(&p.pbar.e[0][1] * &pair.theta2.coeffs[j]);
        let rhs2 = &(&p.pbar.e[1][0] * &pair.theta1.coeffs[j])
            + &(&p.pbar.e[1][1] * &pair.theta2.coeffs[j]);
        if lhs1[j] != rhs1 || lhs2[j] != rhs2 {
            return false;
        }
    }
    true
}

/// The diagonalizing pair of basis changes: S_lambda for P, S_zeta for its
/// conjugate, with the eigenvalue lists.
#[derive(Debug, Clone)]
pub struct EigenTransform {
    pub s_lambda: Mat2K,
    pub s_zeta: Mat2K,
    pub lambdas: (QuadNum, QuadNum),
    pub zetas: (QuadNum, QuadNum),
    pub omega1: QuadNum,
    pub omega2: QuadNum,
    pub field_d: i64,
}

pub fn eigen_transform(p: &PrimaryMat) -> Result<EigenTransform, FunceqError> {
    let omega1 = p.p.e[0][0].clone();
    let omega2 = p.p.e[0][1].clone();
    if omega2.is_zero() {
        return Err(FunceqError::ZeroOmega2);
    }
    let data = eigen2(&p.p, p.d);
    let (l1, l2) = data.split.ok_or(FunceqError::Irreducible)?;
    if l1 == l2 {
        return Err(FunceqError::DegenerateEigen);
    }
    let conj_data = eigen2(&p.pbar, p.d);
    let (z1, z2) = conj_data.split.ok_or(FunceqError::Irreducible)?;
    let s_lambda = Mat2K::new(
        omega2.clone(),
        omega2.clone(),
        &l1 - &omega1,
        &l2 - &omega1,
    );
    let ob1 = omega1.conj();
    let ob2 = omega2.conj();
    let s_zeta = Mat2K::new(ob2.clone(), ob2, &z1 - &ob1, &z2 - &ob1);
    Ok(EigenTransform {
        s_lambda,
        s_zeta,
        lambdas: (l1, l2),
        zetas: (z1, z2),
        omega1,
        omega2,
        field_d: p.d,
    })
}

impl EigenTransform {
    /// Moves a raw solution into eigen coordinates:
    /// (g1, g2) = S_zeta^-1 (Theta1, Theta2), then substitutes U = S_lambda Utilde.
    pub fn to_eigenbasis(&self, pair: &ThetaPair) -> ThetaPair {
        let inv = self.s_zeta.inverse().expect("distinct eigenvalues");
        let g1 = pair.theta1.scale(&inv.e[0][0]).add(&pair.theta2.scale(&inv.e[0][1]));
        let g2 = pair.theta1.scale(&inv.e[1][0]).add(&pair.theta2.scale(&inv.e[1][1]));
        ThetaPair {
            theta1: g1.compose(&self.s_lambda),
            theta2: g2.compose(&self.s_lambda),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SolutionForm {
    /// Constant multiple of u1^k u2^l.
    Monomial { k: usize, l: usize },
    /// u1^k u2^l times a product of `blocks` factors (u1^d + beta u2^d).
    Product { k: usize, l: usize, d: u32, blocks: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct StructureReport {
    /// Forms of the two eigen components (None when the component vanishes).
    pub g1: Option<SolutionForm>,
    pub g2: Option<SolutionForm>,
}

fn classify_component(
    g: &HomPoly,
    lambdas: &(QuadNum, QuadNum),
    zeta: &QuadNum,
    ratio_order: Option<u32>,
) -> Result<Option<SolutionForm>, FunceqError> {
    if g.is_zero() {
        return Ok(None);
    }
    let n = g.degree;
    let lo = (0..=n).find(|&j| !g.coeffs[j].is_zero()).unwrap();
    let hi = (0..=n).rev().find(|&j| !g.coeffs[j].is_zero()).unwrap();
    // scaling law: every supported monomial must have the same eigenvalue
    for j in lo..=hi {
        if g.coeffs[j].is_zero() {
            continue;
        }
        let ev = &lambdas.0.pow(j as u32) * &lambdas.1.pow((n - j) as u32);
        if ev != *zeta {
            return Err(FunceqError::StructureViolation(format!(
                "monomial u1^{j} breaks the eigenvalue law"
            )));
        }
    }
    let k = lo;
    let l = n - hi;
    if hi == lo {
        return Ok(Some(SolutionForm::Monomial { k, l }));
    }
    let Some(d) = ratio_order else {
        return Err(FunceqError::StructureViolation(
            "non-monomial solution with a non-root-of-unity eigenvalue ratio".into(),
        ));
    };
    if (hi - lo) % d as usize != 0 {
        return Err(FunceqError::StructureViolation(
            "support width is not a multiple of the ratio order".into(),
        ));
    }
    for j in lo..=hi {
        if !g.coeffs[j].is_zero() && (j - lo) % d as usize != 0 {
            return Err(FunceqError::StructureViolation(
                "support is not an arithmetic progression of the ratio order".into(),
            ));
        }
    }
    Ok(Some(SolutionForm::Product { k, l, d, blocks: (hi - lo) / d as usize }))
}

/// Classifies each kernel element in the eigenbasis: a constant multiple of
/// a monomial when lambda1/lambda2 is not a root of unity, else a monomial
/// times a product of (u1^d + beta u2^d) blocks, with the exponent law
/// checked exactly.
pub fn structure_classify(
    basis: &[ThetaPair],
    t: &EigenTransform,
) -> Result<Vec<StructureReport>, FunceqError> {
    let trace = &t.lambdas.0 + &t.lambdas.1;
    let det = &t.lambdas.0 * &t.lambdas.1;
    let ratio_order = eigen_ratio_unity_order(&trace, &det, t.field_d);
    let mut out = Vec::new();
    for pair in basis {
        let eig = t.to_eigenbasis(pair);
        let g1 = classify_component(&eig.theta1, &t.lambdas, &t.zetas.0, ratio_order)?;
        let g2 = classify_component(&eig.theta2, &t.lambdas, &t.zetas.1, ratio_order)?;
        out.push(StructureReport { g1, g2 });
    }
    Ok(out)
}

/// Intersects the span of `basis` with the parity subspace (Theta1 even in
/// u2, Theta2 odd in u2) and the gradient relation
/// a dTheta1/du2 = dTheta2/du1. Returns an echelonized basis.
pub fn symmetry_filter(basis: &[ThetaPair], a: &QuadNum) -> Vec<ThetaPair> {
    if basis.is_empty() {
        return Vec::new();
    }
    let n = basis[0].degree();
    let dim = 2 * (n + 1);
    // constraint rows applied to a coefficient vector
    let mut rows: Vec<Vec<QuadNum>> = Vec::new();
    let zero = QuadNum::from_int(0);
    for j in 0..=n {
        if (n - j) % 2 == 1 {
            let mut r = vec![zero.clone(); dim];
            r[j] = QuadNum::from_int(1); // Theta1 coefficient of odd u2-power
            rows.push(r);
        }
        if (n - j) % 2 == 0 {
            let mut r = vec![zero.clone(); dim];
            r[n + 1 + j] = QuadNum::from_int(1); // Theta2 even u2-power
            rows.push(r);
        }
    }
    for j in 0..n {
        // a (n-j) Theta1[j] - (j+1) Theta2[j+1] = 0
        let mut r = vec![zero.clone(); dim];
        r[j] = a * &QuadNum::from_int((n - j) as i64);
        r[n + 1 + j + 1] = QuadNum::from_int(-((j + 1) as i64));
        rows.push(r);
    }
    // matrix of constraints applied to the basis combination coefficients
    let vecs: Vec<Vec<QuadNum>> = basis.iter().map(ThetaPair::to_vector).collect();
    let applied: Vec<Vec<QuadNum>> = rows
        .iter()
        .map(|r| {
            vecs.iter()
                .map(|v| {
                    let mut acc = zero.clone();
                    for (c, x) in r.iter().zip(v) {
                        if !c.is_zero() && !x.is_zero() {
                            acc = &acc + &(c * x);
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect();
    let combos = kernel_basis(applied);
    combos
        .into_iter()
        .map(|combo| {
            let mut acc = vec![zero.clone(); dim];
            for (c, v) in combo.iter().zip(&vecs) {
                if c.is_zero() {
                    continue;
                }
                for (a, x) in acc.iter_mut().zip(v) {
                    *a = &*a + &(c * x);
                }
            }
            ThetaPair::from_vector(&acc, n)
        })
        .collect()
}

/// The split form of the gradient relation in the eigenbasis: with
/// c_ij = (lambda_i - omega1)(zeta_j - conj(omega1)) + a omega2 conj(omega2),
/// the relation separates into
///   c11 dg1/du2 + c12 dg2/du2 = 0 and c21 dg1/du1 + c22 dg2/du1 = 0
/// exactly when the ratio order is at least 3 or the solutions are pure
/// monomials; for ratio order 2 the mixed splitting below holds instead.
/// Returns (first, second) verdicts for the two split identities.
pub fn gradient_split_check(
    pair: &ThetaPair,
    t: &EigenTransform,
    a: &QuadNum,
) -> (bool, bool) {
    let eig = t.to_eigenbasis(pair);
    let ob1 = t.omega1.conj();
    let ob2 = t.omega2.conj();
    let aw = &(a * &t.omega2) * &ob2;
    let c = |lam: &QuadNum, zet: &QuadNum| -> QuadNum {
        &(&(lam - &t.omega1) * &(zet - &ob1)) + &aw
    };
    let c11 = c(&t.lambdas.0, &t.zetas.0);
    let c12 = c(&t.lambdas.0, &t.zetas.1);
    let c21 = c(&t.lambdas.1, &t.zetas.0);
    let c22 = c(&t.lambdas.1, &t.zetas.1);
    // split per the mixed pairing: -c21 dg1/du1 + c12 dg2/du2 = 0 and
    // c11 dg1/du2 - c22 dg2/du1 = 0
    let first = eig
        .theta1
        .d_u1()
        .scale(&-&c21)
        .add(&eig.theta2.d_u2().scale(&c12))
        .is_zero();
    let second = eig
        .theta1
        .d_u2()
        .scale(&c11)
        .add(&eig.theta2.d_u1().scale(&-&c22))
        .is_zero();
    (first, second)
}

/// Kernel closure property used in tests: membership of a linear combination.
pub fn in_kernel(p: &PrimaryMat, pair: &ThetaPair) -> bool {
    let comp1 = pair.theta1.compose(&p.p);
    let comp2 = pair.theta2.compose(&p.p);
    let lin1 = pair
        .theta1
        .scale(&p.pbar.e[0][0])
        .add(&pair.theta2.scale(&p.pbar.e[0][1]));
    let lin2 = pair
        .theta1
        .scale(&p.pbar.e[1][0])
        .add(&pair.theta2.scale(&p.pbar.e[1][1]));
    comp1.add(&lin1.scale(&QuadNum::from_int(-1))).is_zero()
        && comp2.add(&lin2.scale(&QuadNum::from_int(-1))).is_zero()
}

/// True when lambda/mu ranges over the field's root of unity list; used by
/// callers deciding between the monomial and product regimes.
pub fn is_field_root_of_unity(x: &QuadNum, field_d: i64) -> bool {
    unity_order(x, field_d).is_some()
}
